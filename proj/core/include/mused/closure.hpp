#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "mused/syllogism.hpp"

namespace mused {

/// Sorted, duplicate-free set of terms.
using TermSet = std::vector<TermId>;

TermSet make_term_set(std::vector<TermId> terms);
bool is_subset(const TermSet& sub, const TermSet& super);

struct RelationRecord {
    Proposition prop;
    /// Middle terms eliminated on the way from the premises to `prop`.
    TermSet eliminated;
    friend bool operator==(const RelationRecord&, const RelationRecord&) = default;
};

class Contradiction : public std::runtime_error {
public:
    Contradiction(const Proposition& first, const Proposition& second);
    Proposition first;
    Proposition second;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClosureOptions {
    std::size_t max_terms = 64;
    std::size_t max_records = 1u << 20;
};

/// Everything derivable from a premise set, each fact carrying the minimal
/// sets of middle terms whose elimination produces it.
class RelationTable {
public:
    /// Minimal elimination sets for exactly this (subject, predicate, form).
    const std::vector<TermSet>& exact(const Proposition& p) const;

    /// Minimal elimination sets for p, also looking at the converse for E/I.
    std::vector<TermSet> find(const Proposition& p) const;

    bool contains(const Proposition& p) const;

    /// All records, ordered by proposition then elimination set.
    std::vector<RelationRecord> records() const;

    std::size_t size() const;
    const std::map<Proposition, std::vector<TermSet>>& entries() const { return entries_; }
    const TermSet& terms() const { return terms_; }

private:
    friend RelationTable closure(std::span<const Proposition>, const ClosureOptions&);
    std::map<Proposition, std::vector<TermSet>> entries_;
    TermSet terms_;
};

/// Forward-chains all fifteen moods to a fixpoint. Throws Contradiction if two
/// premises (or derived facts) are contradictory, ResourceLimit past the caps.
RelationTable closure(std::span<const Proposition> premises, const ClosureOptions& options = {});

bool derivable(std::span<const Proposition> premises, const Proposition& goal);

}  // namespace mused
