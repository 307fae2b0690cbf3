#include "mused/closure.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>

namespace mused {

TermSet make_term_set(std::vector<TermId> terms) {
    std::ranges::sort(terms);
    auto tail = std::ranges::unique(terms);
    terms.erase(tail.begin(), tail.end());
    return terms;
}

bool is_subset(const TermSet& sub, const TermSet& super) {
    return std::ranges::includes(super, sub);
}

Contradiction::Contradiction(const Proposition& a, const Proposition& b)
    : std::runtime_error("contradictory propositions " + to_string(a) + " and " + to_string(b)),
      first(a),
      second(b) {}

const std::vector<TermSet>& RelationTable::exact(const Proposition& p) const {
    static const std::vector<TermSet> kEmpty;
    auto it = entries_.find(p);
    return it == entries_.end() ? kEmpty : it->second;
}

std::vector<TermSet> RelationTable::find(const Proposition& p) const {
    std::vector<TermSet> out = exact(p);
    if (is_symmetric(p.form)) {
        for (const auto& set : exact({p.predicate, p.subject, p.form})) {
            bool dominated = std::ranges::any_of(out, [&](const TermSet& s) { return is_subset(s, set); });
            if (dominated) continue;
            std::erase_if(out, [&](const TermSet& s) { return is_subset(set, s); });
            out.push_back(set);
        }
        std::ranges::sort(out);
    }
    return out;
}

bool RelationTable::contains(const Proposition& p) const {
    return !exact(p).empty() || (is_symmetric(p.form) && !exact({p.predicate, p.subject, p.form}).empty());
}

std::vector<RelationRecord> RelationTable::records() const {
    std::vector<RelationRecord> out;
    for (const auto& [prop, sets] : entries_)
        for (const auto& set : sets) out.push_back({prop, set});
    return out;
}

std::size_t RelationTable::size() const {
    std::size_t n = 0;
    for (const auto& [prop, sets] : entries_) n += sets.size();
    return n;
}

namespace {

using Mask = std::uint64_t;

struct Record {
    Proposition prop;
    Mask eliminated = 0;
    bool alive = true;
};

class Chainer {
public:
    Chainer(const TermSet& terms, const ClosureOptions& options) : terms_(terms), options_(options) {
        by_term_.resize(terms.size());
    }

    void add(const Proposition& prop, Mask eliminated) {
        if (prop.subject == prop.predicate) return;
        auto& slots = entries_[prop];
        for (std::size_t idx : slots)
            if ((records_[idx].eliminated & ~eliminated) == 0) return;
        std::erase_if(slots, [&](std::size_t idx) {
            if ((eliminated & ~records_[idx].eliminated) != 0) return false;
            records_[idx].alive = false;
            return true;
        });
        check_consistent(prop);
        if (records_.size() >= options_.max_records)
            throw ResourceLimit("closure exceeded " + std::to_string(options_.max_records) + " records");
        const std::size_t idx = records_.size();
        records_.push_back({prop, eliminated});
        slots.push_back(idx);
        by_term_[index(prop.subject)].push_back(idx);
        by_term_[index(prop.predicate)].push_back(idx);
        queue_.push_back(idx);
    }

    void run() {
        while (!queue_.empty()) {
            const std::size_t idx = queue_.front();
            queue_.pop_front();
            if (!records_[idx].alive) continue;
            const Record current = records_[idx];
            for (TermId shared : {current.prop.subject, current.prop.predicate}) {
                // Copy: add() may grow the list while we iterate.
                const std::vector<std::size_t> partners = by_term_[index(shared)];
                for (std::size_t other : partners) {
                    if (other == idx || !records_[other].alive) continue;
                    combine(current, records_[other]);
                }
            }
        }
    }

    std::map<Proposition, std::vector<TermSet>> export_entries() const {
        std::map<Proposition, std::vector<TermSet>> out;
        for (const auto& [prop, slots] : entries_) {
            if (slots.empty()) continue;
            auto& sets = out[prop];
            for (std::size_t idx : slots) sets.push_back(to_set(records_[idx].eliminated));
            std::ranges::sort(sets);
        }
        return out;
    }

private:
    void combine(const Record& a, const Record& b) {
        const Mask eliminated = a.eliminated | b.eliminated;
        for (const Proposition& pa : variants(a.prop))
            for (const Proposition& pb : variants(b.prop))
                for (const MoodMatch& m : match_moods(pa, pb))
                    add(m.conclusion, eliminated | bit(m.middle));
    }

    static std::vector<Proposition> variants(const Proposition& p) {
        if (!is_symmetric(p.form)) return {p};
        return {p, Proposition{p.predicate, p.subject, p.form}};
    }

    void check_consistent(const Proposition& prop) const {
        const Proposition neg = negate(prop);
        auto live = [&](const Proposition& q) {
            auto it = entries_.find(q);
            return it != entries_.end() && !it->second.empty();
        };
        if (live(neg)) throw Contradiction(prop, neg);
        const Proposition swapped{neg.predicate, neg.subject, neg.form};
        if (is_symmetric(neg.form) && live(swapped)) throw Contradiction(prop, swapped);
    }

    std::size_t index(TermId t) const {
        return static_cast<std::size_t>(std::ranges::lower_bound(terms_, t) - terms_.begin());
    }
    Mask bit(TermId t) const { return Mask{1} << index(t); }

    TermSet to_set(Mask mask) const {
        TermSet out;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (mask & (Mask{1} << i)) out.push_back(terms_[i]);
        return out;
    }

    const TermSet& terms_;
    const ClosureOptions& options_;
    std::vector<Record> records_;
    std::map<Proposition, std::vector<std::size_t>> entries_;
    std::vector<std::vector<std::size_t>> by_term_;
    std::deque<std::size_t> queue_;
};

}  // namespace

RelationTable closure(std::span<const Proposition> premises, const ClosureOptions& options) {
    std::vector<TermId> all;
    for (const auto& p : premises) {
        if (p.subject == p.predicate)
            throw std::invalid_argument("premise " + to_string(p) + " relates a term to itself");
        all.push_back(p.subject);
        all.push_back(p.predicate);
    }
    RelationTable table;
    table.terms_ = make_term_set(std::move(all));
    const std::size_t cap = std::min<std::size_t>(options.max_terms, 64);
    if (table.terms_.size() > cap)
        throw ResourceLimit("closure over " + std::to_string(table.terms_.size()) + " terms exceeds cap of " +
                            std::to_string(cap));

    for (std::size_t i = 0; i < premises.size(); ++i)
        for (std::size_t j = i + 1; j < premises.size(); ++j)
            if (contradicts(premises[i], premises[j])) throw Contradiction(premises[i], premises[j]);

    Chainer chainer(table.terms_, options);
    for (const auto& p : premises) chainer.add(p, 0);
    chainer.run();
    table.entries_ = chainer.export_entries();
    return table;
}

bool derivable(std::span<const Proposition> premises, const Proposition& goal) {
    return closure(premises).contains(goal);
}

}  // namespace mused
