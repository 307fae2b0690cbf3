#include <doctest.h>

#include <algorithm>

#include "mused/closure.hpp"
#include "mused/rng.hpp"
#include "oracle.hpp"

using namespace mused;

namespace {

constexpr TermId A = term(0), B = term(1), C = term(2), D = term(3);

Proposition prop(TermId s, TermId p, PropForm f) { return {s, p, f}; }

std::vector<Proposition> random_premises(Rng& rng, std::uint32_t terms, std::size_t count) {
    std::vector<Proposition> out;
    while (out.size() < count) {
        const auto s = static_cast<std::uint32_t>(rng.uniform(terms));
        const auto p = static_cast<std::uint32_t>(rng.uniform(terms));
        if (s == p) continue;
        out.push_back({term(s), term(p), kAllForms[rng.uniform(4)]});
    }
    return out;
}

}  // namespace

TEST_CASE("chain of universals") {
    const std::vector<Proposition> premises{prop(A, B, PropForm::A), prop(B, C, PropForm::A), prop(C, D, PropForm::A)};
    const auto table = closure(premises);

    CHECK(table.exact(prop(A, C, PropForm::A)) == std::vector<TermSet>{{B}});
    CHECK(table.exact(prop(B, D, PropForm::A)) == std::vector<TermSet>{{C}});
    // Both elimination orders reach the same minimal set, stored once.
    CHECK(table.exact(prop(A, D, PropForm::A)) == std::vector<TermSet>{{B, C}});
    for (const auto& p : premises) CHECK(table.exact(p) == std::vector<TermSet>{{}});
    CHECK(table.size() == 6);
    CHECK(derivable(premises, prop(A, D, PropForm::A)));
    CHECK_FALSE(derivable(premises, prop(D, A, PropForm::A)));
}

TEST_CASE("find looks through E and I conversion") {
    const std::vector<Proposition> premises{prop(A, B, PropForm::E), prop(C, A, PropForm::A)};
    const auto table = closure(premises);
    CHECK(table.find(prop(B, A, PropForm::E)) == std::vector<TermSet>{{}});
    CHECK(table.find(prop(C, B, PropForm::E)) == std::vector<TermSet>{{A}});
    CHECK(table.find(prop(B, C, PropForm::E)) == std::vector<TermSet>{{A}});
    CHECK(table.contains(prop(B, C, PropForm::E)));
    CHECK_FALSE(table.contains(prop(C, B, PropForm::A)));
}

TEST_CASE("elimination sets stay minimal") {
    // A->B->D and A->C->D plus a longer A->B->C->D route.
    const std::vector<Proposition> premises{prop(A, B, PropForm::A), prop(B, D, PropForm::A), prop(A, C, PropForm::A),
                                            prop(C, D, PropForm::A), prop(B, C, PropForm::A)};
    const auto sets = closure(premises).exact(prop(A, D, PropForm::A));
    CHECK(sets == std::vector<TermSet>{{B}, {C}});
}

TEST_CASE("contradictions and limits") {
    CHECK_THROWS_AS(closure(std::vector{prop(A, B, PropForm::A), prop(A, B, PropForm::O)}), Contradiction);
    CHECK_THROWS_AS(closure(std::vector{prop(A, B, PropForm::E), prop(B, A, PropForm::I)}), Contradiction);
    // Only the derived A(A,C) clashes with O(A,C).
    try {
        closure(std::vector{prop(A, B, PropForm::A), prop(B, C, PropForm::A), prop(A, C, PropForm::O)});
        FAIL("expected a contradiction");
    } catch (const Contradiction& e) {
        CHECK(contradicts(e.first, e.second));
    }
    CHECK_THROWS_AS(closure(std::vector{prop(A, A, PropForm::A)}), std::invalid_argument);

    std::vector<Proposition> chain;
    for (std::uint32_t i = 0; i < 9; ++i) chain.push_back(prop(term(i), term(i + 1), PropForm::A));
    CHECK_THROWS_AS(closure(chain, ClosureOptions{.max_terms = 5}), ResourceLimit);
    CHECK_THROWS_AS(closure(chain, ClosureOptions{.max_records = 10}), ResourceLimit);
    CHECK(closure(std::span<const Proposition>{}).size() == 0);
}

TEST_CASE("closure is sound against the type model") {
    Rng rng(11);
    const oracle::TypeModel model(6);
    int consistent = 0, checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto premises = random_premises(rng, 6, 2 + rng.uniform(5));
        try {
            const auto table = closure(premises);
            // No throw does not imply satisfiable: syllogisms alone cannot
            // refute e.g. {A(x,y), E(x,y), I(x,z)}.
            consistent += model.satisfiable(premises);
            for (const auto& [p, sets] : table.entries()) {
                CAPTURE(to_string(p));
                CHECK(model.entails(premises, p));
                ++checked;
            }
        } catch (const Contradiction&) {
            CHECK_FALSE(model.satisfiable(premises));
        }
    }
    CHECK(consistent > 100);
    CHECK(checked > 1000);
}

TEST_CASE("elimination sets name real intermediate terms") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto premises = random_premises(rng, 7, 4);
        try {
            const auto table = closure(premises);
            for (const auto& rec : table.records()) {
                CHECK(is_subset(rec.eliminated, table.terms()));
                // An empty set means the fact is a premise, up to conversion.
                if (rec.eliminated.empty()) {
                    bool premise = false;
                    for (const auto& p : premises) premise |= equivalent(p, rec.prop);
                    CHECK(premise);
                }
            }
        } catch (const Contradiction&) {
        }
    }
}

TEST_CASE("closure is idempotent and order-insensitive") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto premises = random_premises(rng, 6, 4);
        try {
            const auto table = closure(premises);
            std::vector<Proposition> facts;
            for (const auto& [p, sets] : table.entries()) facts.push_back(p);
            const auto again = closure(facts);
            for (const auto& [p, sets] : again.entries()) CHECK(table.contains(p));

            rng.shuffle(std::span(premises));
            CHECK(closure(premises).records() == table.records());
        } catch (const Contradiction&) {
        }
    }
}
