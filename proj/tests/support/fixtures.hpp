#pragma once
// Hand-built instances shared by the unit and acceptance tests.

#include <array>
#include <string>

#include "mused/prompting.hpp"
#include "mused/treegen.hpp"

namespace fixtures {

/// Level-2 chain: all A are B, all B are C, all C are D; prove all A are D.
/// Root terms A=0, D=1; middles B=2, C=3. Expanded first around C, then B.
inline mused::PromptInstance chain_instance(mused::QuestionType qt = mused::QuestionType::Proof,
                                            std::array<std::string, 4> names = {"A", "B", "C", "D"}) {
    using namespace mused;
    const TermId a = term(0), d = term(1), b = term(2), c = term(3);
    PromptInstance inst;
    inst.id = "chain";
    inst.question_type = qt;
    inst.entity_style = EntityStyle::Greek;
    inst.tree.level = 2;
    inst.tree.root = {a, d, PropForm::A};
    const SyllogismMood* barbara = find_mood("Barbara");
    inst.tree.nodes = {
        {{a, d, PropForm::A}, barbara, c, {c, d, PropForm::A}, {a, c, PropForm::A}},
        {{a, c, PropForm::A}, barbara, b, {b, c, PropForm::A}, {a, b, PropForm::A}},
    };
    inst.tree.leaves = {{c, d, PropForm::A}, {b, c, PropForm::A}, {a, b, PropForm::A}};
    inst.grounded = {{a, names[0]}, {b, names[1]}, {c, names[2]}, {d, names[3]}};
    inst.conditions = {{a, b, PropForm::A}, {b, c, PropForm::A}, {c, d, PropForm::A}};
    inst.presented_conclusion = inst.tree.root;
    if (qt == QuestionType::Judgment) inst.gold_verdict = Verdict::Correct;
    return inst;
}

}  // namespace fixtures
