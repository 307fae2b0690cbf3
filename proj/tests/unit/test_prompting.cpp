#include <doctest.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "mused/closure.hpp"
#include "mused/parsing.hpp"
#include "mused/prompting.hpp"

using namespace mused;

namespace {

const std::map<TermId, std::string> kNames{{term(0), "ALPHA"}, {term(1), "BETA"}};

Lexicon lexicon() {
    Rng rng(7);
    return build_virtual_lexicon(300, std::unordered_set<std::string>{}, rng);
}

std::vector<std::string> entity_names(const PromptInstance& inst) {
    std::vector<std::string> out;
    for (const auto& [id, s] : inst.grounded) out.push_back(s);
    return out;
}

}  // namespace

TEST_CASE("sentence frames") {
    CHECK(render_proposition({term(0), term(1), PropForm::A}, kNames) == "All ALPHA are BETA");
    CHECK(render_proposition({term(0), term(1), PropForm::E}, kNames) == "No ALPHA are BETA");
    CHECK(render_proposition({term(0), term(1), PropForm::I}, kNames) == "There is one ALPHA that is BETA");
    CHECK(render_proposition({term(0), term(1), PropForm::O}, kNames) == "There is one ALPHA that is not BETA");
}

TEST_CASE("proof and judgment texts") {
    const auto proof = render(fixtures::chain_instance(QuestionType::Proof, {"ALPHA", "BETA", "GAMMA", "DELTA"}));
    CHECK(proof.text ==
          "Given:\nAll ALPHA are BETA.\nAll BETA are GAMMA.\nAll GAMMA are DELTA.\nProve: all ALPHA are DELTA.");
    CHECK(proof.level == 2);
    CHECK(proof.mode == ResponseMode::Natural);

    auto inst = fixtures::chain_instance(QuestionType::Judgment, {"ALPHA", "BETA", "GAMMA", "DELTA"});
    inst.presented_conclusion = negate_proposition(inst.tree.root);
    inst.gold_verdict = Verdict::Wrong;
    CHECK(render(inst).text == "We have:\nAll ALPHA are BETA.\nAll BETA are GAMMA.\nAll GAMMA are DELTA.\n"
                               "Show there is one ALPHA that is not DELTA is correct or not.");

    CHECK_THROWS_AS(render_proof(inst), std::invalid_argument);
    inst.gold_verdict.reset();
    CHECK_THROWS_AS(render_judgment(inst), std::invalid_argument);
}

TEST_CASE("posing a judgment negates half the time") {
    const auto base = fixtures::chain_instance(QuestionType::Judgment);
    int negated = 0;
    const int n = 4000;
    for (int seed = 0; seed < n; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        const auto posed = pose_judgment(base, rng);
        REQUIRE(posed.gold_verdict);
        if (*posed.gold_verdict == Verdict::Wrong) {
            ++negated;
            CHECK(posed.presented_conclusion == negate_proposition(base.tree.root));
        } else {
            CHECK(posed.presented_conclusion == base.tree.root);
        }
    }
    CHECK(std::abs(negated / double(n) - 0.5) < 0.03);
}

TEST_CASE("format instructions are fixed per question type") {
    const auto lex = lexicon();
    for (QuestionType qt : {QuestionType::Proof, QuestionType::Judgment}) {
        const std::string prefix(format_instructions(qt));
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto inst = generate_instance({"p", 3, 2, EntityStyle::Virtual, qt}, seed, lex);
            Rng rng(seed);
            if (qt == QuestionType::Judgment) inst = pose_judgment(inst, rng);
            const auto plain = render(inst);
            const auto formatted = attach_format_instructions(plain);
            CHECK(formatted.mode == ResponseMode::Formatted);
            CHECK(formatted.text == prefix + "##Input:\n" + plain.text + "\n##Output:");
            // A second pass is a no-op.
            CHECK(attach_format_instructions(formatted).text == formatted.text);
        }
        CHECK((prefix.find("'result'") != std::string::npos) == (qt == QuestionType::Judgment));
    }
}

TEST_CASE("the worked example inside the instructions is a valid derivation") {
    for (QuestionType qt : {QuestionType::Proof, QuestionType::Judgment}) {
        const std::string text(format_instructions(qt));
        const auto example = text.substr(text.find("##Output:\n") + 10);
        const auto parsed = parse_formatted(example);
        REQUIRE(parsed.steps.size() == 2);
        CHECK(parsed.intent_ok);

        const std::map<std::string, TermId> ids{
            {"ALPHA", term(0)}, {"BETA", term(1)}, {"GAMMA", term(2)}, {"DELTA", term(3)}};
        const std::vector<Proposition> given{{term(0), term(1), PropForm::A},
                                             {term(2), term(1), PropForm::E},
                                             {term(3), term(0), PropForm::I}};
        const auto table = closure(given);
        for (const auto& step : parsed.steps)
            CHECK(table.contains({ids.at(step.subject), ids.at(step.predicate), step.form}));
        if (qt == QuestionType::Judgment) CHECK(parsed.verdict == Verdict::Correct);
    }
}

TEST_CASE("gold responses") {
    const auto inst = fixtures::chain_instance(QuestionType::Proof, {"ALPHA", "BETA", "GAMMA", "DELTA"});
    CHECK(gold_natural_response(inst) ==
          "From all BETA are GAMMA and all ALPHA are BETA, we get all ALPHA are GAMMA.\n"
          "From all GAMMA are DELTA and all ALPHA are GAMMA, we get all ALPHA are DELTA.\n"
          "This completes the proof.");
    const auto j = nlohmann::json::parse(gold_formatted_response(inst));
    REQUIRE(j.at("steps").size() == 2);
    CHECK(j["steps"][0]["format_conclusion"]["Subject"] == "ALPHA");
    CHECK(j["steps"][0]["format_conclusion"]["Predicate"] == "GAMMA");
    CHECK(j["steps"][1]["conclusion"] == "All ALPHA are DELTA.");
    CHECK_FALSE(j.contains("result"));

    auto judged = fixtures::chain_instance(QuestionType::Judgment);
    judged.gold_verdict = Verdict::Wrong;
    CHECK(nlohmann::json::parse(gold_formatted_response(judged))["result"] == "Wrong");
    CHECK(gold_natural_response(judged).ends_with("Therefore, the statement is wrong."));
}

TEST_CASE("rendered condition lines parse back to their propositions") {
    const auto lex = lexicon();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto style = seed % 2 ? EntityStyle::Greek : EntityStyle::Virtual;
        const auto inst = generate_instance({"p", 1 + int(seed % 10), seed % 8, style, QuestionType::Proof}, seed, lex);
        const auto names = entity_names(inst);
        for (const auto& p : inst.conditions) {
            const auto line = render_proposition(p, inst.grounded) + ".";
            const auto parsed = parse_natural(line, names);
            REQUIRE(parsed.steps.size() == 1);
            CHECK(parsed.steps[0].subject == inst.surface(p.subject));
            CHECK(parsed.steps[0].predicate == inst.surface(p.predicate));
            CHECK(parsed.steps[0].form == p.form);
        }
    }
}

TEST_CASE("json round trips") {
    const auto lex = lexicon();
    Rng rng(3);
    auto inst = pose_judgment(generate_instance({"mused-000007", 5, 3, EntityStyle::Virtual, QuestionType::Judgment},
                                                77, lex),
                              rng);
    const auto record = attach_format_instructions(render(inst));

    const auto back = instance_from_json(instance_to_json(inst));
    CHECK(back.id == inst.id);
    CHECK(back.seed == inst.seed);
    CHECK(back.tree.root == inst.tree.root);
    CHECK(back.tree.leaves == inst.tree.leaves);
    CHECK(back.tree.middle_terms() == inst.tree.middle_terms());
    CHECK(back.noise == inst.noise);
    CHECK(back.noise_terms == inst.noise_terms);
    CHECK(back.conditions == inst.conditions);
    CHECK(back.grounded == inst.grounded);
    CHECK(back.presented_conclusion == inst.presented_conclusion);
    CHECK(back.gold_verdict == inst.gold_verdict);
    CHECK(render(back).text == render(inst).text);
    CHECK(instance_to_json(back) == instance_to_json(inst));

    const auto pj = prompt_to_json(record);
    CHECK_FALSE(pj.contains("leaves"));
    const auto prompt = prompt_from_json(pj);
    CHECK(prompt.text == record.text);
    CHECK(prompt.mode == ResponseMode::Formatted);

    const auto gold = gold_from_json(gold_to_json(record));
    CHECK(gold.mode == ResponseMode::Formatted);
    CHECK(gold.instance.tree.leaves == inst.tree.leaves);

    auto broken = instance_to_json(inst);
    broken["derivation"].erase(0);
    CHECK_THROWS_AS(instance_from_json(broken), ConfigError);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json::object()), ConfigError);
    CHECK_THROWS_AS(proposition_from_json({{"subject", 0}, {"predicate", 1}, {"form", "Q"}}), ConfigError);
}
