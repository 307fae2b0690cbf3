#include "mused/prompting.hpp"

#include <cctype>

#include <spdlog/spdlog.h>

namespace mused {

using nlohmann::json;

Proposition negate_proposition(const Proposition& p) {
    return negate(p);
}

std::string render_proposition(const Proposition& p, const std::map<TermId, std::string>& grounded) {
    const std::string& s = grounded.at(p.subject);
    const std::string& o = grounded.at(p.predicate);
    switch (p.form) {
        case PropForm::A: return "All " + s + " are " + o;
        case PropForm::E: return "No " + s + " are " + o;
        case PropForm::I: return "There is one " + s + " that is " + o;
        case PropForm::O: return "There is one " + s + " that is not " + o;
    }
    return {};
}

namespace {

std::string lower_first(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

std::string condition_block(const PromptInstance& instance) {
    std::string out;
    for (const auto& p : instance.conditions) out += render_proposition(p, instance.grounded) + ".\n";
    return out;
}

PromptRecord base_record(const PromptInstance& instance) {
    PromptRecord record;
    record.id = instance.id;
    record.mode = ResponseMode::Natural;
    record.question_type = instance.question_type;
    record.level = instance.level();
    record.noise_count = instance.noise_count();
    record.gold = instance;
    return record;
}

constexpr std::string_view kFormatBody = R"(You need to list all the deductive process in a json style. For each step, you need to list:
* condition: the conditions you use to conduct deduction,
* conclusion: the conclusion you get,
* format_conclusion: a dictionary which has below three terms:
    ** Subject: the subject of your conclusion, which should be an affirmed noun.
    ** Predicate: the predicate of your conclusion, which should be an affirmed noun.
    ** type: which is one in ['A','E','I','O']. The type of one proposition with subject S and predicate P:
        *** Type 'A': 'all S are P', or 'S is P'.
        *** Type 'E': 'None of S is P', or 'S is not P'.
        *** Type 'I': 'There exists one S that is P'.
        *** Type 'O': 'There exists one S that is not P'.
)";

constexpr std::string_view kExampleSteps =
    R"({"steps": [{"condition": ["All ALPHA are BETA.", "No GAMMA are BETA."], "conclusion": "No ALPHA are GAMMA.", )"
    R"("format_conclusion": {"Subject": "ALPHA", "Predicate": "GAMMA", "type": "E"}}, )"
    R"({"condition": ["No ALPHA are GAMMA.", "There is one DELTA that is ALPHA."], )"
    R"("conclusion": "There is one DELTA that is not GAMMA.", )"
    R"("format_conclusion": {"Subject": "DELTA", "Predicate": "GAMMA", "type": "O"}}])";

const std::string& judgment_instructions() {
    static const std::string text = std::string(
        "I will give you a few given conditions and you need to check whether a given conclusion is correct or "
        "not based on these conditions.\n\n") +
        std::string(kFormatBody) +
        "Finally you should give a 'result' if you are required to check whether the given conclusion is correct "
        "or not. If it is correct, return 'Correct'; otherwise, return 'Wrong'.\n\n"
        "Your answer should be returned with below format:\n"
        R"({"steps": [{"condition": ["xxx", "xxx"], "conclusion": "xxx", "format_conclusion": {"Subject": "xxx", "Predicate": "xxx", "type": "x"}}, ...], "result": "xxx"})"
        "\n\nExamples:\n##Input:\nWe have:\nAll ALPHA are BETA.\nNo GAMMA are BETA.\nThere is one DELTA that is "
        "ALPHA.\nShow there is one DELTA that is not GAMMA is correct or not.\n##Output:\n" +
        std::string(kExampleSteps) + R"(, "result": "Correct"})" + "\n\n";
    return text;
}

const std::string& proof_instructions() {
    static const std::string text = std::string(
        "I will give you a few given conditions and you need to prove a given conclusion based on these "
        "conditions.\n\n") +
        std::string(kFormatBody) + "\nYour answer should be returned with below format:\n"
        R"({"steps": [{"condition": ["xxx", "xxx"], "conclusion": "xxx", "format_conclusion": {"Subject": "xxx", "Predicate": "xxx", "type": "x"}}, ...]})"
        "\n\nExamples:\n##Input:\nGiven:\nAll ALPHA are BETA.\nNo GAMMA are BETA.\nThere is one DELTA that is "
        "ALPHA.\nProve: there is one DELTA that is not GAMMA.\n##Output:\n" +
        std::string(kExampleSteps) + "}\n\n";
    return text;
}

/// Bottom-up replay order of the tree's expansions.
std::vector<TreeNode> derivation(const PromptInstance& instance) {
    return {instance.tree.nodes.rbegin(), instance.tree.nodes.rend()};
}

}  // namespace

PromptInstance pose_judgment(PromptInstance instance, Rng& rng) {
    instance.question_type = QuestionType::Judgment;
    if (rng.bernoulli(0.5)) {
        instance.presented_conclusion = negate_proposition(instance.tree.root);
        instance.gold_verdict = Verdict::Wrong;
    } else {
        instance.presented_conclusion = instance.tree.root;
        instance.gold_verdict = Verdict::Correct;
    }
    return instance;
}

PromptRecord render_proof(const PromptInstance& instance) {
    if (instance.question_type != QuestionType::Proof)
        throw std::invalid_argument("render_proof on a " + std::string(to_string(instance.question_type)) +
                                    " instance");
    PromptRecord record = base_record(instance);
    record.text = "Given:\n" + condition_block(instance) + "Prove: " +
                  lower_first(render_proposition(instance.presented_conclusion, instance.grounded)) + ".";
    return record;
}

PromptRecord render_judgment(const PromptInstance& instance) {
    if (instance.question_type != QuestionType::Judgment || !instance.gold_verdict)
        throw std::invalid_argument("render_judgment needs a posed judgment instance");
    PromptRecord record = base_record(instance);
    record.text = "We have:\n" + condition_block(instance) + "Show " +
                  lower_first(render_proposition(instance.presented_conclusion, instance.grounded)) +
                  " is correct or not.";
    return record;
}

PromptRecord render_judgment(const PromptInstance& instance, Rng& rng) {
    return render_judgment(pose_judgment(instance, rng));
}

PromptRecord render(const PromptInstance& instance) {
    return instance.question_type == QuestionType::Proof ? render_proof(instance) : render_judgment(instance);
}

std::string_view format_instructions(QuestionType type) {
    return type == QuestionType::Proof ? proof_instructions() : judgment_instructions();
}

PromptRecord attach_format_instructions(PromptRecord record) {
    if (record.mode == ResponseMode::Formatted) {
        spdlog::warn("prompt {} already carries format instructions; left unchanged", record.id);
        return record;
    }
    record.text = std::string(format_instructions(record.question_type)) + "##Input:\n" + record.text +
                  "\n##Output:";
    record.mode = ResponseMode::Formatted;
    return record;
}

std::string gold_formatted_response(const PromptInstance& instance) {
    const auto& g = instance.grounded;
    auto step = [&](std::vector<std::string> conditions, const Proposition& conclusion) {
        return json{{"condition", std::move(conditions)},
                    {"conclusion", render_proposition(conclusion, g) + "."},
                    {"format_conclusion",
                     {{"Subject", g.at(conclusion.subject)},
                      {"Predicate", g.at(conclusion.predicate)},
                      {"type", std::string(1, form_letter(conclusion.form))}}}};
    };
    json steps = json::array();
    if (instance.tree.nodes.empty()) {
        steps.push_back(step({render_proposition(instance.tree.root, g) + "."}, instance.tree.root));
    }
    for (const auto& node : derivation(instance)) {
        steps.push_back(step({render_proposition(node.major, g) + ".", render_proposition(node.minor, g) + "."},
                             node.conclusion));
    }
    json out{{"steps", std::move(steps)}};
    if (instance.question_type == QuestionType::Judgment && instance.gold_verdict)
        out["result"] = std::string(to_string(*instance.gold_verdict));
    return out.dump();
}

std::string gold_natural_response(const PromptInstance& instance) {
    const auto& g = instance.grounded;
    std::string out;
    if (instance.tree.nodes.empty())
        out += "We are given that " + lower_first(render_proposition(instance.tree.root, g)) + ".\n";
    for (const auto& node : derivation(instance)) {
        out += "From " + lower_first(render_proposition(node.major, g)) + " and " +
               lower_first(render_proposition(node.minor, g)) + ", we get " +
               lower_first(render_proposition(node.conclusion, g)) + ".\n";
    }
    if (instance.question_type == QuestionType::Judgment && instance.gold_verdict) {
        out += *instance.gold_verdict == Verdict::Correct ? "Therefore, the statement is correct."
                                                          : "Therefore, the statement is wrong.";
    } else {
        out += "This completes the proof.";
    }
    return out;
}

json proposition_to_json(const Proposition& p) {
    return {{"subject", raw(p.subject)}, {"predicate", raw(p.predicate)}, {"form", std::string(1, form_letter(p.form))}};
}

Proposition proposition_from_json(const json& j) {
    if (!j.is_object() || !j.contains("subject") || !j.contains("predicate") || !j.contains("form"))
        throw ConfigError("proposition needs subject, predicate and form: " + j.dump());
    const auto form = form_from_letter(j.at("form").get<std::string>());
    if (!form) throw ConfigError("bad proposition form in " + j.dump());
    return {term(j.at("subject").get<std::uint32_t>()), term(j.at("predicate").get<std::uint32_t>()), *form};
}

namespace {

json propositions_to_json(const std::vector<Proposition>& props) {
    json out = json::array();
    for (const auto& p : props) out.push_back(proposition_to_json(p));
    return out;
}

std::vector<Proposition> propositions_from_json(const json& j) {
    std::vector<Proposition> out;
    for (const auto& item : j) out.push_back(proposition_from_json(item));
    return out;
}

}  // namespace

json instance_to_json(const PromptInstance& instance) {
    json terms = json::array();
    for (const auto& [id, surface] : instance.grounded) terms.push_back({{"id", raw(id)}, {"surface", surface}});
    json nodes = json::array();
    for (const auto& node : instance.tree.nodes) {
        nodes.push_back({{"conclusion", proposition_to_json(node.conclusion)},
                         {"mood", std::string(node.mood->name)},
                         {"middle", raw(node.middle)},
                         {"major", proposition_to_json(node.major)},
                         {"minor", proposition_to_json(node.minor)}});
    }
    json middles = json::array();
    for (TermId t : instance.tree.middle_terms()) middles.push_back(raw(t));
    json noise_terms = json::array();
    for (TermId t : instance.noise_terms) noise_terms.push_back(raw(t));
    return {{"id", instance.id},
            {"seed", instance.seed},
            {"level", instance.tree.level},
            {"noise_count", instance.noise.size()},
            {"question_type", std::string(to_string(instance.question_type))},
            {"entity_style", std::string(to_string(instance.entity_style))},
            {"terms", std::move(terms)},
            {"root", proposition_to_json(instance.tree.root)},
            {"presented_conclusion", proposition_to_json(instance.presented_conclusion)},
            {"gold_verdict", instance.gold_verdict ? json(std::string(to_string(*instance.gold_verdict))) : json()},
            {"leaves", propositions_to_json(instance.tree.leaves)},
            {"noise", propositions_to_json(instance.noise)},
            {"noise_terms", std::move(noise_terms)},
            {"middle_terms", std::move(middles)},
            {"conditions", propositions_to_json(instance.conditions)},
            {"derivation", std::move(nodes)}};
}

PromptInstance instance_from_json(const json& j) {
    try {
        PromptInstance instance;
        instance.id = j.at("id").get<std::string>();
        instance.seed = j.at("seed").get<std::uint64_t>();
        instance.tree.level = j.at("level").get<int>();
        const auto qt = parse_question_type(j.at("question_type").get<std::string>());
        const auto style = parse_entity_style(j.at("entity_style").get<std::string>());
        if (!qt || !style) throw ConfigError("bad question_type or entity_style");
        instance.question_type = *qt;
        instance.entity_style = *style;
        for (const auto& t : j.at("terms"))
            instance.grounded.emplace(term(t.at("id").get<std::uint32_t>()), t.at("surface").get<std::string>());
        instance.tree.root = proposition_from_json(j.at("root"));
        instance.presented_conclusion = proposition_from_json(j.at("presented_conclusion"));
        if (const auto& v = j.at("gold_verdict"); !v.is_null()) {
            instance.gold_verdict = parse_verdict(v.get<std::string>());
            if (!instance.gold_verdict) throw ConfigError("bad gold_verdict " + v.dump());
        }
        instance.tree.leaves = propositions_from_json(j.at("leaves"));
        instance.noise = propositions_from_json(j.at("noise"));
        for (const auto& t : j.at("noise_terms")) instance.noise_terms.push_back(term(t.get<std::uint32_t>()));
        instance.noise_terms = make_term_set(std::move(instance.noise_terms));
        instance.conditions = propositions_from_json(j.at("conditions"));
        for (const auto& n : j.at("derivation")) {
            TreeNode node;
            node.conclusion = proposition_from_json(n.at("conclusion"));
            node.mood = find_mood(n.at("mood").get<std::string>());
            if (!node.mood) throw ConfigError("unknown mood " + n.at("mood").dump());
            node.middle = term(n.at("middle").get<std::uint32_t>());
            node.major = proposition_from_json(n.at("major"));
            node.minor = proposition_from_json(n.at("minor"));
            instance.tree.nodes.push_back(node);
        }
        if (static_cast<int>(instance.tree.nodes.size()) != instance.tree.level ||
            instance.tree.leaves.size() != instance.tree.nodes.size() + 1)
            throw ConfigError("derivation size does not match level");
        return instance;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed gold record: ") + e.what());
    }
}

json prompt_to_json(const PromptRecord& record) {
    return {{"id", record.id},
            {"text", record.text},
            {"mode", std::string(to_string(record.mode))},
            {"question_type", std::string(to_string(record.question_type))},
            {"level", record.level},
            {"noise_count", record.noise_count}};
}

PromptRecord prompt_from_json(const json& j) {
    try {
        PromptRecord record;
        record.id = j.at("id").get<std::string>();
        record.text = j.at("text").get<std::string>();
        const auto mode = parse_response_mode(j.at("mode").get<std::string>());
        const auto qt = parse_question_type(j.at("question_type").get<std::string>());
        if (!mode || !qt) throw ConfigError("bad mode or question_type in prompt " + record.id);
        record.mode = *mode;
        record.question_type = *qt;
        record.level = j.at("level").get<std::size_t>();
        record.noise_count = j.at("noise_count").get<std::size_t>();
        return record;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed prompt record: ") + e.what());
    }
}

json gold_to_json(const PromptRecord& record) {
    json j = instance_to_json(record.gold);
    j["mode"] = std::string(to_string(record.mode));
    return j;
}

GoldEntry gold_from_json(const json& j) {
    GoldEntry entry;
    entry.instance = instance_from_json(j);
    const auto mode = j.contains("mode") ? parse_response_mode(j.at("mode").get<std::string>())
                                         : std::optional<ResponseMode>(ResponseMode::Natural);
    if (!mode) throw ConfigError("bad mode in gold record " + entry.instance.id);
    entry.mode = *mode;
    return entry;
}

}  // namespace mused
