#include "mused/treegen.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>

namespace mused {

TermSet LogicTree::middle_terms() const {
    std::vector<TermId> out;
    for (const auto& node : nodes) out.push_back(node.middle);
    return make_term_set(std::move(out));
}

TermSet LogicTree::terms() const {
    std::vector<TermId> out{root.subject, root.predicate};
    for (const auto& node : nodes) out.push_back(node.middle);
    return make_term_set(std::move(out));
}

LogicTree generate_tree(int level, Rng& rng, const GeneratorLimits& limits) {
    if (level < 0 || level > limits.max_level)
        throw std::invalid_argument("tree level " + std::to_string(level) + " outside [0, " +
                                    std::to_string(limits.max_level) + "]");
    LogicTree tree;
    tree.level = level;
    tree.root = {kRootSubject, kRootPredicate, kAllForms[rng.uniform(kAllForms.size())]};
    tree.leaves.push_back(tree.root);
    std::uint32_t next_term = raw(kRootPredicate) + 1;

    for (int step = 0; step < level; ++step) {
        const std::size_t slot = rng.uniform(tree.leaves.size());
        const Proposition leaf = tree.leaves[slot];
        const auto candidates = moods_concluding(leaf.form);
        const SyllogismMood& mood = *candidates[rng.uniform(candidates.size())];
        const TermId middle = term(next_term++);
        const MoodLayout premises = layout(mood, leaf.subject, leaf.predicate, middle);
        tree.nodes.push_back({leaf, &mood, middle, premises.major, premises.minor});
        tree.leaves[slot] = premises.major;
        tree.leaves.insert(tree.leaves.begin() + static_cast<std::ptrdiff_t>(slot) + 1, premises.minor);
    }
    return tree;
}

std::vector<Proposition> inject_noise(const LogicTree& tree, std::size_t noise_count, Rng& rng,
                                      const GeneratorLimits& limits) {
    if (noise_count > limits.max_noise)
        throw std::invalid_argument("noise count " + std::to_string(noise_count) + " exceeds " +
                                    std::to_string(limits.max_noise));
    std::vector<Proposition> noise;
    if (noise_count == 0) return noise;

    const TermSet anchors = tree.terms();
    std::uint32_t next_term = raw(anchors.back()) + 1;
    const std::vector<TermSet> baseline = closure(tree.leaves).find(tree.root);

    std::vector<Proposition> premises = tree.leaves;
    for (std::size_t i = 0; i < noise_count; ++i) {
        const TermId fresh = term(next_term++);
        bool placed = false;
        for (int attempt = 0; attempt < limits.noise_retries && !placed; ++attempt) {
            const TermId anchor = anchors[rng.uniform(anchors.size())];
            const PropForm form = kAllForms[rng.uniform(kAllForms.size())];
            const Proposition candidate =
                rng.bernoulli(0.5) ? Proposition{anchor, fresh, form} : Proposition{fresh, anchor, form};
            premises.push_back(candidate);
            try {
                if (closure(premises).find(tree.root) == baseline) {
                    noise.push_back(candidate);
                    placed = true;
                    continue;
                }
            } catch (const Contradiction&) {
            }
            premises.pop_back();
        }
        if (!placed)
            throw GenerationFailure("no admissible noise condition after " + std::to_string(limits.noise_retries) +
                                    " attempts");
    }
    return noise;
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read word list " + path.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string word;
        for (unsigned char c : line)
            if (!std::isspace(c)) word.push_back(static_cast<char>(std::tolower(c)));
        if (!word.empty()) words.insert(std::move(word));
    }
    return words;
}

namespace {

constexpr std::string_view kConsonants = "bcdfghjklmnprstvwz";
constexpr std::string_view kVowels = "aeiou";

std::string pseudo_word(Rng& rng) {
    const std::size_t length = rng.between(4, 14);
    std::string word;
    bool vowel = rng.bernoulli(0.5);
    while (word.size() < length) {
        const auto& pool = vowel ? kVowels : kConsonants;
        word.push_back(pool[rng.uniform(pool.size())]);
        // Occasional consonant clusters keep the strings from all looking alike.
        if (vowel || !rng.bernoulli(0.2)) vowel = !vowel;
    }
    return word;
}

}  // namespace

Lexicon build_virtual_lexicon(std::size_t size, const std::unordered_set<std::string>& words, Rng& rng) {
    Lexicon lexicon;
    std::unordered_set<std::string> seen;
    const std::size_t budget = 100 * size + 1000;
    for (std::size_t attempt = 0; lexicon.size() < size; ++attempt) {
        if (attempt >= budget)
            throw GenerationFailure("could only build " + std::to_string(lexicon.size()) + " of " +
                                    std::to_string(size) + " virtual nouns");
        std::string word = pseudo_word(rng);
        if (words.contains(word) || !seen.insert(word).second) continue;
        lexicon.push_back(std::move(word));
    }
    return lexicon;
}

Lexicon build_virtual_lexicon(std::size_t size, const std::filesystem::path& word_list, Rng& rng) {
    return build_virtual_lexicon(size, load_word_list(word_list), rng);
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write lexicon " + path.string());
    for (const auto& word : lexicon) out << word << '\n';
    if (!out) throw IoError("failed writing lexicon " + path.string());
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read lexicon " + path.string());
    Lexicon lexicon;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lexicon.push_back(line);
    }
    return lexicon;
}

std::span<const std::string_view> greek_letter_names() {
    static constexpr std::array<std::string_view, 24> kNames{
        "ALPHA", "BETA", "GAMMA",   "DELTA", "EPSILON", "ZETA", "ETA", "THETA",
        "IOTA",  "KAPPA", "LAMBDA", "MU",    "NU",      "XI",   "OMICRON", "PI",
        "RHO",   "SIGMA", "TAU",    "UPSILON", "PHI",   "CHI",  "PSI", "OMEGA"};
    return kNames;
}

std::map<TermId, std::string> ground_entities(const TermSet& terms, EntityStyle style, const Lexicon& lexicon,
                                              Rng& rng) {
    std::vector<std::string> pool;
    if (style == EntityStyle::Greek) {
        for (auto name : greek_letter_names()) pool.emplace_back(name);
    } else {
        pool = lexicon;
    }
    if (pool.size() < terms.size())
        throw LexiconExhausted("need " + std::to_string(terms.size()) + " " + std::string(to_string(style)) +
                               " names, pool has " + std::to_string(pool.size()));
    // Partial Fisher-Yates: the first terms.size() slots become the sample.
    std::map<TermId, std::string> grounded;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::swap(pool[i], pool[i + rng.uniform(pool.size() - i)]);
        grounded.emplace(terms[i], pool[i]);
    }
    return grounded;
}

const std::string& PromptInstance::surface(TermId t) const {
    auto it = grounded.find(t);
    if (it == grounded.end()) throw std::out_of_range("term " + std::to_string(raw(t)) + " is not grounded");
    return it->second;
}

PromptInstance generate_instance(const InstancePlan& plan, std::uint64_t seed, const Lexicon& lexicon,
                                 const GeneratorLimits& limits) {
    Rng rng(seed);
    PromptInstance instance;
    instance.id = plan.id;
    instance.seed = seed;
    instance.entity_style = plan.style;
    instance.question_type = plan.question_type;

    for (int attempt = 0;; ++attempt) {
        instance.tree = generate_tree(plan.level, rng, limits);
        try {
            instance.noise = inject_noise(instance.tree, plan.noise_count, rng, limits);
            break;
        } catch (const GenerationFailure&) {
            if (attempt + 1 >= limits.tree_retries)
                throw GenerationFailure("instance " + plan.id + " (seed " + std::to_string(seed) +
                                        "): noise injection failed for " + std::to_string(limits.tree_retries) +
                                        " trees");
        }
    }

    std::vector<TermId> noise_terms;
    const TermSet tree_terms = instance.tree.terms();
    for (const auto& p : instance.noise)
        for (TermId t : {p.subject, p.predicate})
            if (!std::ranges::binary_search(tree_terms, t)) noise_terms.push_back(t);
    instance.noise_terms = make_term_set(std::move(noise_terms));

    std::vector<TermId> all(tree_terms.begin(), tree_terms.end());
    all.insert(all.end(), instance.noise_terms.begin(), instance.noise_terms.end());
    instance.grounded = ground_entities(make_term_set(std::move(all)), plan.style, lexicon, rng);

    instance.conditions = instance.tree.leaves;
    instance.conditions.insert(instance.conditions.end(), instance.noise.begin(), instance.noise.end());
    rng.shuffle(std::span(instance.conditions));

    instance.presented_conclusion = instance.tree.root;
    return instance;
}

}  // namespace mused
