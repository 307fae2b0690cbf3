#include "mused/parsing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace mused {

using nlohmann::json;

namespace {

// ---- formatted ------------------------------------------------------------

/// End (one past) of the balanced object starting at text[open], honoring
/// JSON string escapes.
std::optional<std::size_t> object_end(std::string_view text, std::size_t open) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{') ++depth;
        else if (c == '}' && --depth == 0) return i + 1;
    }
    return std::nullopt;
}

const json* field(const json& obj, std::initializer_list<std::string_view> names) {
    for (auto name : names) {
        auto it = obj.find(name);
        if (it != obj.end()) return &*it;
    }
    return nullptr;
}

std::optional<ParsedStep> formatted_step(const json& entry, Span span) {
    if (!entry.is_object()) return std::nullopt;
    const json* fc = field(entry, {"format_conclusion", "format conclusion"});
    if (!fc || !fc->is_object()) return std::nullopt;
    const json* subject = field(*fc, {"Subject", "subject"});
    const json* predicate = field(*fc, {"Predicate", "predicate", "Predication"});
    const json* type = field(*fc, {"type", "Type"});
    if (!subject || !predicate || !type || !subject->is_string() || !predicate->is_string() || !type->is_string())
        return std::nullopt;
    const auto form = form_from_letter(type->get_ref<const std::string&>());
    if (!form) return std::nullopt;
    return ParsedStep{subject->get<std::string>(), predicate->get<std::string>(), *form, span};
}

// ---- natural --------------------------------------------------------------

struct Token {
    std::string text;  // lowercase
    Span span;
};

bool word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || c == '\'';
}

bool boundary(char c) {
    return c == '.' || c == '!' || c == '?' || c == ';' || c == '\n';
}

std::vector<Token> tokenize(std::string_view text, std::size_t offset) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!word_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && word_char(text[j])) ++j;
        std::size_t b = i, e = j;
        while (b < e && (text[b] == '\'' || text[b] == '-')) ++b;
        while (e > b && (text[e - 1] == '\'' || text[e - 1] == '-')) --e;
        if (b < e) {
            std::string word;
            for (std::size_t k = b; k < e; ++k)
                word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
            const Span span{offset + b, offset + e};
            if (word.size() > 3 && word.ends_with("n't")) {
                word.resize(word.size() - 3);
                if (word == "ca") word = "can";
                if (word == "wo") word = "will";
                out.push_back({word, span});
                out.push_back({"not", span});
            } else {
                out.push_back({std::move(word), span});
            }
        }
        i = j;
    }
    return out;
}

struct Sentence {
    std::vector<Token> tokens;
    Span span;
};

std::vector<Sentence> split_sentences(std::string_view text) {
    std::vector<Sentence> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size() && !boundary(text[i])) continue;
        // Keep decimals such as "0.5" inside one sentence.
        if (i < text.size() && text[i] == '.' && i > 0 && i + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
            std::isdigit(static_cast<unsigned char>(text[i + 1])))
            continue;
        auto tokens = tokenize(text.substr(start, i - start), start);
        if (!tokens.empty()) out.push_back({std::move(tokens), {start, i}});
        start = i + 1;
    }
    return out;
}

struct Item {
    bool entity = false;
    std::string text;  // lowercase word, or canonical entity surface
    Span span;
};

class EntityIndex {
public:
    explicit EntityIndex(std::span<const std::string> entities) {
        for (const auto& e : entities) {
            auto tokens = tokenize(e, 0);
            if (tokens.empty()) continue;
            std::vector<std::string> words;
            for (auto& t : tokens) words.push_back(std::move(t.text));
            names_.emplace_back(std::move(words), e);
        }
        // Longest names first so multi-word entities win over their prefixes.
        std::ranges::stable_sort(names_, [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    }

    std::vector<Item> items(const std::vector<Token>& tokens) const {
        std::vector<Item> out;
        std::size_t i = 0;
        while (i < tokens.size()) {
            const std::string* hit = nullptr;
            std::size_t len = 0;
            for (const auto& [words, surface] : names_) {
                if (i + words.size() > tokens.size()) continue;
                bool same = true;
                for (std::size_t k = 0; k < words.size() && same; ++k) same = tokens[i + k].text == words[k];
                if (same) {
                    hit = &surface;
                    len = words.size();
                    break;
                }
            }
            if (hit) {
                out.push_back({true, *hit, {tokens[i].span.begin, tokens[i + len - 1].span.end}});
                i += len;
            } else {
                out.push_back({false, tokens[i].text, tokens[i].span});
                ++i;
            }
        }
        return out;
    }

private:
    std::vector<std::pair<std::vector<std::string>, std::string>> names_;
};

class FrameMatcher {
public:
    explicit FrameMatcher(const std::vector<Item>& items) : items_(items) {}

    std::optional<ParsedStep> at(std::size_t i) const {
        std::size_t j = i;
        if (word(j, {"all", "every", "each"})) {
            ++j;
            skip(j, {"of"});
            skip(j, {"the"});
            // "not all S are P" denies the universal.
            const bool denied = i > 0 && word(i - 1, {"not"});
            return finish(i, j, denied ? PropForm::O : PropForm::A, false);
        }
        if (word(j, {"no"})) return finish(i, j + 1, PropForm::E, false);
        if (word(j, {"none"}) && word(j + 1, {"of"})) {
            j += 2;
            skip(j, {"the"});
            return finish(i, j, PropForm::E, false);
        }
        if (word(j, {"some"})) {
            ++j;
            if (word(j, {"of"})) {
                ++j;
                skip(j, {"the"});
            }
            return finish(i, j, PropForm::I, true);
        }
        if (word(j, {"there"}) && word(j + 1, {"is", "exists", "are", "exist"})) {
            j += 2;
            skip(j, {"exists"});
            if (!word(j, {"one", "a", "an", "some", "at"})) return std::nullopt;
            if (word(j, {"at"})) {
                if (!word(j + 1, {"least"}) || !word(j + 2, {"one"})) return std::nullopt;
                j += 2;
            }
            ++j;
            return finish(i, j, PropForm::I, true);
        }
        if (word(j, {"at"}) && word(j + 1, {"least"}) && word(j + 2, {"one"})) {
            j += 3;
            if (word(j, {"of"})) {
                ++j;
                skip(j, {"the"});
            }
            return finish(i, j, PropForm::I, true);
        }
        return std::nullopt;
    }

private:
    bool word(std::size_t k, std::initializer_list<std::string_view> options) const {
        if (k >= items_.size() || items_[k].entity) return false;
        return std::ranges::find(options, std::string_view(items_[k].text)) != options.end();
    }
    void skip(std::size_t& k, std::initializer_list<std::string_view> options) const {
        if (word(k, options)) ++k;
    }
    bool entity(std::size_t k) const { return k < items_.size() && items_[k].entity; }

    /// Matches "<entity> [that] is|are [not] [a|an|the] <entity>" from j.
    std::optional<ParsedStep> finish(std::size_t start, std::size_t j, PropForm form, bool particular) const {
        if (!entity(j)) return std::nullopt;
        const Item& subject = items_[j++];
        if (particular) skip(j, {"that", "which", "who"});
        if (!word(j, {"is", "are"})) return std::nullopt;
        ++j;
        if (word(j, {"not"})) {
            if (!particular) return std::nullopt;
            form = PropForm::O;
            ++j;
        }
        skip(j, {"also"});
        skip(j, {"a", "an", "the"});
        if (!entity(j)) return std::nullopt;
        const Item& predicate = items_[j];
        if (subject.text == predicate.text) return std::nullopt;
        return ParsedStep{subject.text, predicate.text, form, {items_[start].span.begin, predicate.span.end}};
    }

    const std::vector<Item>& items_;
};

std::optional<Verdict> verdict_in(const std::vector<Token>& tokens, std::optional<Verdict> current) {
    auto is = [&](std::size_t k, std::initializer_list<std::string_view> options) {
        return k < tokens.size() && std::ranges::find(options, std::string_view(tokens[k].text)) != options.end();
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is(i, {"not"})) {
            std::size_t k = i + 1;
            if (is(k, {"be"})) ++k;
            if (is(k, {"correct", "true", "hold", "holds", "valid"})) {
                current = Verdict::Wrong;
                i = k;
            }
            continue;
        }
        if (is(i, {"incorrect", "wrong", "false", "contradiction", "contradicts", "contradictory", "invalid"})) {
            current = Verdict::Wrong;
            continue;
        }
        if (is(i, {"correct", "true", "holds", "valid"})) {
            // "... is correct or not" restates the question.
            if (is(i + 1, {"or"}) && is(i + 2, {"not"})) {
                i += 2;
                continue;
            }
            current = Verdict::Correct;
        }
    }
    return current;
}

}  // namespace

ParsedResponse parse_formatted(std::string_view raw_text) {
    ParsedResponse out;
    for (std::size_t open = raw_text.find('{'); open != std::string_view::npos;
         open = raw_text.find('{', open + 1)) {
        const auto end = object_end(raw_text, open);
        if (!end) continue;
        json doc = json::parse(raw_text.substr(open, *end - open), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) continue;

        const Span span{open, *end};
        const json* steps = field(doc, {"steps"});
        bool any_valid = false;
        if (steps && steps->is_array()) {
            for (const auto& entry : *steps) {
                if (auto step = formatted_step(entry, span)) {
                    out.steps.push_back(std::move(*step));
                    any_valid = true;
                }
            }
            out.intent_ok = any_valid || steps->empty();
        }
        if (const json* result = field(doc, {"result", "Result"}); result && result->is_string())
            out.verdict = parse_verdict(result->get_ref<const std::string&>());
        return out;
    }
    return out;
}

ParsedResponse parse_natural(std::string_view raw_text, std::span<const std::string> entities) {
    ParsedResponse out;
    const EntityIndex index(entities);
    const auto sentences = split_sentences(raw_text);
    for (const auto& sentence : sentences) {
        const auto items = index.items(sentence.tokens);
        const FrameMatcher matcher(items);
        std::optional<ParsedStep> last;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (auto step = matcher.at(i)) last = std::move(step);
        if (last) out.steps.push_back(std::move(*last));
    }
    out.verdict = extract_verdict(raw_text);
    out.intent_ok = !out.steps.empty() || out.verdict.has_value();
    return out;
}

std::optional<Verdict> extract_verdict(std::string_view raw_text) {
    const auto sentences = split_sentences(raw_text);
    const std::size_t first = sentences.size() > 3 ? sentences.size() - 3 : 0;
    std::optional<Verdict> verdict;
    for (std::size_t i = first; i < sentences.size(); ++i) verdict = verdict_in(sentences[i].tokens, verdict);
    return verdict;
}

ParsedResponse parse_response(ResponseMode mode, std::string_view raw_text, std::span<const std::string> entities) {
    return mode == ResponseMode::Formatted ? parse_formatted(raw_text) : parse_natural(raw_text, entities);
}

}  // namespace mused
