#include "mused/types.hpp"

#include <algorithm>
#include <cctype>

namespace mused {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(EntityStyle v) { return v == EntityStyle::Greek ? "greek" : "virtual"; }
std::string_view to_string(QuestionType v) { return v == QuestionType::Proof ? "proof" : "judgment"; }
std::string_view to_string(Verdict v) { return v == Verdict::Correct ? "Correct" : "Wrong"; }
std::string_view to_string(ResponseMode v) { return v == ResponseMode::Natural ? "natural" : "formatted"; }

std::optional<EntityStyle> parse_entity_style(std::string_view s) {
    const auto v = lower(s);
    if (v == "greek") return EntityStyle::Greek;
    if (v == "virtual") return EntityStyle::Virtual;
    return std::nullopt;
}

std::optional<QuestionType> parse_question_type(std::string_view s) {
    const auto v = lower(s);
    if (v == "proof") return QuestionType::Proof;
    if (v == "judgment" || v == "judgement") return QuestionType::Judgment;
    return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    const auto v = lower(s);
    if (v == "correct") return Verdict::Correct;
    if (v == "wrong") return Verdict::Wrong;
    return std::nullopt;
}

std::optional<ResponseMode> parse_response_mode(std::string_view s) {
    const auto v = lower(s);
    if (v == "natural") return ResponseMode::Natural;
    if (v == "formatted") return ResponseMode::Formatted;
    return std::nullopt;
}

}  // namespace mused
