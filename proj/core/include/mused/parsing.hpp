#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mused/syllogism.hpp"
#include "mused/types.hpp"

namespace mused {

/// Byte range [begin, end) in the raw response.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

struct ParsedStep {
    std::string subject;
    std::string predicate;
    PropForm form = PropForm::A;
    Span span;
};

struct ParsedResponse {
    std::vector<ParsedStep> steps;
    std::optional<Verdict> verdict;
    /// Set by the caller from the score detail.
    bool proved_conclusion_seen = false;
    bool intent_ok = false;
};

/// Reads the first JSON object in the text. Step entries without a
/// well-formed format_conclusion are skipped. Never throws.
ParsedResponse parse_formatted(std::string_view raw_text);

/// Frame-based extraction over known entity names (case-insensitive): one
/// step per sentence that states a categorical proposition between two
/// distinct known entities, and a verdict read from the final sentences.
/// Never throws.
ParsedResponse parse_natural(std::string_view raw_text, std::span<const std::string> entities);

/// Keyword verdict over the last three sentences; the last keyword wins.
std::optional<Verdict> extract_verdict(std::string_view raw_text);

ParsedResponse parse_response(ResponseMode mode, std::string_view raw_text, std::span<const std::string> entities);

}  // namespace mused
