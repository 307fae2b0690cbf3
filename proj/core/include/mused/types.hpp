#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mused {

enum class EntityStyle { Greek, Virtual };
enum class QuestionType { Proof, Judgment };
enum class Verdict { Correct, Wrong };
enum class ResponseMode { Natural, Formatted };

std::string_view to_string(EntityStyle v);
std::string_view to_string(QuestionType v);
std::string_view to_string(Verdict v);
std::string_view to_string(ResponseMode v);

std::optional<EntityStyle> parse_entity_style(std::string_view s);
std::optional<QuestionType> parse_question_type(std::string_view s);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<ResponseMode> parse_response_mode(std::string_view s);

/// Bad user-supplied configuration or input schema.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File-system failure; the message carries the path (and line, when known).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mused
