#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mused {

/// Opaque handle of a categorical term (a class of entities). Surface names
/// are attached later by grounding; logic only ever compares ids.
enum class TermId : std::uint32_t {};

constexpr TermId term(std::uint32_t raw) { return TermId{raw}; }
constexpr std::uint32_t raw(TermId id) { return static_cast<std::uint32_t>(id); }

struct Term {
    TermId id{};
    std::string surface;
};

enum class PropForm : std::uint8_t { A, E, I, O };

inline constexpr std::array<PropForm, 4> kAllForms{PropForm::A, PropForm::E, PropForm::I, PropForm::O};

char form_letter(PropForm form);
std::optional<PropForm> form_from_letter(std::string_view letter);

/// E and I are convertible: "No S are P" iff "No P are S", likewise for I.
constexpr bool is_symmetric(PropForm form) { return form == PropForm::E || form == PropForm::I; }

struct Proposition {
    TermId subject{};
    TermId predicate{};
    PropForm form{PropForm::A};

    friend auto operator<=>(const Proposition&, const Proposition&) = default;
};

/// Same statement, allowing the subject/predicate swap for E and I.
bool equivalent(const Proposition& lhs, const Proposition& rhs);

/// Contradictory on the square of opposition: A<->O, E<->I on the same terms.
Proposition negate(const Proposition& p);

bool contradicts(const Proposition& p, const Proposition& q);

bool mentions(const Proposition& p, TermId t);

std::string to_string(const Proposition& p);

struct SyllogismMood {
    /// 1: M-P / S-M, 2: P-M / S-M, 3: M-P / M-S, 4: P-M / M-S (major / minor).
    int figure = 1;
    PropForm major_form{};
    PropForm minor_form{};
    PropForm conclusion_form{};
    std::string_view name;

    friend bool operator==(const SyllogismMood& lhs, const SyllogismMood& rhs) {
        return lhs.figure == rhs.figure && lhs.major_form == rhs.major_form &&
               lhs.minor_form == rhs.minor_form && lhs.conclusion_form == rhs.conclusion_form;
    }
};

/// The fifteen unconditionally valid moods (no existential import).
std::span<const SyllogismMood> mood_table();

const SyllogismMood* find_mood(std::string_view name);

/// Moods whose conclusion has the given form, in table order.
std::vector<const SyllogismMood*> moods_concluding(PropForm form);

/// Expected term placement of a mood instance: (subject, predicate) pairs of
/// the major and minor premises for given minor/major/middle terms.
struct MoodLayout {
    Proposition major;
    Proposition minor;
};
MoodLayout layout(const SyllogismMood& mood, TermId minor_term, TermId major_term, TermId middle);

class ShapeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Inference {
    Proposition conclusion;
    TermId middle{};
};

/// Applies the mood to the premises. Throws ShapeMismatch when they do not
/// instantiate it.
Proposition apply_mood(const SyllogismMood& mood, const Proposition& major, const Proposition& minor);

/// Non-throwing variant reporting the eliminated middle term as well.
std::optional<Inference> try_apply_mood(const SyllogismMood& mood, const Proposition& major,
                                        const Proposition& minor);

struct MoodMatch {
    const SyllogismMood* mood = nullptr;
    Proposition conclusion;
    TermId middle{};
};

/// Every mood that accepts (p1, p2) or (p2, p1) as (major, minor).
std::vector<MoodMatch> match_moods(const Proposition& p1, const Proposition& p2);

}  // namespace mused
