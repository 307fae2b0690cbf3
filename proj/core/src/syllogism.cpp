#include "mused/syllogism.hpp"

#include <algorithm>

namespace mused {

namespace {

using F = PropForm;

constexpr std::array<SyllogismMood, 15> kMoods{{
    {1, F::A, F::A, F::A, "Barbara"},
    {1, F::E, F::A, F::E, "Celarent"},
    {1, F::A, F::I, F::I, "Darii"},
    {1, F::E, F::I, F::O, "Ferio"},
    {2, F::E, F::A, F::E, "Cesare"},
    {2, F::A, F::E, F::E, "Camestres"},
    {2, F::E, F::I, F::O, "Festino"},
    {2, F::A, F::O, F::O, "Baroco"},
    {3, F::I, F::A, F::I, "Disamis"},
    {3, F::A, F::I, F::I, "Datisi"},
    {3, F::O, F::A, F::O, "Bocardo"},
    {3, F::E, F::I, F::O, "Ferison"},
    {4, F::A, F::E, F::E, "Calemes"},
    {4, F::I, F::A, F::I, "Dimatis"},
    {4, F::E, F::I, F::O, "Fresison"},
}};

}  // namespace

char form_letter(PropForm form) {
    return "AEIO"[static_cast<int>(form)];
}

std::optional<PropForm> form_from_letter(std::string_view letter) {
    if (letter.size() != 1) return std::nullopt;
    switch (letter.front()) {
        case 'A': case 'a': return PropForm::A;
        case 'E': case 'e': return PropForm::E;
        case 'I': case 'i': return PropForm::I;
        case 'O': case 'o': return PropForm::O;
        default: return std::nullopt;
    }
}

bool equivalent(const Proposition& lhs, const Proposition& rhs) {
    if (lhs == rhs) return true;
    return lhs.form == rhs.form && is_symmetric(lhs.form) && lhs.subject == rhs.predicate &&
           lhs.predicate == rhs.subject;
}

Proposition negate(const Proposition& p) {
    static constexpr std::array<PropForm, 4> kContradictory{F::O, F::I, F::E, F::A};
    return {p.subject, p.predicate, kContradictory[static_cast<int>(p.form)]};
}

bool contradicts(const Proposition& p, const Proposition& q) {
    return equivalent(negate(p), q);
}

bool mentions(const Proposition& p, TermId t) {
    return p.subject == t || p.predicate == t;
}

std::string to_string(const Proposition& p) {
    return std::string(1, form_letter(p.form)) + "(" + std::to_string(raw(p.subject)) + "," +
           std::to_string(raw(p.predicate)) + ")";
}

std::span<const SyllogismMood> mood_table() {
    return kMoods;
}

const SyllogismMood* find_mood(std::string_view name) {
    auto it = std::ranges::find(kMoods, name, &SyllogismMood::name);
    return it == kMoods.end() ? nullptr : &*it;
}

std::vector<const SyllogismMood*> moods_concluding(PropForm form) {
    std::vector<const SyllogismMood*> out;
    for (const auto& mood : kMoods)
        if (mood.conclusion_form == form) out.push_back(&mood);
    return out;
}

MoodLayout layout(const SyllogismMood& mood, TermId minor_term, TermId major_term, TermId middle) {
    const bool middle_leads_major = mood.figure == 1 || mood.figure == 3;
    const bool middle_leads_minor = mood.figure == 3 || mood.figure == 4;
    MoodLayout out;
    out.major = middle_leads_major ? Proposition{middle, major_term, mood.major_form}
                                   : Proposition{major_term, middle, mood.major_form};
    out.minor = middle_leads_minor ? Proposition{middle, minor_term, mood.minor_form}
                                   : Proposition{minor_term, middle, mood.minor_form};
    return out;
}

std::optional<Inference> try_apply_mood(const SyllogismMood& mood, const Proposition& major,
                                        const Proposition& minor) {
    if (major.form != mood.major_form || minor.form != mood.minor_form) return std::nullopt;
    const bool middle_leads_major = mood.figure == 1 || mood.figure == 3;
    const bool middle_leads_minor = mood.figure == 3 || mood.figure == 4;
    const TermId major_middle = middle_leads_major ? major.subject : major.predicate;
    const TermId major_term = middle_leads_major ? major.predicate : major.subject;
    const TermId minor_middle = middle_leads_minor ? minor.subject : minor.predicate;
    const TermId minor_term = middle_leads_minor ? minor.predicate : minor.subject;
    if (major_middle != minor_middle) return std::nullopt;
    if (major_term == minor_term || major_term == major_middle || minor_term == minor_middle)
        return std::nullopt;
    return Inference{{minor_term, major_term, mood.conclusion_form}, major_middle};
}

Proposition apply_mood(const SyllogismMood& mood, const Proposition& major, const Proposition& minor) {
    auto result = try_apply_mood(mood, major, minor);
    if (!result)
        throw ShapeMismatch("premises " + to_string(major) + " and " + to_string(minor) +
                            " do not instantiate " + std::string(mood.name));
    return result->conclusion;
}

std::vector<MoodMatch> match_moods(const Proposition& p1, const Proposition& p2) {
    std::vector<MoodMatch> out;
    for (const auto& mood : kMoods) {
        if (auto r = try_apply_mood(mood, p1, p2)) out.push_back({&mood, r->conclusion, r->middle});
        if (auto r = try_apply_mood(mood, p2, p1)) out.push_back({&mood, r->conclusion, r->middle});
    }
    return out;
}

}  // namespace mused
