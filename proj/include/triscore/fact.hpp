#pragma once
// The scored statement domain: a person, one of the two supported
// predicates, and a candidate value label.

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace triscore {

enum class Predicate { nationality, profession };

inline std::string_view predicate_name(Predicate p) {
    return p == Predicate::nationality ? "nationality" : "profession";
}

inline Predicate parse_predicate(std::string_view s) {
    if (s == "nationality") return Predicate::nationality;
    if (s == "profession") return Predicate::profession;
    throw std::invalid_argument("unknown predicate: " + std::string(s) +
                                " (expected nationality or profession)");
}

struct Fact {
    std::string subject;   // person name, e.g. "Frederick Loewe"
    Predicate predicate = Predicate::nationality;
    std::string object;    // value label, e.g. "Austria"

    auto operator<=>(const Fact&) const = default;
};

}  // namespace triscore
