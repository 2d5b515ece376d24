#include "beliefs/types.hpp"

#include <fmt/format.h>

namespace beliefs {

namespace {

struct BeliefInfo {
    std::string_view name;
    std::string_view description;
    int agreement;
};

constexpr std::array<BeliefInfo, 10> kBeliefInfo = {{
    {"B1", "history complexity of changes", 76},
    {"B2", "distinct developers", 64},
    {"B3", "lines added", 61},
    {"B4", "recency of change", 58},
    {"B5", "commit churn", 57},
    {"B6", "recency of bug fix", 49},
    {"B7", "number of bug fixes", 48},
    {"B8", "number of commits", 46},
    {"B9", "lines removed", 35},
    {"B10", "minor contributor share", 30},
}};

}  // namespace

std::string_view belief_name(Belief b) { return kBeliefInfo.at(belief_index(b)).name; }

std::string_view belief_description(Belief b) {
    return kBeliefInfo.at(belief_index(b)).description;
}

int practitioner_agreement(Belief b) { return kBeliefInfo.at(belief_index(b)).agreement; }

std::string belief_label(Belief b) {
    return fmt::format("{} ({}%)", belief_name(b), practitioner_agreement(b));
}

std::optional<Belief> parse_belief(std::string_view name) {
    for (Belief b : kAllBeliefs) {
        if (belief_name(b) == name) return b;
    }
    return std::nullopt;
}

DataError::DataError(const std::string& message, std::size_t line)
    : Error(line == 0 ? message : fmt::format("line {}: {}", line, message)), line_(line) {}

}  // namespace beliefs
