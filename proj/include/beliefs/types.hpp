#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace beliefs {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

/// One (commit, file) modification event.
struct ChangeRecord {
    std::string commit_id;
    Timestamp commit_time = 0;
    std::string author;
    std::string file_path;
    std::int64_t insertions = 0;
    std::int64_t deletions = 0;
    bool is_bug_fix = false;

    std::int64_t churn() const { return insertions + deletions; }

    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

/// A tagged release. Ordinals are 1-based after sorting by release time.
struct Release {
    std::string tag_name;
    Timestamp release_time = 0;
    int ordinal = 0;

    friend bool operator==(const Release&, const Release&) = default;
};

/// The ten defect-prediction beliefs under assessment.
enum class Belief : int {
    B1 = 1,  // complex change process (history complexity)
    B2,      // number of developers
    B3,      // added lines
    B4,      // recently changed
    B5,      // commit churn
    B6,      // recently bug-fixed
    B7,      // number of past fixes
    B8,      // number of commits
    B9,      // removed lines
    B10,     // minor-contributor share
};

inline constexpr std::array<Belief, 10> kAllBeliefs = {
    Belief::B1, Belief::B2, Belief::B3, Belief::B4, Belief::B5,
    Belief::B6, Belief::B7, Belief::B8, Belief::B9, Belief::B10,
};

inline constexpr int belief_index(Belief b) { return static_cast<int>(b) - 1; }

std::string_view belief_name(Belief b);
std::optional<Belief> parse_belief(std::string_view name);

/// Short human-readable description of what the belief metric measures.
std::string_view belief_description(Belief b);

/// Share of surveyed practitioners (percent) who agreed with the belief.
/// Display metadata only; never computed.
int practitioner_agreement(Belief b);

/// "B5 (57%)"
std::string belief_label(Belief b);

/// Base error for everything the library reports to its callers.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, scenario, or unreadable input location.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed data in a cache or results file.
class DataError : public Error {
public:
    DataError(const std::string& message, std::size_t line = 0);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace beliefs
