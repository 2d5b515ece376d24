#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "beliefs/ingest.hpp"
#include "beliefs/labeling.hpp"
#include "beliefs/metrics.hpp"
#include "beliefs/stats.hpp"

namespace beliefs {

/// One `key = value` line of a flat settings file.
struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Throws ConfigError (with the line number) on a line without '=' or an
/// empty key, and on a key given twice.
std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source);
std::vector<KeyValue> read_key_values(const std::filesystem::path& path);

// Value converters shared by config and scenario files. Throw ConfigError
// naming `key` when the value does not parse.
bool parse_bool(const KeyValue& kv);
long long parse_int(const KeyValue& kv);
double parse_real(const KeyValue& kv);
std::vector<std::string> parse_list(const KeyValue& kv);

struct Config {
    std::vector<std::string> extensions = default_extensions();
    std::filesystem::path keyword_file;  // empty: built-in stems
    bool extend_keywords = false;
    int post_days = kDefaultPostDays;
    int period_days = 14;
    double decay_rate = std::numbers::ln2;
    std::size_t min_files = kDefaultMinFiles;
    std::size_t min_observations = 4;
    double alpha = 0.01;
    double support_threshold = 0.4;
    double trend_threshold = 0.4;
    std::size_t bootstrap_iterations = kDefaultBootstrapIterations;
    double a12_threshold = 0.56;
    std::uint64_t seed = 1;
    /// Pin the small/medium size boundary to 18 files instead of the dataset median.
    bool replication_mode = false;
    /// Mine every non-merge commit reachable from HEAD, not only first-parent history.
    bool all_commits = false;
    bool follow_renames = false;
    /// Exact permutation p-values for windows with at most 8 entities.
    bool exact_p = false;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    /// Applies one entry; throws ConfigError on an unknown key or bad value.
    void apply(const KeyValue& kv);

    HcmConfig hcm() const { return {period_days, decay_rate}; }
    HistoryOptions history() const { return {!all_commits, follow_renames}; }
    ScottKnottOptions scott_knott() const { return {bootstrap_iterations, a12_threshold, 0.05, seed}; }
    SourceFilter filter() const { return SourceFilter(extensions); }
    /// Built-in stems, or the keyword file (replacing or extending them).
    KeywordSet keywords() const;
};

/// Defaults overridden by the entries of `path`; validated.
Config load_config(const std::filesystem::path& path);

}  // namespace beliefs
