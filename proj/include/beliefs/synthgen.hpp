#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "beliefs/config.hpp"
#include "beliefs/types.hpp"
#include "beliefs/windowing.hpp"

namespace beliefs {

/// Parameters of a synthetic history. Release k (1-based) is tagged at
/// start_time + k * release_spacing_days; every release gets its own set of
/// files, touched by feature commits spread over the preceding period.
struct ScenarioSpec {
    int releases = 10;
    int files_min = 20;
    int files_max = 40;
    int commits_min = 30;
    int commits_max = 60;
    int authors = 12;
    /// nullopt: post-release fixes independent of every metric.
    std::optional<Belief> planted_belief;
    /// Target median Spearman rho between the planted metric and F_D.
    double planted_strength = 0.0;
    std::uint64_t noise_seed = 1;
    /// Share of feature commits outside the post-release horizons labelled as fixes.
    double bug_fix_rate = 0.2;
    int release_spacing_days = 240;
    int post_days = kDefaultPostDays;
    Timestamp start_time = 1262304000;  // 2010-01-01

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Beliefs that can be planted: B3, B9, B2, B8.
const std::vector<Belief>& plantable_beliefs();

/// Reads a `key = value` scenario; unknown keys and bad values raise
/// ConfigError naming the field.
ScenarioSpec parse_scenario(const std::vector<KeyValue>& entries);
ScenarioSpec load_scenario(const std::filesystem::path& path);

struct SyntheticHistory {
    /// Ordered by (commit_time, commit_id, file_path), like mined histories.
    std::vector<ChangeRecord> records;
    std::vector<Release> releases;
    /// Noise scale the coupling was generated with (0 when noiseless or null).
    double sigma = 0.0;
    /// Median planted-belief rho over the qualified windows; nullopt for null scenarios.
    std::optional<double> realized_rho;
};

/// Deterministic in the spec. For 0 < strength < 1 the noise scale is
/// searched until the realized median rho lies within kCalibrationTarget of
/// the strength (best effort: the closest history found is returned).
SyntheticHistory generate(const ScenarioSpec& spec);

/// One history at a fixed noise scale; sigma = 0 gives a monotone coupling.
SyntheticHistory generate_with_noise(const ScenarioSpec& spec, double sigma);

inline constexpr double kCalibrationTarget = 0.02;

/// Median over windows with at least 4 entities of rho(planted metric, F_D).
std::optional<double> planted_median_rho(std::span<const ChangeRecord> records,
                                         std::span<const Release> releases, Belief belief,
                                         int post_days);

/// Commit message for a feature (no keyword stem) or a fix (one stem).
/// Exposed so tests can check them against the labeling module.
std::vector<std::string> feature_message_samples();
std::vector<std::string> fix_message_samples();

}  // namespace beliefs
