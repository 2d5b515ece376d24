#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beliefs/config.hpp"
#include "beliefs/ingest.hpp"
#include "beliefs/metrics.hpp"
#include "beliefs/stats.hpp"
#include "beliefs/types.hpp"
#include "beliefs/windowing.hpp"

namespace beliefs {

// --- per-project assessment -----------------------------------------------------

/// What a release window looked like, without its records.
struct WindowInfo {
    int release_ordinal = 0;
    std::string tag_name;
    Timestamp release_time = 0;
    Timestamp pre_start = 0;
    std::size_t distinct_files = 0;
    bool qualified = false;
    bool right_censored = false;
};

enum class ScoreStatus { Significant, TooFewObservations, NotSignificant };

std::string_view score_status_name(ScoreStatus s);
std::optional<ScoreStatus> parse_score_status(std::string_view name);

/// Every correlation computed for a nonempty vector of a qualified window.
struct ScoredWindow {
    SupportScore score;
    ScoreStatus status = ScoreStatus::Significant;
};

struct ExclusionCounts {
    std::size_t unqualified_window = 0;
    std::size_t empty_vector = 0;
    std::size_t too_few_observations = 0;
    std::size_t not_significant = 0;

    std::size_t total() const {
        return unqualified_window + empty_vector + too_few_observations + not_significant;
    }
};

/// Significant scores of one belief in one project.
struct BeliefPopulation {
    Belief belief = Belief::B1;
    std::string project;
    /// p < alpha and n >= min_observations, in release order. rho keeps its sign.
    std::vector<SupportScore> scores;
    /// Releases of the project, including the first (which never has a window).
    std::size_t releases_total = 0;
    ExclusionCounts excluded;

    std::size_t releases_used() const { return scores.size(); }
};

/// Keeps the scores that pass both filters and counts the others by reason.
BeliefPopulation belief_population(const std::string& project, Belief belief,
                                   std::span<const SupportScore> scores, std::size_t releases_total,
                                   double alpha = 0.01, std::size_t min_observations = 4);

struct ProjectAssessment {
    std::string project;
    ProjectSummary summary;
    std::vector<WindowInfo> windows;
    std::vector<ScoredWindow> scores;
    std::array<BeliefPopulation, 10> populations;
    /// Per window (same order as `windows`, qualified ones only): the ten vectors.
    /// Filled only when requested.
    std::vector<std::pair<int, std::vector<BeliefVector>>> vectors;
};

/// Windows, vectors, correlations and populations for one project.
ProjectAssessment assess_project(const std::string& project, std::span<const ChangeRecord> records,
                                 std::span<const Release> releases, const Config& config,
                                 bool keep_vectors = false);

// --- support strength -------------------------------------------------------------

enum class SupportLevel { None, MinimumWeak, Support, Strong, VeryStrong };

/// Category of |rho|: [0,.4) none, [.4,.5) minimum/weak, [.5,.6) support,
/// [.6,.7) strong, [.7,1] very strong.
SupportLevel support_label(double rho);
std::string_view support_level_name(SupportLevel level);

/// Beliefs whose population median |rho| reaches `threshold`; empty populations never count.
int coverage(std::span<const BeliefPopulation> populations, double threshold = 0.4);

/// Percentage of all pooled scores with |rho| >= threshold; nullopt for an empty pool.
std::optional<double> prevalence(std::span<const BeliefPopulation> populations,
                                 double threshold = 0.4);

// --- rankings -----------------------------------------------------------------------

struct Ranking {
    std::vector<RankedGroup> groups;
    /// Treatments dropped because they had no scores.
    std::vector<std::string> dropped;
};

/// Scott-Knott over the ten beliefs, each pooling |rho| of every project.
Ranking rank_beliefs(std::span<const BeliefPopulation> populations, const ScottKnottOptions& options);

enum class SizeBucket { Unbucketed, Small, Medium, Large };

std::string_view size_bucket_name(SizeBucket b);

struct SizeThresholds {
    double median = 0.0;
    double q3 = 0.0;
    std::size_t windows = 0;  // qualified windows the thresholds were taken from
};

/// Windows with at most this many distinct files belong to no bucket.
inline constexpr std::size_t kUnbucketedMaxFiles = 3;
/// Small/medium boundary used in replication mode.
inline constexpr double kReplicationMedianFiles = 18.0;

/// Median and Q3 of D_F over the qualified windows. In replication mode the
/// median is pinned to 18. Without qualified windows both are 0.
SizeThresholds size_thresholds(std::span<const WindowInfo> windows, bool replication_mode);

/// small: 3 < D_F < median; medium: median <= D_F < Q3; large: D_F >= Q3.
SizeBucket bucket_of(std::size_t distinct_files, const SizeThresholds& t);

/// Maps (project, release ordinal) to its window's bucket.
using BucketMap = std::map<std::pair<std::string, int>, SizeBucket>;

/// Scott-Knott over the (belief, bucket) treatments, labelled "B3 small" etc.
Ranking rank_beliefs_by_size(std::span<const BeliefPopulation> populations, const BucketMap& buckets,
                             const ScottKnottOptions& options);

// --- growth / decay --------------------------------------------------------------------

enum class Trend { Neither, Growth, Decay };

std::string_view trend_name(Trend t);

struct TrendResult {
    Belief belief = Belief::B1;
    std::string project;
    double rho_time = 0.0;
    double p_time = 1.0;
    std::size_t n = 0;
    Trend trend = Trend::Neither;
};

inline constexpr std::size_t kMinTrendScores = 4;

/// Spearman between the release times of the scored windows and their |rho|.
/// `release_times` maps release ordinal to time.
TrendResult growth_decay(const BeliefPopulation& population,
                         const std::map<int, Timestamp>& release_times, double threshold = 0.4);

// --- datasets --------------------------------------------------------------------------

struct ProjectCoverage {
    std::string project;
    int coverage = 0;
    std::optional<double> prevalence;
};

/// Everything the report renders, computed over one or more projects.
struct DatasetAnalysis {
    std::vector<std::string> projects;
    std::vector<ProjectSummary> summaries;
    std::vector<BeliefPopulation> populations;  // every project, belief order
    Ranking ranking;
    SizeThresholds thresholds;
    BucketMap buckets;
    Ranking size_ranking;
    std::vector<ProjectCoverage> coverage;
    std::vector<TrendResult> trends;
};

DatasetAnalysis analyze_dataset(std::span<const ProjectAssessment> projects, const Config& config);

// Assess output directory: populations.csv, scores.csv, windows.csv,
// exclusions.csv, summary.csv; every file carries a project column.

void write_assessments(const std::filesystem::path& dir, std::span<const ProjectAssessment> projects);

/// Reads one assess directory back. Throws DataError naming file and line.
std::vector<ProjectAssessment> read_assessments(const std::filesystem::path& dir);

}  // namespace beliefs
