#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "beliefs/types.hpp"
#include "beliefs/windowing.hpp"

namespace beliefs {

/// Paired per-entity series for one belief in one release: the belief metric
/// x and the post-release defect count y. Entities are file paths, except
/// for B5 where they are commit ids.
struct BeliefVector {
    Belief belief = Belief::B1;
    std::vector<std::string> entity_ids;
    std::vector<double> x;
    std::vector<std::int64_t> y;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }
};

/// History complexity metric settings: period length and per-period
/// exponential decay.
struct HcmConfig {
    int period_days = 14;
    double decay_rate = std::numbers::ln2;

    /// Throws ConfigError on period_days < 1 or decay_rate <= 0.
    void validate() const;
};

enum class ChurnKind { Added, Removed };

// Every metric takes a window and its post-release defect counts. Files are
// listed in path order; commits (B5) in (commit_time, commit_id) order.

/// B1. Decayed sum of the normalized change entropies of the periods in which
/// the file changed.
BeliefVector metric_b1_hcm(const ReleaseWindow& window, const DefectCounts& defects,
                           const HcmConfig& cfg = {});

/// B2. Distinct authors per file.
BeliefVector metric_b2_developers(const ReleaseWindow& window, const DefectCounts& defects);

/// B3 (added lines) or B9 (removed lines).
BeliefVector metric_churn(const ReleaseWindow& window, const DefectCounts& defects, ChurnKind kind);

/// B4 (latest change) or B6 (latest bug fix; files never fixed in the pre
/// period are left out).
BeliefVector metric_recency(const ReleaseWindow& window, const DefectCounts& defects,
                            bool fixes_only);

/// B5. Per commit: total churn of its source files against the summed
/// defect counts of those files.
BeliefVector metric_b5_commit_churn(const ReleaseWindow& window, const DefectCounts& defects);

/// B7 (bug-fix touches) or B8 (all touches).
BeliefVector metric_counts(const ReleaseWindow& window, const DefectCounts& defects,
                           bool fixes_only);

/// B10. Percentage of a file's contributors whose churn share is below 5%.
BeliefVector metric_b10_minor_share(const ReleaseWindow& window, const DefectCounts& defects);

/// All ten vectors, indexed by belief_index().
std::vector<BeliefVector> compute_all(const ReleaseWindow& window, const DefectCounts& defects,
                                      const HcmConfig& cfg = {});

/// Normalized entropy of a change distribution: -sum p log2 p / log2 n, with
/// 0 for n <= 1. `counts` holds the changes per file of one period.
double normalized_entropy(const std::vector<std::int64_t>& counts);

/// CSV with columns belief_id, entity_id, x, y.
void write_vectors_csv(std::ostream& out, const std::vector<BeliefVector>& vectors);

}  // namespace beliefs
