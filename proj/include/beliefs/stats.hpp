#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beliefs/types.hpp"

namespace beliefs {

// --- descriptive --------------------------------------------------------------

double mean(std::span<const double> values);

/// Linear-interpolation quantile (the common "type 7" definition); q in [0,1].
/// Throws std::invalid_argument on empty input.
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);
/// Q3 - Q1.
double iqr(std::span<const double> values);

// --- correlation --------------------------------------------------------------

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> rank_with_ties(std::span<const double> values);

/// Pearson correlation coefficient, 0 when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct Correlation {
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

inline constexpr std::size_t kMaxExactPermutationN = 8;

/// Spearman's rank correlation with a two-sided p-value. With exact_p and
/// n <= 8 the p-value comes from enumerating all n! pairings; otherwise from
/// the Student t approximation with n - 2 degrees of freedom. A constant
/// input yields rho = 0, p = 1. Throws std::invalid_argument when the lengths
/// differ or n < 2.
Correlation spearman(std::span<const double> x, std::span<const double> y, bool exact_p = false);

/// Two-sided t-approximation p-value for a correlation rho over n pairs.
double spearman_t_pvalue(double rho, std::size_t n);

/// Exact two-sided permutation p-value: share of the n! reorderings of
/// `y_ranks` whose |rho| against `x_ranks` reaches the observed |rho|.
double spearman_exact_pvalue(std::span<const double> x_ranks, std::span<const double> y_ranks);

/// One belief's correlation in one release.
struct SupportScore {
    Belief belief = Belief::B1;
    int release_ordinal = 0;
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

// --- effect size and bootstrap -------------------------------------------------

/// Vargha-Delaney A12: P(a > b) + 0.5 P(a == b) for a drawn from `m` and b
/// from `n`. Throws std::invalid_argument if either side is empty.
double a12(std::span<const double> m, std::span<const double> n);

inline constexpr std::size_t kDefaultBootstrapIterations = 512;

/// Bootstrap test on the difference of means. Both samples are shifted onto
/// the pooled mean (making the null true), resampled with replacement, and
/// the samples are called different when fewer than `alpha` of the replicates
/// reach the observed |mean(m) - mean(n)|. Deterministic for a given seed.
/// Throws std::invalid_argument on empty samples or iterations < 100.
bool bootstrap_different(std::span<const double> m, std::span<const double> n,
                         std::size_t iterations = kDefaultBootstrapIterations,
                         std::uint64_t seed = 1, double alpha = 0.05);

// --- Scott-Knott -----------------------------------------------------------------

struct Treatment {
    std::string label;
    std::vector<double> measurements;
};

struct RankedTreatment {
    std::string label;
    double median = 0.0;
    double iqr = 0.0;
    std::size_t count = 0;
};

/// Treatments sharing one statistically indistinguishable rank. Rank 1 holds
/// the lowest medians.
struct RankedGroup {
    int rank = 1;
    std::vector<RankedTreatment> treatments;
};

struct ScottKnottOptions {
    std::size_t bootstrap_iterations = kDefaultBootstrapIterations;
    double a12_threshold = 0.56;
    double alpha = 0.05;
    std::uint64_t seed = 1;
};

/// Sorts treatments by median and splits recursively at the cut maximising
/// the between-group mean difference E(delta). A cut is kept only when the
/// bootstrap calls the two sides different and their A12 effect (in the
/// larger direction) reaches the threshold. Throws std::invalid_argument on
/// an empty treatment list or a treatment without measurements.
std::vector<RankedGroup> scott_knott(std::vector<Treatment> treatments,
                                     const ScottKnottOptions& options = {});

/// Seed handed to the bootstrap when testing a cut of the sorted sub-list
/// [lo, hi); independent of recursion order.
std::uint64_t scott_knott_split_seed(std::uint64_t seed, std::size_t lo, std::size_t hi);

/// The keep-rule applied to a candidate cut.
bool scott_knott_accepts(std::span<const double> left, std::span<const double> right,
                         const ScottKnottOptions& options, std::uint64_t split_seed);

/// Ties between candidate cuts whose E(delta) differs by no more than this
/// relative amount resolve to the earliest cut.
inline constexpr double kSplitTieTolerance = 1e-12;

}  // namespace beliefs
