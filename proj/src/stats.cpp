#include "beliefs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "beliefs/random.hpp"

namespace beliefs {

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double iqr(std::span<const double> values) { return quantile(values, 0.75) - quantile(values, 0.25); }

std::vector<double> rank_with_ties(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.empty()) return 0.0;
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_t_pvalue(double rho, std::size_t n) {
    if (n < 3 || std::abs(rho) >= 1.0) return std::abs(rho) >= 1.0 ? 0.0 : 1.0;
    const double df = static_cast<double>(n - 2);
    const double t = std::abs(rho) * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, t)), 0.0, 1.0);
}

double spearman_exact_pvalue(std::span<const double> xr, std::span<const double> yr) {
    const std::size_t n = xr.size();
    if (n != yr.size() || n < 2) throw std::invalid_argument("exact p-value: bad lengths");
    const double mx = mean(xr), my = mean(yr);
    double sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xr[i] - mx) * (xr[i] - mx);
        syy += (yr[i] - my) * (yr[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 1.0;
    const double scale = std::sqrt(sxx * syy);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto rho_of = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (xr[i] - mx) * (yr[perm[i]] - my);
        return s / scale;
    };
    const double observed = std::abs(rho_of());
    const double cutoff = observed - 1e-10;

    std::uint64_t hits = 0, total = 0;
    do {
        ++total;
        if (std::abs(rho_of()) >= cutoff) ++hits;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

Correlation spearman(std::span<const double> x, std::span<const double> y, bool exact_p) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least 2 observations");
    Correlation c;
    c.n = x.size();
    const auto rx = rank_with_ties(x);
    const auto ry = rank_with_ties(y);
    const bool constant = std::all_of(rx.begin(), rx.end(), [&](double r) { return r == rx[0]; }) ||
                          std::all_of(ry.begin(), ry.end(), [&](double r) { return r == ry[0]; });
    if (constant) return c;  // rho 0, p 1
    c.rho = pearson(rx, ry);
    if (exact_p && c.n <= kMaxExactPermutationN) {
        c.p_value = spearman_exact_pvalue(rx, ry);
    } else {
        c.p_value = spearman_t_pvalue(c.rho, c.n);
    }
    return c;
}

double a12(std::span<const double> m, std::span<const double> n) {
    if (m.empty() || n.empty()) throw std::invalid_argument("a12: empty sample");
    std::vector<double> sorted(n.begin(), n.end());
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t twice_wins = 0;
    for (double v : m) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
        auto hi = std::upper_bound(lo, sorted.end(), v);
        twice_wins += 2 * static_cast<std::uint64_t>(lo - sorted.begin()) +
                      static_cast<std::uint64_t>(hi - lo);
    }
    const double denom = 2.0 * static_cast<double>(m.size()) * static_cast<double>(n.size());
    return static_cast<double>(twice_wins) / denom;
}

bool bootstrap_different(std::span<const double> m, std::span<const double> n, std::size_t iterations,
                         std::uint64_t seed, double alpha) {
    if (m.empty() || n.empty()) throw std::invalid_argument("bootstrap: empty sample");
    if (iterations < 100) throw std::invalid_argument("bootstrap: need at least 100 iterations");

    const double mean_m = mean(m), mean_n = mean(n);
    const double observed = std::abs(mean_m - mean_n);
    const double pooled = (mean_m * static_cast<double>(m.size()) +
                           mean_n * static_cast<double>(n.size())) /
                          static_cast<double>(m.size() + n.size());

    std::vector<double> m0(m.begin(), m.end()), n0(n.begin(), n.end());
    for (auto& v : m0) v = v - mean_m + pooled;
    for (auto& v : n0) v = v - mean_n + pooled;

    Rng rng(mix_seed(seed));
    auto resample_mean = [&](const std::vector<double>& s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) sum += s[rng.below(s.size())];
        return sum / static_cast<double>(s.size());
    };

    std::size_t reached = 0;
    for (std::size_t b = 0; b < iterations; ++b) {
        const double diff = std::abs(resample_mean(m0) - resample_mean(n0));
        if (diff >= observed) ++reached;
    }
    return static_cast<double>(reached) < alpha * static_cast<double>(iterations);
}

std::uint64_t scott_knott_split_seed(std::uint64_t seed, std::size_t lo, std::size_t hi) {
    return mix_seed(mix_seed(seed, lo), hi);
}

bool scott_knott_accepts(std::span<const double> left, std::span<const double> right,
                         const ScottKnottOptions& options, std::uint64_t split_seed) {
    const double effect = std::max(a12(left, right), a12(right, left));
    if (effect < options.a12_threshold) return false;
    return bootstrap_different(left, right, options.bootstrap_iterations, split_seed, options.alpha);
}

namespace {

struct SortedTreatment {
    const Treatment* treatment;
    double median;
};

void split_recursive(const std::vector<SortedTreatment>& items, std::size_t lo, std::size_t hi,
                     const ScottKnottOptions& options,
                     std::vector<std::pair<std::size_t, std::size_t>>& leaves) {
    if (hi - lo < 2) {
        leaves.emplace_back(lo, hi);
        return;
    }
    // Prefix sums over the treatments of [lo, hi).
    std::vector<double> sums(hi - lo + 1, 0.0);
    std::vector<std::size_t> counts(hi - lo + 1, 0);
    for (std::size_t i = lo; i < hi; ++i) {
        const auto& ms = items[i].treatment->measurements;
        sums[i - lo + 1] = sums[i - lo] + std::accumulate(ms.begin(), ms.end(), 0.0);
        counts[i - lo + 1] = counts[i - lo] + ms.size();
    }
    const double total_sum = sums.back();
    const auto total_n = static_cast<double>(counts.back());
    const double mu = total_sum / total_n;

    std::size_t best_cut = 0;
    double best = -1.0;
    for (std::size_t cut = lo + 1; cut < hi; ++cut) {
        const auto left_n = static_cast<double>(counts[cut - lo]);
        const double left_sum = sums[cut - lo];
        const double right_n = total_n - left_n;
        const double right_sum = total_sum - left_sum;
        const double mu_l = left_sum / left_n, mu_r = right_sum / right_n;
        const double e = left_n / total_n * (mu_l - mu) * (mu_l - mu) +
                         right_n / total_n * (mu_r - mu) * (mu_r - mu);
        if (best_cut == 0 || e > best + kSplitTieTolerance * std::max(std::abs(best), std::abs(e))) {
            best = e;
            best_cut = cut;
        }
    }

    std::vector<double> left, right;
    for (std::size_t i = lo; i < best_cut; ++i) {
        const auto& ms = items[i].treatment->measurements;
        left.insert(left.end(), ms.begin(), ms.end());
    }
    for (std::size_t i = best_cut; i < hi; ++i) {
        const auto& ms = items[i].treatment->measurements;
        right.insert(right.end(), ms.begin(), ms.end());
    }
    if (scott_knott_accepts(left, right, options, scott_knott_split_seed(options.seed, lo, hi))) {
        split_recursive(items, lo, best_cut, options, leaves);
        split_recursive(items, best_cut, hi, options, leaves);
    } else {
        leaves.emplace_back(lo, hi);
    }
}

}  // namespace

std::vector<RankedGroup> scott_knott(std::vector<Treatment> treatments, const ScottKnottOptions& options) {
    if (treatments.empty()) throw std::invalid_argument("scott_knott: no treatments");
    std::vector<SortedTreatment> items;
    items.reserve(treatments.size());
    for (const auto& t : treatments) {
        if (t.measurements.empty())
            throw std::invalid_argument("scott_knott: treatment '" + t.label + "' is empty");
        items.push_back({&t, median(t.measurements)});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const SortedTreatment& a, const SortedTreatment& b) { return a.median < b.median; });

    std::vector<std::pair<std::size_t, std::size_t>> leaves;
    split_recursive(items, 0, items.size(), options, leaves);

    std::vector<RankedGroup> groups;
    int rank = 0;
    for (auto [lo, hi] : leaves) {
        RankedGroup g;
        g.rank = ++rank;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& t = *items[i].treatment;
            g.treatments.push_back({t.label, items[i].median, iqr(t.measurements), t.measurements.size()});
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

}  // namespace beliefs
