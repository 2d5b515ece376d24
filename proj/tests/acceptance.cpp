// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "beliefs/analysis.hpp"
#include "beliefs/cli.hpp"
#include "beliefs/metrics.hpp"
#include "beliefs/random.hpp"
#include "beliefs/stats.hpp"
#include "beliefs/synthgen.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace beliefs;

namespace {

// Tolerances and budgets.
constexpr double kRhoTolerance = 1e-12;
constexpr double kExactPTolerance = 1e-9;
constexpr double kTApproxTolerance = 0.05;
constexpr double kHcmTolerance = 1e-12;
constexpr double kPlantedLow = 0.6, kPlantedHigh = 0.8;
constexpr double kNullRate = 0.05, kNullSlack = 0.03;
constexpr double kBudget1 = 5.0, kBudget4 = 30.0, kBudget5 = 60.0, kBudget10 = 10.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> random_vector(Rng& rng, std::size_t n, bool duplicates) {
    std::vector<double> v(n);
    for (auto& x : v) x = duplicates ? static_cast<double>(rng.below(n / 2 + 2)) : rng.uniform() * 100.0;
    return v;
}

Outcome spearman_oracle() {
    const auto t0 = Clock::now();
    Rng rng(101);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto n = static_cast<std::size_t>(rng.between(4, 50));
        auto x = random_vector(rng, n, rng.bernoulli(0.7));
        auto y = random_vector(rng, n, rng.bernoulli(0.7));
        // inject explicit duplicates
        for (int k = 0; k < 3; ++k) x[rng.below(n)] = x[rng.below(n)];
        const double diff = std::abs(spearman(x, y).rho - oracle::spearman(x, y));
        worst = std::max(worst, diff);
    }
    const double secs = seconds_since(t0);
    return {worst <= kRhoTolerance && secs < kBudget1,
            fmt::format("1000 pairs, max |diff| {:.2e}, {:.2f} s", worst, secs)};
}

Outcome exact_pvalues() {
    Rng rng(202);
    double worst_exact = 0;
    int exact_cases = 0;
    for (std::size_t n = 2; n <= 7; ++n) {
        for (int i = 0; i < 40; ++i) {
            auto x = random_vector(rng, n, rng.bernoulli(0.5));
            auto y = random_vector(rng, n, rng.bernoulli(0.5));
            const double p = spearman(x, y, true).p_value;
            worst_exact = std::max(worst_exact, std::abs(p - oracle::enumerated_p(x, y)));
            ++exact_cases;
        }
    }
    std::map<int, std::vector<double>> null;
    for (int n = 8; n <= 12; ++n) null[n] = oracle::rank_product_distribution(n);
    double worst_t = 0;
    for (int i = 0; i < 200; ++i) {
        const int n = static_cast<int>(rng.between(8, 12));
        std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
        std::iota(x.begin(), x.end(), 1.0);
        std::iota(y.begin(), y.end(), 1.0);
        for (int k = n - 1; k > 0; --k) std::swap(y[static_cast<std::size_t>(k)], y[rng.below(static_cast<std::uint64_t>(k) + 1)]);
        const Correlation c = spearman(x, y);
        worst_t = std::max(worst_t, std::abs(c.p_value - oracle::exact_untied_p(c.rho, n, null[n])));
    }
    return {worst_exact <= kExactPTolerance && worst_t <= kTApproxTolerance,
            fmt::format("{} exact cases max |diff| {:.2e}; 200 t-approx cases max |diff| {:.4f}", exact_cases,
                        worst_exact, worst_t)};
}

Outcome a12_oracle() {
    Rng rng(303);
    int mismatches = 0, asymmetric = 0;
    for (int i = 0; i < 500; ++i) {
        auto m = random_vector(rng, static_cast<std::size_t>(rng.between(1, 50)), rng.bernoulli(0.6));
        auto n = random_vector(rng, static_cast<std::size_t>(rng.between(1, 50)), rng.bernoulli(0.6));
        const double a = a12(m, n), b = a12(n, m);
        if (a != oracle::a12(m, n)) ++mismatches;
        if (a + b != 1.0) ++asymmetric;
    }
    return {mismatches == 0 && asymmetric == 0,
            fmt::format("500 pairs, {} oracle mismatches, {} pairs with a12(m,n)+a12(n,m) != 1", mismatches,
                        asymmetric)};
}

Outcome scott_knott_oracle() {
    const auto t0 = Clock::now();
    Rng rng(404);
    int mismatches = 0, splits = 0;
    for (int i = 0; i < 200; ++i) {
        std::vector<Treatment> ts;
        const auto k = rng.between(1, 5);
        for (int t = 0; t < k; ++t) {
            Treatment tr{fmt::format("T{}", t), {}};
            const double shift = static_cast<double>(rng.below(4)) * 0.15;
            const auto size = rng.between(1, 20);
            for (int j = 0; j < size; ++j) tr.measurements.push_back(shift + rng.uniform() * 0.5);
            ts.push_back(std::move(tr));
        }
        ScottKnottOptions opt;
        opt.seed = static_cast<std::uint64_t>(i) + 1;
        auto groups = scott_knott(ts, opt);
        std::vector<std::vector<std::string>> got;
        for (const auto& g : groups) {
            std::vector<std::string> labels;
            for (const auto& t : g.treatments) labels.push_back(t.label);
            got.push_back(std::move(labels));
        }
        if (got.size() > 1) ++splits;
        if (got != oracle::scott_knott(ts, opt)) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < kBudget4,
            fmt::format("200 instances ({} split at least once), {} mismatches, {:.2f} s", splits, mismatches, secs)};
}

Outcome planted_recovery() {
    const auto t0 = Clock::now();
    Config cfg;

    ScenarioSpec planted;
    planted.releases = 101;
    planted.planted_belief = Belief::B3;
    planted.planted_strength = 0.7;
    planted.noise_seed = 7;
    const SyntheticHistory h = generate(planted);
    const ProjectAssessment a = assess_project("planted", h.records, h.releases, cfg);
    std::vector<double> rhos;
    for (const auto& s : a.scores) {
        if (s.score.belief == Belief::B3) rhos.push_back(s.score.rho);
    }
    const double med = rhos.empty() ? 0.0 : median(rhos);

    ScenarioSpec null_spec;
    null_spec.releases = 201;
    null_spec.noise_seed = 11;
    const SyntheticHistory n = generate(null_spec);
    const ProjectAssessment na = assess_project("null", n.records, n.releases, cfg);
    std::size_t b3_total = 0, b3_sig = 0, file_total = 0, file_sig = 0, b5_total = 0, b5_sig = 0;
    for (const auto& s : na.scores) {
        const bool sig = s.score.p_value < cfg.alpha;
        if (s.score.belief == Belief::B5) {
            ++b5_total;
            b5_sig += sig;
            continue;
        }
        ++file_total;
        file_sig += sig;
        if (s.score.belief == Belief::B3) {
            ++b3_total;
            b3_sig += sig;
        }
    }
    const double b3_rate = b3_total ? static_cast<double>(b3_sig) / static_cast<double>(b3_total) : 1.0;
    const double file_rate = file_total ? static_cast<double>(file_sig) / static_cast<double>(file_total) : 1.0;
    const double b5_rate = b5_total ? static_cast<double>(b5_sig) / static_cast<double>(b5_total) : 0.0;
    const double secs = seconds_since(t0);

    const bool pass = rhos.size() == 100 && med >= kPlantedLow && med <= kPlantedHigh && b3_total == 200 &&
                      b3_rate <= kNullRate + kNullSlack && file_rate <= kNullRate + kNullSlack && secs < kBudget5;
    return {pass, fmt::format("B3 median rho {:.3f} over {} windows; null: B3 {:.1f}% of {} windows, "
                              "file-level beliefs {:.1f}% of {} scores significant "
                              "(commit-level B5 {:.1f}%, confounded by commit size); {:.1f} s",
                              med, rhos.size(), 100 * b3_rate, b3_total, 100 * file_rate, file_total,
                              100 * b5_rate, secs)};
}

Outcome filter_fidelity() {
    using testing::rec;
    std::vector<std::string> problems;

    // Pinned git fixture: the last window touches 2 files, the others 3.
    testing::TempDir tmp("accept6");
    testing::make_fixture_repo(tmp / "repo");
    std::ostringstream out, err;
    if (run_cli({"mine", (tmp / "repo").string(), "--out", (tmp / "fixture").string(), "--force"}, out, err) != 0)
        return {false, "mine failed: " + err.str()};
    if (run_cli({"assess", (tmp / "fixture").string(), "--out", (tmp / "assess").string()}, out, err) != 0)
        return {false, "assess failed: " + err.str()};
    const auto projects = read_assessments(tmp / "assess");
    const auto& fx = projects.at(0);
    for (const auto& w : fx.windows) {
        if (w.qualified != (w.distinct_files >= 3))
            problems.push_back(fmt::format("window {} with D_F={} qualified={}", w.release_ordinal,
                                           w.distinct_files, w.qualified));
    }
    const bool has_df2 = std::any_of(fx.windows.begin(), fx.windows.end(),
                                     [](const WindowInfo& w) { return w.distinct_files == 2 && !w.qualified; });
    const bool has_df3 = std::any_of(fx.windows.begin(), fx.windows.end(),
                                     [](const WindowInfo& w) { return w.distinct_files == 3 && w.qualified; });
    if (!has_df2 || !has_df3) problems.push_back("fixture lacks the D_F=2 / D_F=3 boundary windows");
    for (const auto& s : fx.scores) {
        if (s.score.n < 4 && s.status != ScoreStatus::TooFewObservations)
            problems.push_back(fmt::format("{} release {} n={} kept", belief_name(s.score.belief),
                                           s.score.release_ordinal, s.score.n));
    }
    for (const auto& p : fx.populations) {
        if (!p.scores.empty()) problems.push_back("fixture population not empty");
        if (p.excluded.unqualified_window != 1) problems.push_back("unqualified window not counted");
    }

    // In-memory history: five files; commit counts track the defects exactly
    // (B8 significant), added lines do not (B3 not significant).
    const Timestamp D = kSecondsPerDay;
    std::vector<ChangeRecord> records;
    const std::vector<std::string> files = {"a.c", "b.c", "c.c", "d.c", "e.c"};
    const std::vector<int> added = {50, 10, 40, 20, 30};
    int id = 0;
    for (std::size_t f = 0; f < files.size(); ++f) {
        for (std::size_t k = 0; k <= f; ++k) {
            const int ins = k == 0 ? added[f] - static_cast<int>(f) : 1;
            records.push_back(rec(fmt::format("c{:03}", ++id), 10 * D + static_cast<Timestamp>(id) * 3600, "dev@x",
                                  files[f], ins, 0, false));
        }
    }
    for (std::size_t f = 1; f < files.size(); ++f) {
        for (std::size_t k = 0; k < f; ++k)
            records.push_back(rec(fmt::format("c{:03}", ++id), 110 * D + static_cast<Timestamp>(id) * 3600,
                                  "dev@x", files[f], 1, 1, true));
    }
    records.push_back(rec("tail", 400 * D, "dev@x", "a.c", 1, 0, false));
    const std::vector<Release> releases = {{"v1", 5 * D, 1}, {"v2", 100 * D, 2}};
    const ProjectAssessment a = assess_project("memory", records, releases, Config{});
    auto status_of = [&](Belief b) {
        for (const auto& s : a.scores)
            if (s.score.belief == b) return std::optional<ScoredWindow>(s);
        return std::optional<ScoredWindow>();
    };
    const auto b8 = status_of(Belief::B8), b3 = status_of(Belief::B3);
    if (!b8 || b8->status != ScoreStatus::Significant || b8->score.n != 5)
        problems.push_back("perfectly monotone B8 (n=5) not kept");
    if (!b3 || b3->status != ScoreStatus::NotSignificant || !(b3->score.p_value >= 0.01))
        problems.push_back("B3 with p >= 0.01 not excluded");
    if (a.populations[belief_index(Belief::B3)].excluded.not_significant != 1)
        problems.push_back("not_significant exclusion not counted");

    // Boundaries of the double filter.
    const std::vector<SupportScore> probes = {
        {Belief::B1, 2, 0.9, 0.0099, 4}, {Belief::B1, 3, 0.9, 0.01, 4}, {Belief::B1, 4, 0.99, 0.001, 3}};
    const auto pop = belief_population("probe", Belief::B1, probes, 5);
    if (pop.scores.size() != 1 || pop.scores[0].release_ordinal != 2 || pop.excluded.not_significant != 1 ||
        pop.excluded.too_few_observations != 1)
        problems.push_back("filter boundaries p=0.01 / n=3 wrong");

    std::string detail = problems.empty()
                             ? fmt::format("fixture: {} windows ({} unqualified), {} scores all n<4; "
                                           "memory history: B8 rho {} kept, B3 p {:.3f} excluded; p=0.01 and n=3 "
                                           "probes excluded",
                                           fx.windows.size(),
                                           std::count_if(fx.windows.begin(), fx.windows.end(),
                                                         [](const WindowInfo& w) { return !w.qualified; }),
                                           fx.scores.size(), b8 ? b8->score.rho : 0.0, b3 ? b3->score.p_value : 0.0)
                             : problems.front();
    return {problems.empty(), detail};
}

Outcome support_labels() {
    const std::vector<std::pair<double, SupportLevel>> probes = {
        {0.39, SupportLevel::None},          {0.40, SupportLevel::MinimumWeak}, {0.49, SupportLevel::MinimumWeak},
        {0.50, SupportLevel::Support},       {0.59, SupportLevel::Support},     {0.60, SupportLevel::Strong},
        {0.69, SupportLevel::Strong},        {0.70, SupportLevel::VeryStrong},  {-0.39, SupportLevel::None},
        {-0.40, SupportLevel::MinimumWeak},  {-0.49, SupportLevel::MinimumWeak}, {-0.50, SupportLevel::Support},
        {-0.59, SupportLevel::Support},      {-0.60, SupportLevel::Strong},     {-0.69, SupportLevel::Strong},
        {-0.70, SupportLevel::VeryStrong},   {0.0, SupportLevel::None},         {1.0, SupportLevel::VeryStrong}};
    for (const auto& [rho, want] : probes) {
        if (support_label(rho) != want)
            return {false, fmt::format("{} labelled {}, expected {}", rho, support_level_name(support_label(rho)),
                                       support_level_name(want))};
    }
    return {true, fmt::format("{} probes at the 0.4/0.5/0.6/0.7 boundaries (both signs)", probes.size())};
}

Outcome hcm_cases() {
    using testing::rec;
    const Timestamp D = kSecondsPerDay;
    auto window = [&](Timestamp length_days, std::vector<ChangeRecord> recs) {
        ReleaseWindow w;
        w.pre_start = 0;
        w.pre_end = length_days * D;
        w.release = {"r", w.pre_end, 2};
        w.pre_records = std::move(recs);
        return w;
    };
    auto value = [](const BeliefVector& v, const std::string& f) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v.entity_ids[i] == f) return v.x[i];
        return std::nan("");
    };
    const DefectCounts none;

    const auto single = metric_b1_hcm(window(14, {rec("c1", 5 * D, "a", "x.c", 3, 0, false)}), none);
    std::vector<ChangeRecord> uniform;
    for (const char* f : {"a.c", "b.c", "c.c", "d.c"}) uniform.push_back(rec("c1", 5 * D, "a", f, 1, 0, false));
    const auto flat = metric_b1_hcm(window(14, uniform), none);
    // Same change one 14-day period before the last one.
    const auto aged = metric_b1_hcm(window(28, uniform), none);

    double worst = std::abs(value(single, "x.c") - 0.0);
    for (const char* f : {"a.c", "b.c", "c.c", "d.c"}) {
        worst = std::max(worst, std::abs(value(flat, f) - 1.0));
        worst = std::max(worst, std::abs(value(aged, f) - 0.5));
    }
    return {worst <= kHcmTolerance,
            fmt::format("single file {}, uniform 4 files {}, one period old {}; max |error| {:.1e}",
                        value(single, "x.c"), value(flat, "a.c"), value(aged, "a.c"), worst)};
}

Outcome metric_invariants() {
    Rng rng(909);
    std::size_t checked = 0;
    std::vector<std::string> problems;
    for (int i = 0; i < 1000 && problems.empty(); ++i) {
        ReleaseWindow w;
        w.pre_start = 1000;
        w.pre_end = w.pre_start + rng.between(1, 120) * kSecondsPerDay;
        w.release = {"r", w.pre_end, 2};
        const auto commits = rng.between(1, 30);
        const auto n_files = rng.between(1, 12);
        for (int c = 0; c < commits; ++c) {
            const Timestamp t = w.pre_start + 1 + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(w.pre_end - w.pre_start)));
            const std::string author = fmt::format("a{}", rng.below(5));
            const bool fix = rng.bernoulli(0.3);
            std::set<std::string> touched;
            const auto width = rng.between(1, 4);
            for (int k = 0; k < width; ++k) touched.insert(fmt::format("f{}.c", rng.below(static_cast<std::uint64_t>(n_files))));
            for (const auto& f : touched)
                w.pre_records.push_back(testing::rec(fmt::format("c{:04}", c), t, author, f, rng.between(0, 200),
                                                     rng.between(0, 200), fix));
        }
        std::sort(w.pre_records.begin(), w.pre_records.end(), [](const ChangeRecord& a, const ChangeRecord& b) {
            return std::tie(a.commit_time, a.commit_id, a.file_path) < std::tie(b.commit_time, b.commit_id, b.file_path);
        });
        DefectCounts d;
        for (const auto& r : w.pre_records) d.per_file[r.file_path] = static_cast<std::int64_t>(rng.below(4));
        const auto v = compute_all(w, d);
        auto as_map = [](const BeliefVector& bv) {
            std::map<std::string, double> m;
            for (std::size_t k = 0; k < bv.size(); ++k) m[bv.entity_ids[k]] = bv.x[k];
            return m;
        };
        const auto b3 = as_map(v[belief_index(Belief::B3)]), b9 = as_map(v[belief_index(Belief::B9)]);
        const auto b4 = as_map(v[belief_index(Belief::B4)]), b6 = as_map(v[belief_index(Belief::B6)]);
        const auto b7 = as_map(v[belief_index(Belief::B7)]), b8 = as_map(v[belief_index(Belief::B8)]);
        const auto b10 = as_map(v[belief_index(Belief::B10)]);
        std::map<std::string, double> churn;
        for (const auto& r : w.pre_records) churn[r.file_path] += static_cast<double>(r.churn());
        for (const auto& [f, total] : churn) {
            ++checked;
            if (b7.at(f) > b8.at(f)) problems.push_back(fmt::format("window {}: B7 > B8 for {}", i, f));
            if (b6.count(f) && b4.at(f) < b6.at(f)) problems.push_back(fmt::format("window {}: B4 < B6 for {}", i, f));
            if (b3.at(f) + b9.at(f) != total) problems.push_back(fmt::format("window {}: B3 + B9 != churn for {}", i, f));
            if (b10.at(f) < 0 || b10.at(f) > 100) problems.push_back(fmt::format("window {}: B10 out of range", i));
        }
    }
    return {problems.empty(), problems.empty() ? fmt::format("1000 windows, {} file checks", checked) : problems.front()};
}

Outcome end_to_end() {
    const auto t0 = Clock::now();
    testing::TempDir tmp("accept10");
    testing::make_fixture_repo(tmp / "repo");
    auto run = [&](const std::string& name) {
        const auto root = tmp / name;
        std::ostringstream out, err;
        int rc = run_cli({"mine", (tmp / "repo").string(), "--out", (root / "fixture").string(), "--force"}, out, err);
        if (rc == 0) rc = run_cli({"assess", (root / "fixture").string(), "--out", (root / "assess").string()}, out, err);
        if (rc == 0) rc = run_cli({"report", (root / "assess").string(), "--out", (root / "report").string()}, out, err);
        return rc;
    };
    if (run("run1") != 0 || run("run2") != 0) return {false, "pipeline command failed"};
    const auto a = testing::tree(tmp / "run1"), b = testing::tree(tmp / "run2");
    const auto golden = testing::tree(BELIEFS_GOLDEN_DIR);
    const double secs = seconds_since(t0);
    std::string mismatch;
    if (a != b) mismatch = "repeated runs differ";
    else if (a != golden) {
        mismatch = "golden mismatch";
        for (const auto& [name, content] : a) {
            auto it = std::find_if(golden.begin(), golden.end(), [&](const auto& g) { return g.first == name; });
            if (it == golden.end() || it->second != content) {
                mismatch += ": " + name;
                break;
            }
        }
    }
    return {mismatch.empty() && secs < kBudget10,
            mismatch.empty() ? fmt::format("{} files identical across runs and to goldens, {:.2f} s", a.size(), secs)
                             : mismatch};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"spearman rho matches rank-then-raw-Pearson oracle", spearman_oracle},
        {"exact p-values and t-approximation", exact_pvalues},
        {"A12 matches pairwise oracle and is complementary", a12_oracle},
        {"Scott-Knott matches exhaustive contiguous-split oracle", scott_knott_oracle},
        {"planted-effect recovery and null calibration", planted_recovery},
        {"window, observation and significance filters", filter_fidelity},
        {"support-label boundaries", support_labels},
        {"history complexity analytic cases", hcm_cases},
        {"metric consistency invariants", metric_invariants},
        {"end-to-end determinism and goldens", end_to_end},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
                  << o.detail << "\n";
    }
    return failed ? 1 : 0;
}
