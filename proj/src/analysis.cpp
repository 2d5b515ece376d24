#include "beliefs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "beliefs/csv.hpp"

namespace beliefs {

namespace {

std::vector<double> abs_rhos(std::span<const SupportScore> scores) {
    std::vector<double> out;
    out.reserve(scores.size());
    for (const auto& s : scores) out.push_back(std::abs(s.rho));
    return out;
}

Ranking rank_treatments(std::vector<Treatment> candidates, const ScottKnottOptions& options) {
    Ranking r;
    std::vector<Treatment> kept;
    for (auto& t : candidates) {
        if (t.measurements.empty()) {
            r.dropped.push_back(t.label);
        } else {
            kept.push_back(std::move(t));
        }
    }
    if (!kept.empty()) r.groups = scott_knott(std::move(kept), options);
    return r;
}

}  // namespace

std::string_view score_status_name(ScoreStatus s) {
    switch (s) {
        case ScoreStatus::Significant: return "significant";
        case ScoreStatus::TooFewObservations: return "too_few_observations";
        case ScoreStatus::NotSignificant: return "not_significant";
    }
    return "?";
}

std::optional<ScoreStatus> parse_score_status(std::string_view name) {
    for (auto s : {ScoreStatus::Significant, ScoreStatus::TooFewObservations, ScoreStatus::NotSignificant}) {
        if (score_status_name(s) == name) return s;
    }
    return std::nullopt;
}

BeliefPopulation belief_population(const std::string& project, Belief belief,
                                   std::span<const SupportScore> scores, std::size_t releases_total,
                                   double alpha, std::size_t min_observations) {
    BeliefPopulation pop;
    pop.belief = belief;
    pop.project = project;
    pop.releases_total = releases_total;
    for (const auto& s : scores) {
        if (s.belief != belief) continue;
        if (s.n < min_observations) {
            ++pop.excluded.too_few_observations;
        } else if (!(s.p_value < alpha)) {
            ++pop.excluded.not_significant;
        } else {
            pop.scores.push_back(s);
        }
    }
    return pop;
}

ProjectAssessment assess_project(const std::string& project, std::span<const ChangeRecord> records,
                                 std::span<const Release> releases, const Config& config,
                                 bool keep_vectors) {
    ProjectAssessment a;
    a.project = project;
    a.summary = summarize(records, releases);

    const auto windows = build_windows(releases, records, config.post_days, config.filter());
    const HcmConfig hcm = config.hcm();
    std::vector<SupportScore> scores;
    std::array<std::size_t, 10> unqualified{}, empty{};

    for (const auto& w : windows) {
        WindowInfo info{w.release.ordinal, w.release.tag_name, w.release.release_time, w.pre_start,
                        w.distinct_files, qualify_window(w, config.min_files), w.right_censored};
        a.windows.push_back(info);
        if (!info.qualified) {
            for (auto& u : unqualified) ++u;
            continue;
        }
        const DefectCounts defects = count_post_defects(w, records);
        auto vectors = compute_all(w, defects, hcm);
        for (const auto& v : vectors) {
            if (v.empty()) {
                ++empty[belief_index(v.belief)];
                continue;
            }
            SupportScore s;
            s.belief = v.belief;
            s.release_ordinal = w.release.ordinal;
            s.n = v.size();
            if (v.size() >= 2) {
                std::vector<double> y(v.y.begin(), v.y.end());
                const Correlation c = spearman(v.x, y, config.exact_p);
                s.rho = c.rho;
                s.p_value = c.p_value;
            }
            scores.push_back(s);
        }
        if (keep_vectors) a.vectors.emplace_back(w.release.ordinal, std::move(vectors));
    }

    for (const auto& s : scores) {
        ScoreStatus st = s.n < config.min_observations ? ScoreStatus::TooFewObservations
                         : s.p_value < config.alpha    ? ScoreStatus::Significant
                                                       : ScoreStatus::NotSignificant;
        a.scores.push_back({s, st});
    }
    for (Belief b : kAllBeliefs) {
        auto& pop = a.populations[belief_index(b)];
        pop = belief_population(project, b, scores, releases.size(), config.alpha,
                                config.min_observations);
        pop.excluded.unqualified_window = unqualified[belief_index(b)];
        pop.excluded.empty_vector = empty[belief_index(b)];
    }
    return a;
}

SupportLevel support_label(double rho) {
    const double r = std::abs(rho);
    if (r < 0.40) return SupportLevel::None;
    if (r < 0.50) return SupportLevel::MinimumWeak;
    if (r < 0.60) return SupportLevel::Support;
    if (r < 0.70) return SupportLevel::Strong;
    return SupportLevel::VeryStrong;
}

std::string_view support_level_name(SupportLevel level) {
    switch (level) {
        case SupportLevel::None: return "none";
        case SupportLevel::MinimumWeak: return "minimum/weak";
        case SupportLevel::Support: return "support";
        case SupportLevel::Strong: return "strong";
        case SupportLevel::VeryStrong: return "very strong";
    }
    return "?";
}

int coverage(std::span<const BeliefPopulation> populations, double threshold) {
    int covered = 0;
    for (const auto& p : populations) {
        if (p.scores.empty()) continue;
        if (median(abs_rhos(p.scores)) >= threshold) ++covered;
    }
    return covered;
}

std::optional<double> prevalence(std::span<const BeliefPopulation> populations, double threshold) {
    std::size_t pool = 0, hits = 0;
    for (const auto& p : populations) {
        for (const auto& s : p.scores) {
            ++pool;
            if (std::abs(s.rho) >= threshold) ++hits;
        }
    }
    if (pool == 0) return std::nullopt;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pool);
}

Ranking rank_beliefs(std::span<const BeliefPopulation> populations, const ScottKnottOptions& options) {
    std::vector<Treatment> treatments;
    for (Belief b : kAllBeliefs) {
        Treatment t{std::string(belief_name(b)), {}};
        for (const auto& p : populations) {
            if (p.belief != b) continue;
            auto r = abs_rhos(p.scores);
            t.measurements.insert(t.measurements.end(), r.begin(), r.end());
        }
        treatments.push_back(std::move(t));
    }
    return rank_treatments(std::move(treatments), options);
}

std::string_view size_bucket_name(SizeBucket b) {
    switch (b) {
        case SizeBucket::Unbucketed: return "unbucketed";
        case SizeBucket::Small: return "small";
        case SizeBucket::Medium: return "medium";
        case SizeBucket::Large: return "large";
    }
    return "?";
}

SizeThresholds size_thresholds(std::span<const WindowInfo> windows, bool replication_mode) {
    std::vector<double> df;
    for (const auto& w : windows) {
        if (w.qualified) df.push_back(static_cast<double>(w.distinct_files));
    }
    SizeThresholds t;
    t.windows = df.size();
    if (!df.empty()) {
        t.median = median(df);
        t.q3 = quantile(df, 0.75);
    }
    if (replication_mode) t.median = kReplicationMedianFiles;
    return t;
}

SizeBucket bucket_of(std::size_t distinct_files, const SizeThresholds& t) {
    if (distinct_files <= kUnbucketedMaxFiles) return SizeBucket::Unbucketed;
    const auto df = static_cast<double>(distinct_files);
    if (df >= t.q3) return SizeBucket::Large;
    if (df >= t.median) return SizeBucket::Medium;
    return SizeBucket::Small;
}

Ranking rank_beliefs_by_size(std::span<const BeliefPopulation> populations, const BucketMap& buckets,
                             const ScottKnottOptions& options) {
    std::vector<Treatment> treatments;
    for (Belief b : kAllBeliefs) {
        for (SizeBucket sb : {SizeBucket::Small, SizeBucket::Medium, SizeBucket::Large}) {
            Treatment t{fmt::format("{} {}", belief_name(b), size_bucket_name(sb)), {}};
            for (const auto& p : populations) {
                if (p.belief != b) continue;
                for (const auto& s : p.scores) {
                    auto it = buckets.find({p.project, s.release_ordinal});
                    if (it != buckets.end() && it->second == sb) t.measurements.push_back(std::abs(s.rho));
                }
            }
            treatments.push_back(std::move(t));
        }
    }
    return rank_treatments(std::move(treatments), options);
}

std::string_view trend_name(Trend t) {
    switch (t) {
        case Trend::Neither: return "neither";
        case Trend::Growth: return "growth";
        case Trend::Decay: return "decay";
    }
    return "?";
}

TrendResult growth_decay(const BeliefPopulation& population,
                         const std::map<int, Timestamp>& release_times, double threshold) {
    TrendResult r;
    r.belief = population.belief;
    r.project = population.project;
    r.n = population.scores.size();
    if (r.n < kMinTrendScores) return r;

    std::vector<double> times, strength;
    for (const auto& s : population.scores) {
        auto it = release_times.find(s.release_ordinal);
        if (it == release_times.end())
            throw DataError(fmt::format("{}: no window for release {}", population.project,
                                        s.release_ordinal));
        times.push_back(static_cast<double>(it->second));
        strength.push_back(std::abs(s.rho));
    }
    const Correlation c = spearman(times, strength);
    r.rho_time = c.rho;
    r.p_time = c.p_value;
    if (c.rho >= threshold) {
        r.trend = Trend::Growth;
    } else if (c.rho <= -threshold) {
        r.trend = Trend::Decay;
    }
    return r;
}

DatasetAnalysis analyze_dataset(std::span<const ProjectAssessment> projects, const Config& config) {
    DatasetAnalysis d;
    std::vector<WindowInfo> all_windows;
    for (const auto& p : projects) {
        d.projects.push_back(p.project);
        d.summaries.push_back(p.summary);
        d.populations.insert(d.populations.end(), p.populations.begin(), p.populations.end());
        all_windows.insert(all_windows.end(), p.windows.begin(), p.windows.end());
    }
    const ScottKnottOptions sk = config.scott_knott();
    d.ranking = rank_beliefs(d.populations, sk);

    d.thresholds = size_thresholds(all_windows, config.replication_mode);
    for (const auto& p : projects) {
        for (const auto& w : p.windows) {
            if (w.qualified) d.buckets[{p.project, w.release_ordinal}] = bucket_of(w.distinct_files, d.thresholds);
        }
    }
    d.size_ranking = rank_beliefs_by_size(d.populations, d.buckets, sk);

    for (const auto& p : projects) {
        d.coverage.push_back({p.project, coverage(p.populations, config.support_threshold),
                              prevalence(p.populations, config.support_threshold)});
        std::map<int, Timestamp> times;
        for (const auto& w : p.windows) times[w.release_ordinal] = w.release_time;
        for (const auto& pop : p.populations)
            d.trends.push_back(growth_decay(pop, times, config.trend_threshold));
    }
    return d;
}

// --- IO ---------------------------------------------------------------------------

namespace {

std::string boolean(bool b) { return b ? "true" : "false"; }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

struct Reader {
    std::filesystem::path path;
    csv::Table table;
    std::size_t row = 0;

    explicit Reader(std::filesystem::path p) : path(std::move(p)) {
        try {
            table = csv::read_file(path);
        } catch (const DataError& e) {
            throw DataError(path.filename().string() + ": " + e.what());
        }
    }

    // Data rows start on line 2.
    std::size_t line() const { return row + 2; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError(fmt::format("{}: line {}: {}", path.filename().string(), line(), msg));
    }

    template <typename Fn>
    void each(Fn&& fn) {
        for (row = 0; row < table.rows.size(); ++row) {
            try {
                fn(table.rows[row]);
            } catch (const DataError& e) {
                if (e.line() == 0) throw;
                fail(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
            }
        }
    }

    std::size_t col(std::string_view name) const {
        try {
            return table.column(name);
        } catch (const DataError& e) {
            throw DataError(path.filename().string() + ": " + e.what());
        }
    }

    double real(const std::vector<std::string>& r, std::size_t c) const { return csv::to_double(r[c], line()); }
    long long integer(const std::vector<std::string>& r, std::size_t c) const {
        return csv::to_int(r[c], line());
    }
    std::size_t count(const std::vector<std::string>& r, std::size_t c) const {
        long long v = integer(r, c);
        if (v < 0) fail("negative count");
        return static_cast<std::size_t>(v);
    }
    bool flag(const std::vector<std::string>& r, std::size_t c) const {
        if (r[c] == "true") return true;
        if (r[c] == "false") return false;
        fail("expected true or false, got '" + r[c] + "'");
    }
    Belief belief(const std::vector<std::string>& r, std::size_t c) const {
        auto b = parse_belief(r[c]);
        if (!b) fail("unknown belief '" + r[c] + "'");
        return *b;
    }
};

}  // namespace

void write_assessments(const std::filesystem::path& dir, std::span<const ProjectAssessment> projects) {
    std::filesystem::create_directories(dir);

    auto summary = open_out(dir / "summary.csv");
    csv::write_row(summary, {"project", "commit_count", "bug_fix_fraction", "release_count",
                             "developer_count", "active_years"});
    auto windows = open_out(dir / "windows.csv");
    csv::write_row(windows, {"project", "release_ordinal", "tag_name", "release_time", "pre_start",
                             "distinct_files", "qualified", "right_censored"});
    auto scores = open_out(dir / "scores.csv");
    csv::write_row(scores, {"project", "belief", "release_ordinal", "rho", "p", "n", "status"});
    auto pops = open_out(dir / "populations.csv");
    csv::write_row(pops, {"project", "belief", "release_ordinal", "rho", "p", "n"});
    auto excl = open_out(dir / "exclusions.csv");
    csv::write_row(excl, {"project", "belief", "reason", "count"});

    for (const auto& p : projects) {
        const auto& s = p.summary;
        csv::write_row(summary, {p.project, std::to_string(s.commit_count), csv::number(s.bug_fix_fraction),
                                 std::to_string(s.release_count), std::to_string(s.developer_count),
                                 csv::number(s.active_years)});
        for (const auto& w : p.windows) {
            csv::write_row(windows, {p.project, std::to_string(w.release_ordinal), w.tag_name,
                                     std::to_string(w.release_time), std::to_string(w.pre_start),
                                     std::to_string(w.distinct_files), boolean(w.qualified),
                                     boolean(w.right_censored)});
        }
        for (const auto& sw : p.scores) {
            const auto& sc = sw.score;
            csv::write_row(scores, {p.project, std::string(belief_name(sc.belief)),
                                    std::to_string(sc.release_ordinal), csv::number(sc.rho),
                                    csv::number(sc.p_value), std::to_string(sc.n),
                                    std::string(score_status_name(sw.status))});
        }
        for (const auto& pop : p.populations) {
            for (const auto& sc : pop.scores) {
                csv::write_row(pops, {p.project, std::string(belief_name(sc.belief)),
                                      std::to_string(sc.release_ordinal), csv::number(sc.rho),
                                      csv::number(sc.p_value), std::to_string(sc.n)});
            }
            const std::string b(belief_name(pop.belief));
            const auto& e = pop.excluded;
            csv::write_row(excl, {p.project, b, "unqualified_window", std::to_string(e.unqualified_window)});
            csv::write_row(excl, {p.project, b, "empty_vector", std::to_string(e.empty_vector)});
            csv::write_row(excl, {p.project, b, "too_few_observations", std::to_string(e.too_few_observations)});
            csv::write_row(excl, {p.project, b, "not_significant", std::to_string(e.not_significant)});
        }
    }
}

std::vector<ProjectAssessment> read_assessments(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
    std::vector<ProjectAssessment> projects;
    std::map<std::string, std::size_t> index;

    Reader summary(dir / "summary.csv");
    {
        const auto c_project = summary.col("project"), c_commits = summary.col("commit_count"),
                   c_fix = summary.col("bug_fix_fraction"), c_rel = summary.col("release_count"),
                   c_dev = summary.col("developer_count"), c_years = summary.col("active_years");
        summary.each([&](const auto& r) {
            if (r[c_project].empty()) summary.fail("empty project name");
            if (!index.emplace(r[c_project], projects.size()).second)
                summary.fail("duplicate project '" + r[c_project] + "'");
            ProjectAssessment a;
            a.project = r[c_project];
            a.summary.commit_count = summary.count(r, c_commits);
            a.summary.bug_fix_fraction = summary.real(r, c_fix);
            a.summary.release_count = summary.count(r, c_rel);
            a.summary.developer_count = summary.count(r, c_dev);
            a.summary.active_years = summary.real(r, c_years);
            for (Belief b : kAllBeliefs) {
                auto& pop = a.populations[belief_index(b)];
                pop.belief = b;
                pop.project = a.project;
                pop.releases_total = a.summary.release_count;
            }
            projects.push_back(std::move(a));
        });
    }

    auto project_of = [&](Reader& rd, const std::string& name) -> ProjectAssessment& {
        auto it = index.find(name);
        if (it == index.end()) rd.fail("project '" + name + "' missing from summary.csv");
        return projects[it->second];
    };

    Reader windows(dir / "windows.csv");
    {
        const auto c_project = windows.col("project"), c_ord = windows.col("release_ordinal"),
                   c_tag = windows.col("tag_name"), c_time = windows.col("release_time"),
                   c_start = windows.col("pre_start"), c_df = windows.col("distinct_files"),
                   c_q = windows.col("qualified"), c_rc = windows.col("right_censored");
        windows.each([&](const auto& r) {
            WindowInfo w;
            w.release_ordinal = static_cast<int>(windows.integer(r, c_ord));
            w.tag_name = r[c_tag];
            w.release_time = windows.integer(r, c_time);
            w.pre_start = windows.integer(r, c_start);
            w.distinct_files = windows.count(r, c_df);
            w.qualified = windows.flag(r, c_q);
            w.right_censored = windows.flag(r, c_rc);
            project_of(windows, r[c_project]).windows.push_back(std::move(w));
        });
    }

    auto read_score = [](Reader& rd, const std::vector<std::string>& r) {
        SupportScore s;
        s.belief = rd.belief(r, rd.col("belief"));
        s.release_ordinal = static_cast<int>(rd.integer(r, rd.col("release_ordinal")));
        s.rho = rd.real(r, rd.col("rho"));
        s.p_value = rd.real(r, rd.col("p"));
        s.n = rd.count(r, rd.col("n"));
        if (std::abs(s.rho) > 1.0) rd.fail("rho outside [-1, 1]");
        if (s.p_value < 0.0 || s.p_value > 1.0) rd.fail("p outside [0, 1]");
        return s;
    };

    Reader scores(dir / "scores.csv");
    {
        const auto c_project = scores.col("project"), c_status = scores.col("status");
        scores.each([&](const auto& r) {
            auto st = parse_score_status(r[c_status]);
            if (!st) scores.fail("unknown status '" + r[c_status] + "'");
            project_of(scores, r[c_project]).scores.push_back({read_score(scores, r), *st});
        });
    }

    Reader pops(dir / "populations.csv");
    {
        const auto c_project = pops.col("project");
        pops.each([&](const auto& r) {
            SupportScore s = read_score(pops, r);
            project_of(pops, r[c_project]).populations[belief_index(s.belief)].scores.push_back(s);
        });
    }

    Reader excl(dir / "exclusions.csv");
    {
        const auto c_project = excl.col("project"), c_belief = excl.col("belief"),
                   c_reason = excl.col("reason"), c_count = excl.col("count");
        excl.each([&](const auto& r) {
            auto& e = project_of(excl, r[c_project]).populations[belief_index(excl.belief(r, c_belief))].excluded;
            const std::size_t n = excl.count(r, c_count);
            const std::string& reason = r[c_reason];
            if (reason == "unqualified_window") e.unqualified_window = n;
            else if (reason == "empty_vector") e.empty_vector = n;
            else if (reason == "too_few_observations") e.too_few_observations = n;
            else if (reason == "not_significant") e.not_significant = n;
            else excl.fail("unknown reason '" + reason + "'");
        });
    }
    return projects;
}

}  // namespace beliefs
