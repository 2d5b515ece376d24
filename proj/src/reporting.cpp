#include "beliefs/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "beliefs/csv.hpp"

namespace beliefs {

namespace {

constexpr std::string_view kNoData = "_no data_\n";

/// "B3 small" -> "B3 (61%) small"; plain belief names get their agreement too.
std::string annotate(const std::string& treatment) {
    const auto space = treatment.find(' ');
    const auto b = parse_belief(treatment.substr(0, space));
    if (!b) return treatment;
    std::string out = belief_label(*b);
    if (space != std::string::npos) out += treatment.substr(space);
    return out;
}

std::string percent(double v) { return fmt::format("{:.1f}%", v); }

struct TrendRow {
    Belief belief;
    std::size_t growth = 0;
    std::size_t decay = 0;
};

std::vector<TrendRow> trend_rows(std::span<const TrendResult> trends) {
    std::vector<TrendRow> rows;
    for (Belief b : kAllBeliefs) rows.push_back({b});
    for (const auto& t : trends) {
        auto& r = rows[belief_index(t.belief)];
        if (t.trend == Trend::Growth) ++r.growth;
        if (t.trend == Trend::Decay) ++r.decay;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TrendRow& a, const TrendRow& b) { return a.decay > b.decay; });
    return rows;
}

double share(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

struct Quantity {
    std::string_view name;
    double (*get)(const ProjectSummary&);
};

constexpr std::array<Quantity, 5> kQuantities = {{
    {"commits", [](const ProjectSummary& s) { return static_cast<double>(s.commit_count); }},
    {"bug_fix_percent", [](const ProjectSummary& s) { return 100.0 * s.bug_fix_fraction; }},
    {"releases", [](const ProjectSummary& s) { return static_cast<double>(s.release_count); }},
    {"developers", [](const ProjectSummary& s) { return static_cast<double>(s.developer_count); }},
    {"active_years", [](const ProjectSummary& s) { return s.active_years; }},
}};

std::array<double, 5> five_numbers(std::span<const ProjectSummary> summaries, const Quantity& q) {
    std::vector<double> v;
    for (const auto& s : summaries) v.push_back(q.get(s));
    return {quantile(v, 0.0), quantile(v, 0.25), median(v), quantile(v, 0.75), quantile(v, 1.0)};
}

}  // namespace

long scaled(double v) { return std::lround(100.0 * v); }

std::string render_ranking(const Ranking& ranking) {
    std::ostringstream out;
    if (ranking.groups.empty()) {
        out << kNoData;
    } else {
        out << "| Rank | Treatment | Median | IQR |\n|---:|---|---:|---:|\n";
        for (const auto& g : ranking.groups) {
            for (const auto& t : g.treatments) {
                out << fmt::format("| {} | {} | {} | {} |\n", g.rank, annotate(t.label), scaled(t.median),
                                   scaled(t.iqr));
            }
        }
    }
    if (!ranking.dropped.empty()) {
        out << "\nNo significant scores (left out): ";
        for (std::size_t i = 0; i < ranking.dropped.size(); ++i)
            out << (i ? ", " : "") << annotate(ranking.dropped[i]);
        out << "\n";
    }
    return out.str();
}

std::string ranking_csv(const Ranking& ranking) {
    std::ostringstream out;
    csv::write_row(out, {"rank", "treatment", "label", "median", "iqr", "n"});
    for (const auto& g : ranking.groups) {
        for (const auto& t : g.treatments) {
            csv::write_row(out, {std::to_string(g.rank), t.label, annotate(t.label), csv::number(t.median),
                                 csv::number(t.iqr), std::to_string(t.count)});
        }
    }
    return out.str();
}

std::string render_distribution(std::span<const ProjectSummary> summaries) {
    if (summaries.empty()) return std::string(kNoData);
    std::ostringstream out;
    out << "| Quantity | Min | Q1 | Median | Q3 | Max |\n|---|---:|---:|---:|---:|---:|\n";
    for (const auto& q : kQuantities) {
        auto f = five_numbers(summaries, q);
        out << fmt::format("| {} | {:.1f} | {:.1f} | {:.1f} | {:.1f} | {:.1f} |\n", q.name, f[0], f[1], f[2],
                           f[3], f[4]);
    }
    return out.str();
}

std::string distribution_csv(std::span<const ProjectSummary> summaries) {
    std::ostringstream out;
    csv::write_row(out, {"quantity", "min", "q1", "median", "q3", "max", "projects"});
    if (summaries.empty()) return out.str();
    for (const auto& q : kQuantities) {
        auto f = five_numbers(summaries, q);
        csv::write_row(out, {std::string(q.name), csv::number(f[0]), csv::number(f[1]), csv::number(f[2]),
                             csv::number(f[3]), csv::number(f[4]), std::to_string(summaries.size())});
    }
    return out.str();
}

std::string render_trends(std::span<const TrendResult> trends, std::size_t projects) {
    if (projects == 0) return std::string(kNoData);
    std::ostringstream out;
    out << "| Belief | Growth % | Decay % |\n|---|---:|---:|\n";
    for (const auto& r : trend_rows(trends)) {
        out << fmt::format("| {} | {} | {} |\n", belief_label(r.belief), percent(share(r.growth, projects)),
                           percent(share(r.decay, projects)));
    }
    return out.str();
}

std::string trends_csv(std::span<const TrendResult> trends) {
    std::ostringstream out;
    csv::write_row(out, {"project", "belief", "rho_time", "p_time", "n", "trend"});
    for (const auto& t : trends) {
        const bool computed = t.n >= kMinTrendScores;
        csv::write_row(out, {t.project, std::string(belief_name(t.belief)),
                             computed ? csv::number(t.rho_time) : "", computed ? csv::number(t.p_time) : "",
                             std::to_string(t.n), std::string(trend_name(t.trend))});
    }
    return out.str();
}

std::string trend_summary_csv(std::span<const TrendResult> trends, std::size_t projects) {
    std::ostringstream out;
    csv::write_row(out, {"belief", "label", "growth_percent", "decay_percent", "projects"});
    for (const auto& r : trend_rows(trends)) {
        csv::write_row(out, {std::string(belief_name(r.belief)), belief_label(r.belief),
                             csv::number(share(r.growth, projects)), csv::number(share(r.decay, projects)),
                             std::to_string(projects)});
    }
    return out.str();
}

std::string render_coverage(std::span<const ProjectCoverage> coverage) {
    if (coverage.empty()) return std::string(kNoData);
    std::ostringstream out;
    out << "| Project | Beliefs covered | Prevalence |\n|---|---:|---:|\n";
    std::size_t all = 0;
    for (const auto& c : coverage) {
        out << fmt::format("| {} | {} | {} |\n", c.project, c.coverage,
                           c.prevalence ? percent(*c.prevalence) : std::string("n/a"));
        if (c.coverage == static_cast<int>(kAllBeliefs.size())) ++all;
    }
    out << fmt::format("\nProjects covering all 10 beliefs: {} of {} ({})\n", all, coverage.size(),
                       percent(share(all, coverage.size())));
    return out.str();
}

std::string coverage_csv(std::span<const ProjectCoverage> coverage) {
    std::ostringstream out;
    csv::write_row(out, {"project", "coverage", "prevalence_percent"});
    for (const auto& c : coverage) {
        csv::write_row(out, {c.project, std::to_string(c.coverage),
                             c.prevalence ? csv::number(*c.prevalence) : "n/a"});
    }
    return out.str();
}

std::string populations_csv(std::span<const BeliefPopulation> populations) {
    std::ostringstream out;
    csv::write_row(out, {"project", "belief", "release_ordinal", "rho", "p", "n", "support", "contrary"});
    for (const auto& pop : populations) {
        for (const auto& s : pop.scores) {
            csv::write_row(out, {pop.project, std::string(belief_name(s.belief)), std::to_string(s.release_ordinal),
                                 csv::number(s.rho), csv::number(s.p_value), std::to_string(s.n),
                                 std::string(support_level_name(support_label(s.rho))),
                                 s.rho < 0.0 ? "true" : "false"});
        }
    }
    return out.str();
}

std::string buckets_csv(const DatasetAnalysis& a) {
    std::ostringstream out;
    csv::write_row(out, {"project", "release_ordinal", "bucket", "median_df", "q3_df"});
    for (const auto& [key, bucket] : a.buckets) {
        csv::write_row(out, {key.first, std::to_string(key.second), std::string(size_bucket_name(bucket)),
                             csv::number(a.thresholds.median), csv::number(a.thresholds.q3)});
    }
    return out.str();
}

std::map<std::string, std::string> render_report(const DatasetAnalysis& a) {
    std::map<std::string, std::string> files;
    files["ranking.csv"] = ranking_csv(a.ranking);
    files["size_ranking.csv"] = ranking_csv(a.size_ranking);
    files["populations.csv"] = populations_csv(a.populations);
    files["trends.csv"] = trends_csv(a.trends);
    files["trend_summary.csv"] = trend_summary_csv(a.trends, a.projects.size());
    files["buckets.csv"] = buckets_csv(a);
    files["distribution.csv"] = distribution_csv(a.summaries);
    files["coverage.csv"] = coverage_csv(a.coverage);

    std::ostringstream md;
    md << "# Defect-prediction belief assessment\n\n";
    md << fmt::format("Projects: {}\n\n", a.projects.size());

    md << "## Ranking of all beliefs\n\n"
       << "Scott-Knott ranks over |rho| of the significant scores pooled across projects; "
          "rank 1 is the weakest. Median and IQR are x100.\n\n"
       << render_ranking(a.ranking) << "\n";

    md << "## Coverage and prevalence\n\n"
       << "A project covers a belief when its median |rho| reaches the support threshold. "
          "Prevalence is the share of its significant scores that do.\n\n"
       << render_coverage(a.coverage) << "\n";

    md << "## Ranking by release size\n\n";
    if (a.thresholds.windows == 0) {
        md << kNoData << "\n";
    } else {
        md << fmt::format("Size thresholds from {} qualified windows: median D_F = {}, Q3 D_F = {}.\n\n",
                          a.thresholds.windows, csv::number(a.thresholds.median), csv::number(a.thresholds.q3))
           << render_ranking(a.size_ranking) << "\n";
    }

    md << "## Growth and decay\n\n"
       << "Share of projects whose support grows or decays with release date.\n\n"
       << render_trends(a.trends, a.projects.size()) << "\n";

    md << "## Contrary evidence\n\n";
    std::array<std::size_t, 10> negative{};
    std::size_t total_negative = 0;
    for (const auto& pop : a.populations) {
        for (const auto& s : pop.scores) {
            if (s.rho < 0.0) {
                ++negative[belief_index(pop.belief)];
                ++total_negative;
            }
        }
    }
    if (total_negative == 0) {
        md << "No significant negative correlations.\n\n";
    } else {
        md << "| Belief | Significant negative scores |\n|---|---:|\n";
        for (Belief b : kAllBeliefs) {
            if (negative[belief_index(b)]) md << fmt::format("| {} | {} |\n", belief_label(b), negative[belief_index(b)]);
        }
        md << "\n";
    }

    md << "## Dataset\n\n" << render_distribution(a.summaries);
    files["report.md"] = md.str();
    return files;
}

void write_report(const std::filesystem::path& dir, const DatasetAnalysis& analysis) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : render_report(analysis)) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + (dir / name).string());
        out << content;
    }
}

}  // namespace beliefs
