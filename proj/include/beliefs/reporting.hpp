#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "beliefs/analysis.hpp"

namespace beliefs {

/// Median or IQR as printed in tables: x100, rounded to an integer.
long scaled(double v);

/// Markdown table: Rank | Treatment | Median | IQR (x100).
std::string render_ranking(const Ranking& ranking);
/// rank, treatment, label, median, iqr, n with raw values.
std::string ranking_csv(const Ranking& ranking);

/// Five-number summaries of commits, bug-fix %, releases, developers, years.
std::string render_distribution(std::span<const ProjectSummary> summaries);
std::string distribution_csv(std::span<const ProjectSummary> summaries);

/// Growth % and Decay % of projects per belief, by Decay % descending.
std::string render_trends(std::span<const TrendResult> trends, std::size_t projects);
std::string trends_csv(std::span<const TrendResult> trends);
std::string trend_summary_csv(std::span<const TrendResult> trends, std::size_t projects);

std::string render_coverage(std::span<const ProjectCoverage> coverage);
std::string coverage_csv(std::span<const ProjectCoverage> coverage);

std::string populations_csv(std::span<const BeliefPopulation> populations);
std::string buckets_csv(const DatasetAnalysis& analysis);

/// Every report file by name. Pure: the same analysis renders the same bytes.
std::map<std::string, std::string> render_report(const DatasetAnalysis& analysis);

void write_report(const std::filesystem::path& dir, const DatasetAnalysis& analysis);

}  // namespace beliefs
