#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beliefs/labeling.hpp"
#include "beliefs/types.hpp"

namespace beliefs {

/// The 21 source-code extensions analysed by default (without the dot).
const std::vector<std::string>& default_extensions();

/// True iff the final extension of `path` (compared lowercase) is in
/// `extensions` and no part of the path contains "test" in any letter case.
/// Both '/' and '\' are accepted as separators.
bool is_source_file(std::string_view path, const std::set<std::string>& extensions);

/// Extension set with a convenience predicate; cheap to copy.
class SourceFilter {
public:
    SourceFilter();
    explicit SourceFilter(const std::vector<std::string>& extensions);

    bool accepts(std::string_view path) const { return is_source_file(path, extensions_); }
    const std::set<std::string>& extensions() const { return extensions_; }

private:
    std::set<std::string> extensions_;
};

struct HistoryOptions {
    /// Walk first-parent history only and skip merge commits.
    bool first_parent = true;
    /// Detect renames and attribute history of the old path to the newest name.
    bool follow_renames = false;
};

struct IngestStats {
    std::size_t commits = 0;
    std::size_t records = 0;
    std::int64_t insertions = 0;
    std::int64_t deletions = 0;
    std::size_t warnings = 0;
};

struct History {
    std::vector<ChangeRecord> records;
    IngestStats stats;
};

/// Incremental parser for the output of `git log -z --numstat` with the
/// record-separated header produced by `log_format()`.
class LogParser {
public:
    explicit LogParser(const KeywordSet& keywords) : keywords_(keywords) {}

    static std::string_view log_format();

    struct Rename {
        std::string commit_id;
        std::string from;
        std::string to;
    };

    void feed(std::string_view chunk);

    /// Flushes the final commit. Records keep log order (newest first) and
    /// renamed files carry their new path.
    History finish();

    /// Renames in log order; only populated when git was asked to detect them.
    const std::vector<Rename>& renames() const { return renames_; }

private:
    void parse_commit(std::string_view chunk);

    const KeywordSet& keywords_;
    std::string pending_;
    History history_;
    std::vector<Rename> renames_;
};

/// Rewrites paths so every record of a renamed file uses the newest name,
/// merging records that collapse onto the same (commit, path).
/// `records` must be in log order (newest commit first).
void apply_rename_following(std::vector<ChangeRecord>& records,
                            const std::vector<LogParser::Rename>& renames);

/// Mines one ChangeRecord per (commit, file) from a local repository.
/// Records are ordered by (commit_time, commit_id, file_path).
/// Throws ConfigError if `repo` is not a readable git repository.
History extract_history(const std::filesystem::path& repo, const HistoryOptions& options,
                        const KeywordSet& keywords);

/// All tags resolved to their target commit's committer time, sorted by
/// (time, tag name) and numbered from 1.
std::vector<Release> extract_releases(const std::filesystem::path& repo);

/// Sorts by (time, tag name) and assigns consecutive ordinals.
void assign_ordinals(std::vector<Release>& releases);

struct ProjectSummary {
    std::size_t commit_count = 0;
    double bug_fix_fraction = 0.0;
    std::size_t release_count = 0;
    std::size_t developer_count = 0;
    double active_years = 0.0;
};

ProjectSummary summarize(std::span<const ChangeRecord> records, std::span<const Release> releases);

struct SanityThresholds {
    std::size_t min_commits = 1000;
    double min_bug_fix_fraction = 0.10;
    std::size_t min_releases = 5;
    std::size_t min_developers = 30;
    double min_active_years = 3.0;
};

struct SanityVerdict {
    bool pass = true;
    std::vector<std::string> violations;
};

/// A project fails when any quantity is strictly below its threshold.
SanityVerdict apply_sanity_checks(const ProjectSummary& summary,
                                  const SanityThresholds& thresholds = {});

}  // namespace beliefs
