#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "beliefs/ingest.hpp"
#include "beliefs/types.hpp"

namespace beliefs {

inline constexpr int kDefaultPostDays = 182;
inline constexpr std::size_t kDefaultMinFiles = 3;

/// Analysis window of one release: the pre-release period since the previous
/// release and the post-release horizon used for defect counting.
struct ReleaseWindow {
    Release release;
    Timestamp pre_start = 0;  // exclusive
    Timestamp pre_end = 0;    // inclusive; equals release.release_time
    Timestamp post_end = 0;   // inclusive
    /// Source-file records with commit_time in (pre_start, pre_end], ordered
    /// by (commit_time, commit_id, file_path).
    std::vector<ChangeRecord> pre_records;
    std::size_t distinct_files = 0;
    /// The post horizon reaches past the last mined commit.
    bool right_censored = false;
};

/// Post-release bug-fix touches per file.
struct DefectCounts {
    std::map<std::string, std::int64_t> per_file;

    /// Count for `file`, 0 when absent.
    std::int64_t of(const std::string& file) const;
};

/// One window per release with ordinal >= 2. Releases sharing a timestamp with
/// their predecessor have an empty pre period and produce no window.
std::vector<ReleaseWindow> build_windows(std::span<const Release> releases,
                                         std::span<const ChangeRecord> records,
                                         int post_days = kDefaultPostDays,
                                         const SourceFilter& filter = SourceFilter());

/// Bug-fix touches with commit_time in (pre_end, post_end]. Every file of the
/// pre period is present, with 0 when it was not fixed.
DefectCounts count_post_defects(const ReleaseWindow& window, std::span<const ChangeRecord> records);

bool qualify_window(const ReleaseWindow& window, std::size_t min_files = kDefaultMinFiles);

}  // namespace beliefs
