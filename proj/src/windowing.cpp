#include "beliefs/windowing.hpp"

#include <algorithm>
#include <set>

namespace beliefs {

std::int64_t DefectCounts::of(const std::string& file) const {
    auto it = per_file.find(file);
    return it == per_file.end() ? 0 : it->second;
}

std::vector<ReleaseWindow> build_windows(std::span<const Release> releases,
                                         std::span<const ChangeRecord> records, int post_days,
                                         const SourceFilter& filter) {
    std::vector<ReleaseWindow> windows;
    if (releases.size() < 2) return windows;

    std::vector<const ChangeRecord*> sorted;
    sorted.reserve(records.size());
    Timestamp last_commit = 0;
    for (const auto& r : records) {
        last_commit = std::max(last_commit, r.commit_time);
        if (filter.accepts(r.file_path)) sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(), [](const ChangeRecord* a, const ChangeRecord* b) {
        return std::tie(a->commit_time, a->commit_id, a->file_path) <
               std::tie(b->commit_time, b->commit_id, b->file_path);
    });
    auto after = [&](Timestamp t) {
        return std::upper_bound(sorted.begin(), sorted.end(), t,
                                [](Timestamp v, const ChangeRecord* r) { return v < r->commit_time; });
    };

    const Timestamp horizon = static_cast<Timestamp>(post_days) * kSecondsPerDay;
    for (std::size_t i = 1; i < releases.size(); ++i) {
        const Release& prev = releases[i - 1];
        const Release& cur = releases[i];
        if (cur.release_time <= prev.release_time) continue;

        ReleaseWindow w;
        w.release = cur;
        w.pre_start = prev.release_time;
        w.pre_end = cur.release_time;
        w.post_end = cur.release_time + horizon;
        w.right_censored = w.post_end > last_commit;

        std::set<std::string_view> files;
        for (auto it = after(w.pre_start), end = after(w.pre_end); it != end; ++it) {
            w.pre_records.push_back(**it);
            files.insert((*it)->file_path);
        }
        w.distinct_files = files.size();
        windows.push_back(std::move(w));
    }
    return windows;
}

DefectCounts count_post_defects(const ReleaseWindow& window, std::span<const ChangeRecord> records) {
    DefectCounts counts;
    for (const auto& r : window.pre_records) counts.per_file.try_emplace(r.file_path, 0);
    for (const auto& r : records) {
        if (r.is_bug_fix && r.commit_time > window.pre_end && r.commit_time <= window.post_end)
            ++counts.per_file[r.file_path];
    }
    return counts;
}

bool qualify_window(const ReleaseWindow& window, std::size_t min_files) {
    return window.distinct_files >= min_files;
}

}  // namespace beliefs
