#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "beliefs/types.hpp"

namespace beliefs {

inline constexpr const char* kHistoryFile = "history.jsonl";
inline constexpr const char* kReleasesFile = "releases.jsonl";

// JSON-lines caches: one object per line, UTF-8, LF-terminated.
// History fields: commit_id, commit_time, author, file_path, insertions,
// deletions, is_bug_fix. Release fields: tag_name, release_time, ordinal.

void write_history(std::ostream& out, std::span<const ChangeRecord> records);
void write_releases(std::ostream& out, std::span<const Release> releases);

/// Throws DataError naming the 1-based line of the first malformed entry.
std::vector<ChangeRecord> read_history(std::istream& in);
std::vector<Release> read_releases(std::istream& in);

void write_history_file(const std::filesystem::path& path, std::span<const ChangeRecord> records);
void write_releases_file(const std::filesystem::path& path, std::span<const Release> releases);
std::vector<ChangeRecord> read_history_file(const std::filesystem::path& path);
std::vector<Release> read_releases_file(const std::filesystem::path& path);

}  // namespace beliefs
