#include "beliefs/cache.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace beliefs {

namespace {

using ojson = nlohmann::ordered_json;

template <typename T>
T field(const nlohmann::json& j, const char* name, std::size_t line) {
    auto it = j.find(name);
    if (it == j.end()) throw DataError(std::string("missing field '") + name + "'", line);
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw DataError(std::string("field '") + name + "' has the wrong type", line);
    }
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw DataError("malformed JSON", n);
        }
        if (!j.is_object()) throw DataError("expected a JSON object", n);
        fn(j, n);
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    return in;
}

}  // namespace

void write_history(std::ostream& out, std::span<const ChangeRecord> records) {
    for (const auto& r : records) {
        ojson j;
        j["commit_id"] = r.commit_id;
        j["commit_time"] = r.commit_time;
        j["author"] = r.author;
        j["file_path"] = r.file_path;
        j["insertions"] = r.insertions;
        j["deletions"] = r.deletions;
        j["is_bug_fix"] = r.is_bug_fix;
        out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
}

void write_releases(std::ostream& out, std::span<const Release> releases) {
    for (const auto& r : releases) {
        ojson j;
        j["tag_name"] = r.tag_name;
        j["release_time"] = r.release_time;
        j["ordinal"] = r.ordinal;
        out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
}

std::vector<ChangeRecord> read_history(std::istream& in) {
    std::vector<ChangeRecord> records;
    std::set<std::pair<std::string, std::string>> seen;
    for_each_line(in, [&](const nlohmann::json& j, std::size_t line) {
        ChangeRecord r;
        r.commit_id = field<std::string>(j, "commit_id", line);
        r.commit_time = field<Timestamp>(j, "commit_time", line);
        r.author = field<std::string>(j, "author", line);
        r.file_path = field<std::string>(j, "file_path", line);
        r.insertions = field<std::int64_t>(j, "insertions", line);
        r.deletions = field<std::int64_t>(j, "deletions", line);
        r.is_bug_fix = field<bool>(j, "is_bug_fix", line);
        if (r.commit_time <= 0) throw DataError("commit_time must be positive", line);
        if (r.insertions < 0 || r.deletions < 0) throw DataError("negative churn", line);
        if (!seen.emplace(r.commit_id, r.file_path).second)
            throw DataError("duplicate (commit_id, file_path)", line);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<Release> read_releases(std::istream& in) {
    std::vector<Release> releases;
    for_each_line(in, [&](const nlohmann::json& j, std::size_t line) {
        Release r;
        r.tag_name = field<std::string>(j, "tag_name", line);
        r.release_time = field<Timestamp>(j, "release_time", line);
        r.ordinal = field<int>(j, "ordinal", line);
        int expected = static_cast<int>(releases.size()) + 1;
        if (r.ordinal != expected)
            throw DataError("ordinal " + std::to_string(r.ordinal) + " out of sequence", line);
        if (!releases.empty() && r.release_time < releases.back().release_time)
            throw DataError("release_time decreases with ordinal", line);
        releases.push_back(std::move(r));
    });
    return releases;
}

void write_history_file(const std::filesystem::path& path, std::span<const ChangeRecord> records) {
    auto out = open_out(path);
    write_history(out, records);
}

void write_releases_file(const std::filesystem::path& path, std::span<const Release> releases) {
    auto out = open_out(path);
    write_releases(out, releases);
}

std::vector<ChangeRecord> read_history_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_history(in);
}

std::vector<Release> read_releases_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_releases(in);
}

}  // namespace beliefs
