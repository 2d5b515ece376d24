#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "beliefs/types.hpp"

namespace testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("beliefs-" + tag + "-" + std::to_string(rd()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

/// Builds the pinned 12-commit fixture repository at `dir`.
inline void make_fixture_repo(const fs::path& dir) {
    const std::string cmd =
        std::string("sh '") + BELIEFS_FIXTURE_SCRIPT + "' '" + dir.string() + "' >/dev/null 2>&1";
    if (shell(cmd) != 0) throw std::runtime_error("fixture script failed");
}

/// Relative path -> content for every regular file below `root`.
inline std::vector<std::pair<std::string, std::string>> tree(const fs::path& root) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), root).string(), read_file(e.path()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline beliefs::ChangeRecord rec(std::string commit, beliefs::Timestamp t, std::string author,
                                 std::string file, std::int64_t ins, std::int64_t del, bool fix) {
    return {std::move(commit), t, std::move(author), std::move(file), ins, del, fix};
}

}  // namespace testing
