#include "beliefs/labeling.hpp"

#include <algorithm>
#include <fstream>

#include "beliefs/types.hpp"

namespace beliefs {

namespace {

bool is_token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

KeywordSet::KeywordSet(std::vector<std::string> stems) : stems_(std::move(stems)) {
    if (stems_.empty()) throw ConfigError("keyword set is empty");
    for (const auto& s : stems_) {
        if (s.empty()) throw ConfigError("keyword stem is empty");
        for (unsigned char c : s) {
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                throw ConfigError("keyword stem '" + s + "' contains whitespace");
            if (c >= 'A' && c <= 'Z')
                throw ConfigError("keyword stem '" + s + "' is not lowercase");
        }
    }
}

KeywordSet KeywordSet::defaults() {
    return KeywordSet({"bug",      "fix",     "issu",     "error",   "correct", "proper",
                       "deprecat", "broke",   "optimize", "patch",   "solve",   "slow",
                       "obsolete", "vulnerab", "debug",   "perf",    "memory",  "minor",
                       "wart",     "better",  "complex",  "break",   "investigat",
                       "compile",  "defect",  "inconsist", "crash",  "problem", "resol"});
}

void KeywordSet::extend(const std::vector<std::string>& more) {
    KeywordSet checked(more);
    for (const auto& s : checked.stems_) {
        if (std::find(stems_.begin(), stems_.end(), s) == stems_.end()) stems_.push_back(s);
    }
}

Classification classify_message(std::string_view message, const KeywordSet& keywords) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : message) {
        auto c = static_cast<unsigned char>(ch);
        if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
        if (is_token_char(c)) {
            current.push_back(static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));

    Classification out;
    for (const auto& stem : keywords.stems()) {
        bool hit = std::any_of(tokens.begin(), tokens.end(),
                               [&](const std::string& t) { return t.starts_with(stem); });
        if (hit && std::find(out.matched.begin(), out.matched.end(), stem) == out.matched.end())
            out.matched.push_back(stem);
    }
    out.is_bug_fix = !out.matched.empty();
    return out;
}

KeywordSet load_keyword_file(const std::filesystem::path& path, bool extend) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read keyword file " + path.string());
    std::vector<std::string> stems;
    std::string line;
    while (std::getline(in, line)) {
        std::string s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        stems.push_back(std::move(s));
    }
    if (!extend) return KeywordSet(std::move(stems));
    KeywordSet out = KeywordSet::defaults();
    if (!stems.empty()) out.extend(stems);
    return out;
}

}  // namespace beliefs
