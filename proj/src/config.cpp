#include "beliefs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace beliefs {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const KeyValue& kv, std::string_view expected) {
    throw ConfigError(fmt::format("line {}: {}: expected {}, got '{}'", kv.line, kv.key, expected,
                                  kv.value));
}

std::size_t parse_count(const KeyValue& kv) {
    long long v = parse_int(kv);
    if (v < 1) bad_value(kv, "a positive integer");
    return static_cast<std::size_t>(v);
}

double parse_positive(const KeyValue& kv) {
    double v = parse_real(kv);
    if (!(v > 0.0)) bad_value(kv, "a positive number");
    return v;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::istream& in, const std::string& source) {
    std::vector<KeyValue> out;
    std::set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string text = trim(raw);
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("{}: line {}: expected 'key = value'", source, line));
        KeyValue kv{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
        if (kv.key.empty()) throw ConfigError(fmt::format("{}: line {}: empty key", source, line));
        if (!seen.insert(kv.key).second)
            throw ConfigError(fmt::format("{}: line {}: duplicate key '{}'", source, line, kv.key));
        out.push_back(std::move(kv));
    }
    return out;
}

std::vector<KeyValue> read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    return parse_key_values(in, path.string());
}

bool parse_bool(const KeyValue& kv) {
    const std::string& v = kv.value;
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    bad_value(kv, "true or false");
}

long long parse_int(const KeyValue& kv) {
    long long v = 0;
    const char* end = kv.value.data() + kv.value.size();
    auto [p, ec] = std::from_chars(kv.value.data(), end, v);
    if (kv.value.empty() || ec != std::errc() || p != end) bad_value(kv, "an integer");
    return v;
}

double parse_real(const KeyValue& kv) {
    double v = 0;
    const char* end = kv.value.data() + kv.value.size();
    auto [p, ec] = std::from_chars(kv.value.data(), end, v);
    if (kv.value.empty() || ec != std::errc() || p != end || !std::isfinite(v))
        bad_value(kv, "a number");
    return v;
}

std::vector<std::string> parse_list(const KeyValue& kv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : kv.value + ",") {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void Config::apply(const KeyValue& kv) {
    const std::string& k = kv.key;
    if (k == "extensions") {
        extensions = parse_list(kv);
        if (extensions.empty()) bad_value(kv, "at least one extension");
    } else if (k == "keyword_file") {
        keyword_file = kv.value;
    } else if (k == "extend_keywords") {
        extend_keywords = parse_bool(kv);
    } else if (k == "post_days") {
        post_days = static_cast<int>(parse_count(kv));
    } else if (k == "period_days") {
        period_days = static_cast<int>(parse_count(kv));
    } else if (k == "decay_rate") {
        decay_rate = parse_positive(kv);
    } else if (k == "min_files") {
        min_files = parse_count(kv);
    } else if (k == "min_observations") {
        min_observations = parse_count(kv);
    } else if (k == "alpha") {
        alpha = parse_real(kv);
    } else if (k == "support_threshold") {
        support_threshold = parse_positive(kv);
    } else if (k == "trend_threshold") {
        trend_threshold = parse_positive(kv);
    } else if (k == "bootstrap_iterations") {
        bootstrap_iterations = parse_count(kv);
    } else if (k == "a12_threshold") {
        a12_threshold = parse_positive(kv);
    } else if (k == "seed") {
        long long v = parse_int(kv);
        if (v < 0) bad_value(kv, "a nonnegative integer");
        seed = static_cast<std::uint64_t>(v);
    } else if (k == "replication_mode") {
        replication_mode = parse_bool(kv);
    } else if (k == "all_commits") {
        all_commits = parse_bool(kv);
    } else if (k == "follow_renames") {
        follow_renames = parse_bool(kv);
    } else if (k == "exact_p") {
        exact_p = parse_bool(kv);
    } else {
        throw ConfigError(fmt::format("line {}: unknown key '{}'", kv.line, k));
    }
}

void Config::validate() const {
    if (extensions.empty()) throw ConfigError("extensions: empty list");
    if (post_days < 1) throw ConfigError("post_days must be positive");
    if (period_days < 1) throw ConfigError("period_days must be positive");
    if (!(decay_rate > 0.0)) throw ConfigError("decay_rate must be positive");
    if (min_files < 1) throw ConfigError("min_files must be positive");
    // Spearman needs two pairs; the t approximation three.
    if (min_observations < 3) throw ConfigError("min_observations must be at least 3");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
    if (!(support_threshold > 0.0 && support_threshold <= 1.0))
        throw ConfigError("support_threshold must be in (0, 1]");
    if (!(trend_threshold > 0.0 && trend_threshold <= 1.0))
        throw ConfigError("trend_threshold must be in (0, 1]");
    if (bootstrap_iterations < 100) throw ConfigError("bootstrap_iterations must be at least 100");
    if (!(a12_threshold >= 0.5 && a12_threshold <= 1.0))
        throw ConfigError("a12_threshold must be in [0.5, 1]");
}

KeywordSet Config::keywords() const {
    if (keyword_file.empty()) return KeywordSet::defaults();
    return load_keyword_file(keyword_file, extend_keywords);
}

Config load_config(const std::filesystem::path& path) {
    Config cfg;
    for (const auto& kv : read_key_values(path)) {
        try {
            cfg.apply(kv);
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace beliefs
