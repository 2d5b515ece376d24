#include "beliefs/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "beliefs/process.hpp"

namespace beliefs {

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

std::string normalize_author(std::string_view name, std::string_view email) {
    std::string_view src = email.empty() ? name : email;
    std::string out(src);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

std::vector<std::string> git_args(const std::filesystem::path& repo,
                                  std::initializer_list<std::string> rest) {
    std::vector<std::string> args{"git", "-C", repo.string(), "-c", "core.quotePath=false"};
    args.insert(args.end(), rest);
    return args;
}

void require_repository(const std::filesystem::path& repo) {
    std::error_code ec;
    if (!std::filesystem::is_directory(repo, ec))
        throw ConfigError("not a readable directory: " + repo.string());
    auto r = run_process(git_args(repo, {"rev-parse", "--git-dir"}));
    if (r.exit_code != 0) throw ConfigError("not a git repository: " + repo.string());
}

bool has_head(const std::filesystem::path& repo) {
    return run_process(git_args(repo, {"rev-parse", "--verify", "-q", "HEAD"})).exit_code == 0;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

const std::vector<std::string>& default_extensions() {
    static const std::vector<std::string> kExtensions = {
        "py", "java", "rb",   "c",   "cpp", "h",   "php", "sh",  "cs", "scss", "html",
        "scala", "js", "css", "clj", "ctp", "erb", "go",  "haml", "hs", "sql"};
    return kExtensions;
}

bool is_source_file(std::string_view path, const std::set<std::string>& extensions) {
    std::string lowered(path);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), lower);
    if (lowered.find("test") != std::string::npos) return false;

    auto slash = lowered.find_last_of("/\\");
    std::string_view name = lowered;
    if (slash != std::string::npos) name = name.substr(slash + 1);
    auto dot = name.rfind('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == name.size()) return false;
    return extensions.contains(std::string(name.substr(dot + 1)));
}

SourceFilter::SourceFilter() : SourceFilter(default_extensions()) {}

SourceFilter::SourceFilter(const std::vector<std::string>& extensions) {
    for (auto e : extensions) {
        if (!e.empty() && e.front() == '.') e.erase(0, 1);
        std::transform(e.begin(), e.end(), e.begin(), lower);
        if (!e.empty()) extensions_.insert(e);
    }
    if (extensions_.empty()) throw ConfigError("extension set is empty");
}

// --- log parsing -----------------------------------------------------------

std::string_view LogParser::log_format() {
    // RS, then hash, committer time, author name, author email, raw body, each
    // terminated by US.
    return "--format=%x1e%H%x1f%ct%x1f%an%x1f%ae%x1f%B%x1f";
}

void LogParser::feed(std::string_view chunk) {
    pending_.append(chunk);
    // Everything before the last RS is a complete commit.
    auto last = pending_.rfind(kRecordSep);
    if (last == std::string::npos || last == 0) return;
    std::string_view done(pending_.data(), last);
    std::size_t start = 0;
    while (start < done.size()) {
        auto next = done.find(kRecordSep, start + 1);
        if (next == std::string_view::npos) next = done.size();
        if (done[start] == kRecordSep) parse_commit(done.substr(start + 1, next - start - 1));
        start = next;
    }
    pending_.erase(0, last);
}

History LogParser::finish() {
    if (!pending_.empty() && pending_.front() == kRecordSep)
        parse_commit(std::string_view(pending_).substr(1));
    pending_.clear();
    return std::move(history_);
}

void LogParser::parse_commit(std::string_view chunk) {
    // Header: hash US time US name US email US body US
    std::size_t pos = 0;
    std::string_view fields[4];
    for (auto& f : fields) {
        auto sep = chunk.find(kFieldSep, pos);
        if (sep == std::string_view::npos) {
            ++history_.stats.warnings;
            return;
        }
        f = chunk.substr(pos, sep - pos);
        pos = sep + 1;
    }
    auto body_end = chunk.rfind(kFieldSep);
    if (body_end == std::string_view::npos || body_end < pos) {
        ++history_.stats.warnings;
        return;
    }
    std::string_view body = chunk.substr(pos, body_end - pos);
    std::string_view rest = chunk.substr(body_end + 1);

    Timestamp time = 0;
    if (fields[0].empty() || !parse_int(fields[1], time) || time <= 0) {
        ++history_.stats.warnings;
        return;
    }

    ++history_.stats.commits;
    const std::string commit_id(fields[0]);
    const std::string author = normalize_author(fields[2], fields[3]);
    const bool is_fix = classify_message(body, keywords_).is_bug_fix;

    // Numstat entries are NUL-terminated: "ins\tdel\tpath" or, for renames,
    // "ins\tdel\t" followed by old and new path tokens.
    auto tokens = split(rest, '\0');
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string_view tok = tokens[i];
        while (!tok.empty() && (tok.front() == '\n' || tok.front() == '\r')) tok.remove_prefix(1);
        if (tok.empty()) continue;

        auto t1 = tok.find('\t');
        auto t2 = t1 == std::string_view::npos ? t1 : tok.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) {
            ++history_.stats.warnings;
            continue;
        }
        std::string_view ins_s = tok.substr(0, t1);
        std::string_view del_s = tok.substr(t1 + 1, t2 - t1 - 1);
        std::string_view path = tok.substr(t2 + 1);

        std::int64_t ins = 0, del = 0;
        bool binary = ins_s == "-" && del_s == "-";
        if (!binary && (!parse_int(ins_s, ins) || !parse_int(del_s, del) || ins < 0 || del < 0)) {
            ++history_.stats.warnings;
            continue;
        }

        if (path.empty()) {
            if (i + 2 >= tokens.size()) {
                ++history_.stats.warnings;
                break;
            }
            std::string_view from = tokens[i + 1];
            std::string_view to = tokens[i + 2];
            i += 2;
            renames_.push_back({commit_id, std::string(from), std::string(to)});
            path = to;
        }

        ChangeRecord rec{commit_id, time, author, std::string(path), ins, del, is_fix};
        history_.stats.insertions += ins;
        history_.stats.deletions += del;
        history_.records.push_back(std::move(rec));
    }
    history_.stats.records = history_.records.size();
}

void apply_rename_following(std::vector<ChangeRecord>& records,
                            const std::vector<LogParser::Rename>& renames) {
    std::unordered_map<std::string, std::vector<const LogParser::Rename*>> by_commit;
    for (const auto& r : renames) by_commit[r.commit_id].push_back(&r);

    std::unordered_map<std::string, std::string> alias;
    auto resolve = [&](const std::string& p) {
        std::string cur = p;
        std::unordered_set<std::string> seen;
        for (auto it = alias.find(cur); it != alias.end(); it = alias.find(cur)) {
            if (!seen.insert(cur).second) break;
            cur = it->second;
        }
        return cur;
    };

    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].commit_id == records[i].commit_id) ++j;
        for (std::size_t k = i; k < j; ++k) records[k].file_path = resolve(records[k].file_path);
        if (auto it = by_commit.find(records[i].commit_id); it != by_commit.end()) {
            for (const auto* r : it->second) {
                if (r->from != r->to) alias[r->from] = resolve(r->to);
            }
        }
        i = j;
    }

    // Merge records that now share a (commit, path).
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::vector<ChangeRecord> merged;
    merged.reserve(records.size());
    for (auto& r : records) {
        auto key = std::make_pair(r.commit_id, r.file_path);
        if (auto it = index.find(key); it != index.end()) {
            merged[it->second].insertions += r.insertions;
            merged[it->second].deletions += r.deletions;
        } else {
            index.emplace(std::move(key), merged.size());
            merged.push_back(std::move(r));
        }
    }
    records = std::move(merged);
}

History extract_history(const std::filesystem::path& repo, const HistoryOptions& options,
                        const KeywordSet& keywords) {
    require_repository(repo);
    if (!has_head(repo)) return {};

    std::vector<std::string> args = git_args(repo, {"log", "--no-merges", "--numstat", "-z",
                                                    std::string(LogParser::log_format())});
    if (options.first_parent) args.push_back("--first-parent");
    args.push_back(options.follow_renames ? "-M" : "--no-renames");
    args.push_back("HEAD");

    LogParser parser(keywords);
    int rc = run_process_streaming(args, [&](std::string_view s) { parser.feed(s); });
    if (rc != 0) throw ConfigError("git log failed in " + repo.string());

    History history = parser.finish();
    if (options.follow_renames) {
        apply_rename_following(history.records, parser.renames());
        history.stats.records = history.records.size();
    }

    std::sort(history.records.begin(), history.records.end(),
              [](const ChangeRecord& a, const ChangeRecord& b) {
                  return std::tie(a.commit_time, a.commit_id, a.file_path) <
                         std::tie(b.commit_time, b.commit_id, b.file_path);
              });
    return history;
}

// --- releases --------------------------------------------------------------

void assign_ordinals(std::vector<Release>& releases) {
    std::sort(releases.begin(), releases.end(), [](const Release& a, const Release& b) {
        return std::tie(a.release_time, a.tag_name) < std::tie(b.release_time, b.tag_name);
    });
    for (std::size_t i = 0; i < releases.size(); ++i) releases[i].ordinal = static_cast<int>(i + 1);
}

std::vector<Release> extract_releases(const std::filesystem::path& repo) {
    require_repository(repo);
    auto r = run_process(git_args(
        repo, {"for-each-ref", "refs/tags",
               "--format=%(refname:strip=2)%00%(objecttype)%00%(committerdate:raw)%00%(*objecttype)%00%(*committerdate:raw)"}));
    if (r.exit_code != 0) throw ConfigError("git for-each-ref failed in " + repo.string());

    auto raw_seconds = [](std::string_view raw, Timestamp& out) {
        auto sp = raw.find(' ');
        return parse_int(raw.substr(0, sp), out);
    };

    std::vector<Release> releases;
    for (auto line : split(r.output, '\n')) {
        if (line.empty()) continue;
        auto f = split(line, '\0');
        if (f.size() != 5) continue;
        Release rel;
        rel.tag_name = std::string(f[0]);
        Timestamp t = 0;
        bool ok = false;
        if (f[1] == "commit") {
            ok = raw_seconds(f[2], t);
        } else if (f[1] == "tag" && f[3] == "commit") {
            ok = raw_seconds(f[4], t);
        } else if (f[1] == "tag") {
            // Tag of a tag: peel fully.
            auto peeled = run_process(
                git_args(repo, {"show", "-s", "--format=%ct", rel.tag_name + "^{commit}"}));
            std::string_view out = peeled.output;
            while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.remove_suffix(1);
            ok = peeled.exit_code == 0 && parse_int(out, t);
        }
        if (!ok || t <= 0) continue;  // tags on trees or blobs carry no commit time
        rel.release_time = t;
        releases.push_back(std::move(rel));
    }
    assign_ordinals(releases);
    return releases;
}

// --- summary and sanity checks --------------------------------------------

ProjectSummary summarize(std::span<const ChangeRecord> records, std::span<const Release> releases) {
    ProjectSummary s;
    std::unordered_set<std::string> commits, fixes, authors;
    Timestamp first = 0, last = 0;
    for (const auto& r : records) {
        commits.insert(r.commit_id);
        if (r.is_bug_fix) fixes.insert(r.commit_id);
        authors.insert(r.author);
        if (first == 0 || r.commit_time < first) first = r.commit_time;
        if (r.commit_time > last) last = r.commit_time;
    }
    s.commit_count = commits.size();
    s.bug_fix_fraction = commits.empty() ? 0.0
                                         : static_cast<double>(fixes.size()) /
                                               static_cast<double>(commits.size());
    s.release_count = releases.size();
    s.developer_count = authors.size();
    s.active_years = static_cast<double>(last - first) / (365.25 * kSecondsPerDay);
    return s;
}

SanityVerdict apply_sanity_checks(const ProjectSummary& s, const SanityThresholds& t) {
    SanityVerdict v;
    auto fail = [&](std::string rule) {
        v.pass = false;
        v.violations.push_back(std::move(rule));
    };
    if (s.commit_count < t.min_commits) fail(fmt::format("commits < {}", t.min_commits));
    if (s.bug_fix_fraction < t.min_bug_fix_fraction)
        fail(fmt::format("bug_fix_fraction < {}", t.min_bug_fix_fraction));
    if (s.release_count < t.min_releases) fail(fmt::format("releases < {}", t.min_releases));
    if (s.developer_count < t.min_developers)
        fail(fmt::format("developers < {}", t.min_developers));
    if (s.active_years < t.min_active_years)
        fail(fmt::format("active_years < {}", t.min_active_years));
    return v;
}

}  // namespace beliefs
