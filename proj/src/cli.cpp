#include "beliefs/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "beliefs/analysis.hpp"
#include "beliefs/cache.hpp"
#include "beliefs/config.hpp"
#include "beliefs/ingest.hpp"
#include "beliefs/reporting.hpp"
#include "beliefs/synthgen.hpp"

namespace fs = std::filesystem;

namespace beliefs {

namespace {

struct Options {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool all_commits = false;
    bool follow_renames = false;
    std::string keywords;
    bool extend = false;
    bool replication_mode = false;
    bool dump_vectors = false;
    std::string out;
    std::string repo;
    std::string cache_dir;
    std::vector<std::string> assess_dirs;
    std::string scenario;
};

Config effective_config(const Options& o) {
    Config cfg = o.config_file.empty() ? Config{} : load_config(o.config_file);
    if (o.seed) cfg.seed = *o.seed;
    if (o.all_commits) cfg.all_commits = true;
    if (o.follow_renames) cfg.follow_renames = true;
    if (!o.keywords.empty()) cfg.keyword_file = o.keywords;
    if (o.extend) cfg.extend_keywords = true;
    if (o.replication_mode) cfg.replication_mode = true;
    cfg.validate();
    return cfg;
}

template <typename Fn>
auto with_file(const fs::path& path, Fn&& fn) {
    try {
        return fn(path);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

int cmd_mine(const Options& o, std::ostream& out, std::ostream& err) {
    const Config cfg = effective_config(o);
    const KeywordSet keywords = cfg.keywords();
    History history = extract_history(o.repo, cfg.history(), keywords);
    std::vector<Release> releases = extract_releases(o.repo);
    const ProjectSummary s = summarize(history.records, releases);

    out << fmt::format("commits: {}\nrecords: {}\nbug-fix fraction: {:.3f}\nreleases: {}\n"
                       "developers: {}\nactive years: {:.2f}\n",
                       s.commit_count, history.records.size(), s.bug_fix_fraction, s.release_count,
                       s.developer_count, s.active_years);
    if (history.stats.warnings) out << fmt::format("warnings: {}\n", history.stats.warnings);

    const SanityVerdict verdict = apply_sanity_checks(s);
    if (verdict.pass) {
        out << "sanity: pass\n";
    } else {
        for (const auto& v : verdict.violations) err << "sanity: " << v << "\n";
        if (!o.force) {
            err << "sanity checks failed; nothing written (use --force to keep the caches)\n";
            return kExitSanity;
        }
        err << "warning: writing caches despite failed sanity checks\n";
    }
    fs::create_directories(o.out);
    write_history_file(fs::path(o.out) / kHistoryFile, history.records);
    write_releases_file(fs::path(o.out) / kReleasesFile, releases);
    return kExitOk;
}

/// (project name, cache directory) pairs: the directory itself when it holds
/// a history cache, otherwise its subdirectories that do, by name.
std::vector<std::pair<std::string, fs::path>> find_caches(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
    std::vector<std::pair<std::string, fs::path>> found;
    if (fs::exists(dir / kHistoryFile)) {
        const fs::path canonical = fs::weakly_canonical(dir);
        found.emplace_back(canonical.filename().string(), dir);
        return found;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / kHistoryFile))
            found.emplace_back(entry.path().filename().string(), entry.path());
    }
    std::sort(found.begin(), found.end());
    if (found.empty()) throw ConfigError("no " + std::string(kHistoryFile) + " under " + dir.string());
    return found;
}

int cmd_assess(const Options& o, std::ostream& out, std::ostream& err) {
    const Config cfg = effective_config(o);
    std::vector<ProjectAssessment> projects;
    for (const auto& [name, dir] : find_caches(o.cache_dir)) {
        auto records = with_file(dir / kHistoryFile, [](const fs::path& p) { return read_history_file(p); });
        auto releases = with_file(dir / kReleasesFile, [](const fs::path& p) { return read_releases_file(p); });
        ProjectAssessment a = assess_project(name, records, releases, cfg, o.dump_vectors);

        const auto qualified = std::count_if(a.windows.begin(), a.windows.end(),
                                             [](const WindowInfo& w) { return w.qualified; });
        std::size_t significant = 0;
        for (const auto& p : a.populations) significant += p.scores.size();
        out << fmt::format("{}: {} windows, {} qualified, {} significant scores\n", name, a.windows.size(),
                           qualified, significant);
        if (qualified == 0) err << fmt::format("notice: {}: no qualified windows; populations are empty\n", name);

        if (o.dump_vectors) {
            const fs::path vdir = fs::path(o.out) / "vectors" / name;
            fs::create_directories(vdir);
            for (const auto& [ordinal, vectors] : a.vectors) {
                std::ofstream f(vdir / fmt::format("release_{}.csv", ordinal), std::ios::binary);
                if (!f) throw ConfigError("cannot write " + vdir.string());
                write_vectors_csv(f, vectors);
            }
            a.vectors.clear();
        }
        projects.push_back(std::move(a));
    }
    write_assessments(o.out, projects);
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
    const Config cfg = effective_config(o);
    std::vector<ProjectAssessment> projects;
    std::set<std::string> names;
    for (const auto& dir : o.assess_dirs) {
        for (auto& p : read_assessments(dir)) {
            if (!names.insert(p.project).second)
                throw DataError(fmt::format("{}: project '{}' appears in more than one input", dir, p.project));
            projects.push_back(std::move(p));
        }
    }
    const DatasetAnalysis analysis = analyze_dataset(projects, cfg);
    write_report(o.out, analysis);
    out << fmt::format("report for {} project(s) written to {}\n", projects.size(), o.out);
    return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
    const ScenarioSpec spec = load_scenario(o.scenario);
    const SyntheticHistory h = generate(spec);
    fs::create_directories(o.out);
    write_history_file(fs::path(o.out) / kHistoryFile, h.records);
    write_releases_file(fs::path(o.out) / kReleasesFile, h.releases);
    out << fmt::format("records: {}\nreleases: {}\n", h.records.size(), h.releases.size());
    if (h.realized_rho) out << fmt::format("sigma: {}\nrealized median rho: {:.3f}\n", h.sigma, *h.realized_rho);
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_file, "key = value settings file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "random seed for bootstrap resampling");
    cmd->add_option("--out", o.out, "output directory")->required();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Assess defect-prediction beliefs against a project's git history", "beliefs"};
    app.require_subcommand(1, 1);
    Options o;

    auto* mine = app.add_subcommand("mine", "extract change records and releases from a git repository");
    mine->add_option("repo", o.repo, "path to a local clone")->required();
    add_common(mine, o);
    mine->add_flag("--force", o.force, "write caches even when sanity checks fail");
    mine->add_flag("--all-commits", o.all_commits, "walk all non-merge commits, not only first-parent history");
    mine->add_flag("--follow-renames", o.follow_renames, "carry history across file renames");
    mine->add_option("--keywords", o.keywords, "bug-fix keyword file, one stem per line")
        ->check(CLI::ExistingFile);
    mine->add_flag("--extend", o.extend, "add the keyword file to the built-in stems instead of replacing them");

    auto* assess = app.add_subcommand("assess", "score the ten beliefs for every release window");
    assess->add_option("cache_dir", o.cache_dir, "cache directory, or a directory of per-project caches")
        ->required();
    add_common(assess, o);
    assess->add_flag("--dump-vectors", o.dump_vectors, "also write each window's metric vectors");

    auto* report = app.add_subcommand("report", "rank, aggregate and render assessment results");
    report->add_option("assess_dirs", o.assess_dirs, "one or more assess output directories")->required();
    add_common(report, o);
    report->add_flag("--replication-mode", o.replication_mode, "use 18 files as the small/medium size boundary");

    auto* synth = app.add_subcommand("synth", "generate a synthetic history from a scenario file");
    synth->add_option("scenario", o.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    synth->add_option("--out", o.out, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*mine) return cmd_mine(o, out, err);
        if (*assess) return cmd_assess(o, out, err);
        if (*report) return cmd_report(o, out, err);
        if (*synth) return cmd_synth(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace beliefs
