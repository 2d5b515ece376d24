#include "beliefs/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "beliefs/labeling.hpp"
#include "beliefs/metrics.hpp"
#include "beliefs/random.hpp"
#include "beliefs/stats.hpp"

namespace beliefs {

namespace {

constexpr std::array<std::string_view, 4> kFeatureVerbs = {"Add", "Implement", "Extend", "Update"};
constexpr std::array<std::string_view, 6> kNouns = {"parser",   "widget",       "scheduler",
                                                    "exporter", "config loader", "cache layer"};
// One word per default stem.
constexpr std::array<std::string_view, 29> kFixWords = {
    "bug",        "fix",       "issue",       "error",   "correct",  "properly", "deprecated",
    "broken",     "optimize",  "patch",       "solve",   "slow",     "obsolete", "vulnerability",
    "debug",      "performance", "memory",    "minor",   "wart",     "better",   "complexity",
    "breaking",   "investigate", "compile",   "defect",  "inconsistent", "crash", "problem",
    "resolve"};

constexpr int kFilePool = 4;  // pool holds kFilePool * files_max names
// Noisy couplings bin the defect ranks into this many counts (0..7); keeps
// fix commits few while leaving enough distinct values for rank correlation.
constexpr std::int64_t kDefectLevels = 8;

std::string feature_message(Rng& rng) {
    return fmt::format("{} {}", kFeatureVerbs[rng.below(kFeatureVerbs.size())],
                       kNouns[rng.below(kNouns.size())]);
}

std::string fix_message(Rng& rng) {
    return fmt::format("{} in {}", kFixWords[rng.below(kFixWords.size())],
                       kNouns[rng.below(kNouns.size())]);
}

std::int64_t line_count(Rng& rng, double log_mean) {
    const double v = std::exp(log_mean + 1.1 * rng.normal());
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(v), 0, 5000);
}

BeliefVector planted_metric(Belief b, const ReleaseWindow& w, const DefectCounts& d) {
    switch (b) {
        case Belief::B2: return metric_b2_developers(w, d);
        case Belief::B3: return metric_churn(w, d, ChurnKind::Added);
        case Belief::B8: return metric_counts(w, d, false);
        case Belief::B9: return metric_churn(w, d, ChurnKind::Removed);
        default: break;
    }
    throw ConfigError(fmt::format("planted_belief: {} cannot be planted", belief_name(b)));
}

/// 0-based position of each value in ascending order; ties broken by index.
std::vector<std::int64_t> ordinal_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<std::int64_t> r(v.size());
    for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = static_cast<std::int64_t>(i);
    return r;
}

std::vector<std::int64_t> dense_ranks(const std::vector<double>& v) {
    std::vector<double> distinct(v);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::int64_t> r;
    r.reserve(v.size());
    for (double x : v)
        r.push_back(std::lower_bound(distinct.begin(), distinct.end(), x) - distinct.begin());
    return r;
}

class Builder {
public:
    Builder(const ScenarioSpec& spec) : spec_(spec), keywords_(KeywordSet::defaults()) {
        for (int i = 0; i < spec.authors; ++i) authors_.push_back(fmt::format("dev{:03}@example.org", i));
    }

    void commit(std::vector<ChangeRecord>& out, Timestamp time, const std::string& message,
                const std::vector<std::string>& files, Rng& rng, bool small) {
        const std::string id = fmt::format("{:040x}", ++counter_);
        const std::string& author = authors_[rng.below(authors_.size())];
        const bool fix = classify_message(message, keywords_).is_bug_fix;
        for (const auto& f : files) {
            ChangeRecord r;
            r.commit_id = id;
            r.commit_time = time;
            r.author = author;
            r.file_path = f;
            if (small) {
                r.insertions = rng.between(1, 6);
                r.deletions = rng.between(0, 6);
            } else {
                r.insertions = line_count(rng, 3.0);
                r.deletions = line_count(rng, 2.0);
            }
            r.is_bug_fix = fix;
            out.push_back(std::move(r));
        }
    }

    const std::vector<std::string>& authors() const { return authors_; }

private:
    const ScenarioSpec& spec_;
    KeywordSet keywords_;
    std::vector<std::string> authors_;
    std::uint64_t counter_ = 0;
};

void sort_records(std::vector<ChangeRecord>& records) {
    std::sort(records.begin(), records.end(), [](const ChangeRecord& a, const ChangeRecord& b) {
        return std::tie(a.commit_time, a.commit_id, a.file_path) <
               std::tie(b.commit_time, b.commit_id, b.file_path);
    });
}

}  // namespace

void ScenarioSpec::validate() const {
    auto require = [](bool ok, std::string_view field, std::string_view what) {
        if (!ok) throw ConfigError(fmt::format("{}: {}", field, what));
    };
    require(releases >= 2, "releases", "must be at least 2");
    require(files_min >= 1, "files_min", "must be at least 1");
    require(files_max >= files_min, "files_max", "must be at least files_min");
    require(commits_min >= 1, "commits_min", "must be at least 1");
    require(commits_max >= commits_min, "commits_max", "must be at least commits_min");
    require(authors >= 1, "authors", "must be at least 1");
    require(planted_strength >= 0.0 && planted_strength <= 1.0, "planted_strength", "must be in [0, 1]");
    require(bug_fix_rate >= 0.0 && bug_fix_rate <= 1.0, "bug_fix_rate", "must be in [0, 1]");
    require(post_days >= 1, "post_days", "must be at least 1");
    require(release_spacing_days > post_days, "release_spacing_days", "must exceed post_days");
    require(start_time > 0, "start_time", "must be positive");
    if (planted_belief) {
        const auto& ok = plantable_beliefs();
        require(std::find(ok.begin(), ok.end(), *planted_belief) != ok.end(), "planted_belief",
                "supported values are B3, B9, B2, B8, none");
    }
}

const std::vector<Belief>& plantable_beliefs() {
    static const std::vector<Belief> kBeliefs = {Belief::B3, Belief::B9, Belief::B2, Belief::B8};
    return kBeliefs;
}

ScenarioSpec parse_scenario(const std::vector<KeyValue>& entries) {
    ScenarioSpec s;
    auto as_int = [](const KeyValue& kv) {
        long long v = parse_int(kv);
        if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(kv.key + ": out of range");
        return static_cast<int>(v);
    };
    for (const auto& kv : entries) {
        const std::string& k = kv.key;
        if (k == "releases") s.releases = as_int(kv);
        else if (k == "files_min") s.files_min = as_int(kv);
        else if (k == "files_max") s.files_max = as_int(kv);
        else if (k == "commits_min") s.commits_min = as_int(kv);
        else if (k == "commits_max") s.commits_max = as_int(kv);
        else if (k == "authors") s.authors = as_int(kv);
        else if (k == "planted_strength") s.planted_strength = parse_real(kv);
        else if (k == "bug_fix_rate") s.bug_fix_rate = parse_real(kv);
        else if (k == "release_spacing_days") s.release_spacing_days = as_int(kv);
        else if (k == "post_days") s.post_days = as_int(kv);
        else if (k == "start_time") s.start_time = parse_int(kv);
        else if (k == "noise_seed") {
            long long v = parse_int(kv);
            if (v < 0) throw ConfigError("noise_seed: must be nonnegative");
            s.noise_seed = static_cast<std::uint64_t>(v);
        } else if (k == "planted_belief") {
            if (kv.value == "none") {
                s.planted_belief.reset();
            } else {
                auto b = parse_belief(kv.value);
                if (!b) throw ConfigError("planted_belief: supported values are B3, B9, B2, B8, none");
                s.planted_belief = *b;
            }
        } else {
            throw ConfigError(fmt::format("line {}: unknown scenario field '{}'", kv.line, k));
        }
    }
    s.validate();
    return s;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    try {
        return parse_scenario(read_key_values(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

SyntheticHistory generate_with_noise(const ScenarioSpec& spec, double sigma) {
    spec.validate();
    Builder builder(spec);
    const Timestamp spacing = static_cast<Timestamp>(spec.release_spacing_days) * kSecondsPerDay;
    const Timestamp horizon = static_cast<Timestamp>(spec.post_days) * kSecondsPerDay;
    const bool planted = spec.planted_belief && spec.planted_strength > 0.0;

    std::vector<std::string> pool;
    for (int i = 0; i < kFilePool * spec.files_max; ++i) pool.push_back(fmt::format("src/f{:04}.c", i));

    SyntheticHistory h;
    h.sigma = planted ? sigma : 0.0;
    // Records per period k: (t_{k-1}, t_k]; period R + 1 holds the last horizon.
    std::vector<std::vector<ChangeRecord>> periods(static_cast<std::size_t>(spec.releases) + 2);

    std::set<std::string> carry;  // files fixed after the previous release
    for (int k = 1; k <= spec.releases; ++k) {
        const Timestamp begin = spec.start_time + (k - 1) * spacing;
        const Timestamp end = begin + spacing;
        auto& period = periods[static_cast<std::size_t>(k)];

        // Feature commits; inside the previous release's horizon they never look like fixes.
        Rng rng(mix_seed(spec.noise_seed, 3 * static_cast<std::uint64_t>(k)));
        // The window already holds the files fixed after the previous release;
        // top it up with fresh files to the drawn size, and revisit half of the old ones.
        const auto target = static_cast<std::size_t>(rng.between(spec.files_min, spec.files_max));
        const auto n_commits = static_cast<std::size_t>(rng.between(spec.commits_min, spec.commits_max));
        std::vector<std::string> fresh;
        for (const auto& f : pool) {
            if (!carry.count(f)) fresh.push_back(f);
        }
        const std::size_t n_fresh = std::max<std::size_t>(target > carry.size() ? target - carry.size() : 0, 1);
        for (std::size_t i = 0; i < n_fresh; ++i) std::swap(fresh[i], fresh[i + rng.below(fresh.size() - i)]);
        fresh.resize(n_fresh);
        std::vector<std::string> old(carry.begin(), carry.end());
        for (std::size_t i = 0; i < old.size() / 2; ++i) std::swap(old[i], old[i + rng.below(old.size() - i)]);
        old.resize(old.size() / 2);
        std::vector<std::string> files = fresh;
        files.insert(files.end(), old.begin(), old.end());
        std::sort(files.begin(), files.end());
        const std::size_t n_files = files.size();

        std::vector<std::vector<std::string>> touches(n_commits);
        std::set<std::string> touched;
        for (auto& t : touches) {
            const auto width = static_cast<std::size_t>(rng.between(1, std::min<std::int64_t>(3, static_cast<std::int64_t>(n_files))));
            std::set<std::string> pick;
            while (pick.size() < width) pick.insert(files[rng.below(n_files)]);
            t.assign(pick.begin(), pick.end());
            touched.insert(pick.begin(), pick.end());
        }
        for (const auto& f : files) {
            if (touched.count(f)) continue;
            auto& t = touches[rng.below(n_commits)];
            t.insert(std::upper_bound(t.begin(), t.end(), f), f);
        }
        for (const auto& t : touches) {
            const Timestamp time = begin + 1 + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(spacing)));
            const bool in_horizon = k > 1 && time <= begin + horizon;
            const bool fix = !in_horizon && rng.bernoulli(spec.bug_fix_rate);
            builder.commit(period, time, fix ? fix_message(rng) : feature_message(rng), t, rng, false);
        }
        if (k < 2) continue;

        // Release k: couple post-release fixes to the planted metric of its window.
        ReleaseWindow w;
        w.release = {fmt::format("v{}.0", k), end, k};
        w.pre_start = begin;
        w.pre_end = end;
        w.post_end = end + horizon;
        w.pre_records = period;
        sort_records(w.pre_records);
        BeliefVector v = planted
                             ? planted_metric(*spec.planted_belief, w, DefectCounts{})
                             : metric_churn(w, DefectCounts{}, ChurnKind::Added);  // only for the entity list
        const std::size_t n = v.size();
        Rng noise(mix_seed(spec.noise_seed, 3 * static_cast<std::uint64_t>(k) + 1));
        std::vector<double> eps(n);
        for (auto& e : eps) e = noise.normal();

        std::vector<std::int64_t> y;
        if (planted && sigma == 0.0) {
            y = dense_ranks(v.x);
        } else {
            std::vector<double> z(eps);
            if (planted) {
                auto ranks = rank_with_ties(v.x);
                for (std::size_t i = 0; i < n; ++i)
                    z[i] = (ranks[i] - 0.5) / static_cast<double>(n) + sigma * eps[i];
            }
            y = ordinal_ranks(z);
            for (auto& level : y) level = level * kDefectLevels / static_cast<std::int64_t>(n);
        }

        Rng fixes(mix_seed(spec.noise_seed, 3 * static_cast<std::uint64_t>(k) + 2));
        const std::int64_t max_y = y.empty() ? 0 : *std::max_element(y.begin(), y.end());
        carry.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] > 0) carry.insert(v.entity_ids[i]);
        }
        auto& next = periods[static_cast<std::size_t>(k) + 1];
        for (std::int64_t j = 1; j <= max_y; ++j) {
            std::vector<std::string> targets;
            for (std::size_t i = 0; i < n; ++i) {
                if (y[i] >= j) targets.push_back(v.entity_ids[i]);
            }
            const Timestamp time = end + 1 + static_cast<Timestamp>(fixes.below(static_cast<std::uint64_t>(horizon)));
            builder.commit(next, time, fix_message(fixes), targets, fixes, true);
        }
        h.releases.push_back(w.release);
    }

    // First release tag, and one commit past the last horizon so no window is censored.
    const Timestamp first_release = spec.start_time + spacing;
    h.releases.insert(h.releases.begin(), Release{"v1.0", first_release, 1});
    {
        Rng tail(mix_seed(spec.noise_seed, 3 * static_cast<std::uint64_t>(spec.releases) + 3));
        const Timestamp last = spec.start_time + spec.releases * spacing + horizon + kSecondsPerDay;
        builder.commit(periods.back(), last, feature_message(tail), {pool.front()}, tail, true);
    }

    for (auto& p : periods) {
        h.records.insert(h.records.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    sort_records(h.records);
    if (planted) {
        h.realized_rho = planted_median_rho(h.records, h.releases, *spec.planted_belief, spec.post_days);
    }
    return h;
}

std::optional<double> planted_median_rho(std::span<const ChangeRecord> records,
                                         std::span<const Release> releases, Belief belief,
                                         int post_days) {
    std::vector<double> rhos;
    for (const auto& w : build_windows(releases, records, post_days)) {
        if (!qualify_window(w)) continue;
        const DefectCounts d = count_post_defects(w, records);
        const BeliefVector v = planted_metric(belief, w, d);
        if (v.size() < 4) continue;
        std::vector<double> y(v.y.begin(), v.y.end());
        rhos.push_back(spearman(v.x, y).rho);
    }
    if (rhos.empty()) return std::nullopt;
    return median(rhos);
}

SyntheticHistory generate(const ScenarioSpec& spec) {
    spec.validate();
    const bool planted = spec.planted_belief && spec.planted_strength > 0.0;
    if (!planted || spec.planted_strength >= 1.0) return generate_with_noise(spec, 0.0);

    const double target = spec.planted_strength;
    auto miss = [&](const SyntheticHistory& h) {
        return h.realized_rho ? std::abs(*h.realized_rho - target) : 2.0;
    };

    SyntheticHistory best = generate_with_noise(spec, 0.0);
    if (!best.realized_rho || *best.realized_rho <= target) return best;

    // Realized rho falls as sigma grows; bracket the target, then bisect.
    double lo = 0.0, hi = 0.25;
    for (int i = 0; i < 12; ++i) {
        SyntheticHistory h = generate_with_noise(spec, hi);
        if (miss(h) < miss(best)) best = h;
        if (!h.realized_rho || *h.realized_rho <= target) break;
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 40 && miss(best) > kCalibrationTarget; ++i) {
        const double mid = 0.5 * (lo + hi);
        SyntheticHistory h = generate_with_noise(spec, mid);
        const auto r = h.realized_rho;
        if (miss(h) < miss(best)) best = std::move(h);
        if (r && *r > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

std::vector<std::string> feature_message_samples() {
    std::vector<std::string> out;
    for (auto v : kFeatureVerbs)
        for (auto n : kNouns) out.push_back(fmt::format("{} {}", v, n));
    return out;
}

std::vector<std::string> fix_message_samples() {
    std::vector<std::string> out;
    for (auto w : kFixWords)
        for (auto n : kNouns) out.push_back(fmt::format("{} in {}", w, n));
    return out;
}

}  // namespace beliefs
