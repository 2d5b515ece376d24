#include "beliefs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "beliefs/csv.hpp"

namespace beliefs {

namespace {

/// Pre-period records grouped by file, in path order.
std::map<std::string, std::vector<const ChangeRecord*>> by_file(const ReleaseWindow& w) {
    std::map<std::string, std::vector<const ChangeRecord*>> files;
    for (const auto& r : w.pre_records) files[r.file_path].push_back(&r);
    return files;
}

template <typename Fn>
BeliefVector per_file(Belief belief, const ReleaseWindow& w, const DefectCounts& defects, Fn&& metric) {
    BeliefVector v;
    v.belief = belief;
    for (const auto& [path, recs] : by_file(w)) {
        std::optional<double> x = metric(recs);
        if (!x) continue;
        v.entity_ids.push_back(path);
        v.x.push_back(*x);
        v.y.push_back(defects.of(path));
    }
    return v;
}

}  // namespace

void HcmConfig::validate() const {
    if (period_days < 1) throw ConfigError("period_days must be at least 1");
    if (!(decay_rate > 0.0) || !std::isfinite(decay_rate))
        throw ConfigError("decay_rate must be positive");
}

double normalized_entropy(const std::vector<std::int64_t>& counts) {
    std::int64_t total = 0;
    std::size_t n = 0;
    for (auto c : counts) {
        if (c > 0) {
            total += c;
            ++n;
        }
    }
    if (n <= 1) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c <= 0) continue;
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h / std::log2(static_cast<double>(n));
}

BeliefVector metric_b1_hcm(const ReleaseWindow& w, const DefectCounts& defects, const HcmConfig& cfg) {
    cfg.validate();
    BeliefVector v;
    v.belief = Belief::B1;
    if (w.pre_records.empty()) return v;

    const Timestamp length = w.pre_end - w.pre_start;
    const Timestamp period = static_cast<Timestamp>(cfg.period_days) * kSecondsPerDay;
    const bool halves = length < period;
    const std::size_t periods =
        halves ? 2 : static_cast<std::size_t>((length + period - 1) / period);

    auto period_of = [&](Timestamp t) -> std::size_t {
        Timestamp offset = t - w.pre_start;  // in (0, length]
        std::size_t k = 0;
        if (halves) {
            k = static_cast<double>(offset) <= static_cast<double>(length) / 2.0 ? 0 : 1;
        } else {
            k = static_cast<std::size_t>((offset - 1) / period);
        }
        return std::min(k, periods - 1);
    };

    // changes[j][file] = number of records of file in period j
    std::vector<std::map<std::string, std::int64_t>> changes(periods);
    for (const auto& r : w.pre_records) ++changes[period_of(r.commit_time)][r.file_path];

    std::map<std::string, double> hcm;
    for (std::size_t j = 0; j < periods; ++j) {
        if (changes[j].empty()) continue;
        std::vector<std::int64_t> counts;
        counts.reserve(changes[j].size());
        for (const auto& [_, c] : changes[j]) counts.push_back(c);
        const double entropy = normalized_entropy(counts);
        const double weight = std::exp(-cfg.decay_rate * static_cast<double>(periods - 1 - j));
        for (const auto& [file, _] : changes[j]) hcm[file] += weight * entropy;
    }

    for (const auto& [file, value] : hcm) {
        v.entity_ids.push_back(file);
        v.x.push_back(value);
        v.y.push_back(defects.of(file));
    }
    return v;
}

BeliefVector metric_b2_developers(const ReleaseWindow& w, const DefectCounts& defects) {
    return per_file(Belief::B2, w, defects, [](const auto& recs) -> std::optional<double> {
        std::set<std::string_view> authors;
        for (const auto* r : recs) authors.insert(r->author);
        return static_cast<double>(authors.size());
    });
}

BeliefVector metric_churn(const ReleaseWindow& w, const DefectCounts& defects, ChurnKind kind) {
    Belief b = kind == ChurnKind::Added ? Belief::B3 : Belief::B9;
    return per_file(b, w, defects, [kind](const auto& recs) -> std::optional<double> {
        std::int64_t sum = 0;
        for (const auto* r : recs) sum += kind == ChurnKind::Added ? r->insertions : r->deletions;
        return static_cast<double>(sum);
    });
}

BeliefVector metric_recency(const ReleaseWindow& w, const DefectCounts& defects, bool fixes_only) {
    Belief b = fixes_only ? Belief::B6 : Belief::B4;
    return per_file(b, w, defects, [fixes_only](const auto& recs) -> std::optional<double> {
        std::optional<Timestamp> latest;
        for (const auto* r : recs) {
            if (fixes_only && !r->is_bug_fix) continue;
            if (!latest || r->commit_time > *latest) latest = r->commit_time;
        }
        if (!latest) return std::nullopt;
        return static_cast<double>(*latest);
    });
}

BeliefVector metric_b5_commit_churn(const ReleaseWindow& w, const DefectCounts& defects) {
    struct CommitAgg {
        Timestamp time = 0;
        std::int64_t churn = 0;
        std::int64_t defects = 0;
    };
    std::map<std::string, CommitAgg> commits;
    for (const auto& r : w.pre_records) {
        auto& c = commits[r.commit_id];
        c.time = r.commit_time;
        c.churn += r.churn();
        c.defects += defects.of(r.file_path);
    }
    std::vector<std::pair<const std::string*, const CommitAgg*>> order;
    order.reserve(commits.size());
    for (const auto& [id, agg] : commits) order.emplace_back(&id, &agg);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second->time, *a.first) < std::tie(b.second->time, *b.first);
    });

    BeliefVector v;
    v.belief = Belief::B5;
    for (const auto& [id, agg] : order) {
        v.entity_ids.push_back(*id);
        v.x.push_back(static_cast<double>(agg->churn));
        v.y.push_back(agg->defects);
    }
    return v;
}

BeliefVector metric_counts(const ReleaseWindow& w, const DefectCounts& defects, bool fixes_only) {
    Belief b = fixes_only ? Belief::B7 : Belief::B8;
    return per_file(b, w, defects, [fixes_only](const auto& recs) -> std::optional<double> {
        auto n = std::count_if(recs.begin(), recs.end(),
                               [&](const ChangeRecord* r) { return !fixes_only || r->is_bug_fix; });
        return static_cast<double>(n);
    });
}

BeliefVector metric_b10_minor_share(const ReleaseWindow& w, const DefectCounts& defects) {
    return per_file(Belief::B10, w, defects, [](const auto& recs) -> std::optional<double> {
        std::map<std::string_view, std::int64_t> churn_by_author;
        std::int64_t total = 0;
        for (const auto* r : recs) {
            churn_by_author[r->author] += r->churn();
            total += r->churn();
        }
        if (total == 0) return 0.0;
        std::size_t minors = 0;
        for (const auto& [_, c] : churn_by_author) {
            // share < 5%  <=>  20 * churn < total
            if (20 * c < total) ++minors;
        }
        return 100.0 * static_cast<double>(minors) / static_cast<double>(churn_by_author.size());
    });
}

std::vector<BeliefVector> compute_all(const ReleaseWindow& w, const DefectCounts& defects,
                                      const HcmConfig& cfg) {
    std::vector<BeliefVector> out;
    out.reserve(kAllBeliefs.size());
    out.push_back(metric_b1_hcm(w, defects, cfg));
    out.push_back(metric_b2_developers(w, defects));
    out.push_back(metric_churn(w, defects, ChurnKind::Added));
    out.push_back(metric_recency(w, defects, false));
    out.push_back(metric_b5_commit_churn(w, defects));
    out.push_back(metric_recency(w, defects, true));
    out.push_back(metric_counts(w, defects, true));
    out.push_back(metric_counts(w, defects, false));
    out.push_back(metric_churn(w, defects, ChurnKind::Removed));
    out.push_back(metric_b10_minor_share(w, defects));
    return out;
}

void write_vectors_csv(std::ostream& out, const std::vector<BeliefVector>& vectors) {
    csv::write_row(out, {"belief_id", "entity_id", "x", "y"});
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            csv::write_row(out, {std::string(belief_name(v.belief)), v.entity_ids[i],
                                 csv::number(v.x[i]), std::to_string(v.y[i])});
        }
    }
}

}  // namespace beliefs
