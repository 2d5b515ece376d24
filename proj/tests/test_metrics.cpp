#include <doctest.h>

#include <cmath>
#include <sstream>

#include "beliefs/csv.hpp"
#include "beliefs/metrics.hpp"
#include "support.hpp"

using namespace beliefs;

namespace {

constexpr Timestamp D = kSecondsPerDay;

// Four files over a 28-day pre period (two 14-day HCM periods).
//   c1 day 1  (a, fix): f1 +10/-2, f2 +5, f4 +100
//   c2 day 20 (b):      f1 +1, f4 +4
//   c3 day 27 (a, fix): f3 -4
ReleaseWindow sample_window() {
    ReleaseWindow w;
    w.release = {"r2", 28 * D, 2};
    w.pre_start = 0;
    w.pre_end = 28 * D;
    w.post_end = w.pre_end + 182 * D;
    w.pre_records = {
        testing::rec("c1", 1 * D, "a", "f1.c", 10, 2, true),
        testing::rec("c1", 1 * D, "a", "f2.c", 5, 0, true),
        testing::rec("c1", 1 * D, "a", "f4.c", 100, 0, true),
        testing::rec("c2", 20 * D, "b", "f1.c", 1, 0, false),
        testing::rec("c2", 20 * D, "b", "f4.c", 4, 0, false),
        testing::rec("c3", 27 * D, "a", "f3.c", 0, 4, true),
    };
    w.distinct_files = 4;
    return w;
}

DefectCounts sample_defects() {
    DefectCounts d;
    d.per_file = {{"f1.c", 3}, {"f2.c", 0}, {"f3.c", 1}, {"f4.c", 2}};
    return d;
}

const std::vector<std::string> kFiles = {"f1.c", "f2.c", "f3.c", "f4.c"};
const std::vector<std::int64_t> kDefects = {3, 0, 1, 2};

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("normalized entropy") {
        CHECK(normalized_entropy({}) == 0.0);
        CHECK(normalized_entropy({5}) == 0.0);
        CHECK(normalized_entropy({1, 0}) == 0.0);
        CHECK(normalized_entropy({3, 3}) == doctest::Approx(1.0));
        CHECK(normalized_entropy({2, 1, 1}) == doctest::Approx(1.5 / std::log2(3.0)));
    }

    TEST_CASE("file metrics on the sample window") {
        const auto w = sample_window();
        const auto d = sample_defects();
        const auto all = compute_all(w, d);
        REQUIRE(all.size() == 10);
        for (std::size_t i = 0; i < all.size(); ++i) CHECK(belief_index(all[i].belief) == static_cast<int>(i));

        auto xs = [&](Belief b) { return all[belief_index(b)].x; };
        CHECK(all[0].entity_ids == kFiles);
        CHECK(all[0].y == kDefects);

        const auto hcm = xs(Belief::B1);
        CHECK(hcm[0] == doctest::Approx(1.5));
        CHECK(hcm[1] == doctest::Approx(0.5));
        CHECK(hcm[2] == doctest::Approx(1.0));
        CHECK(hcm[3] == doctest::Approx(1.5));

        CHECK(xs(Belief::B2) == std::vector<double>{2, 1, 1, 2});
        CHECK(xs(Belief::B3) == std::vector<double>{11, 5, 0, 104});
        CHECK(xs(Belief::B9) == std::vector<double>{2, 0, 4, 0});
        CHECK(xs(Belief::B4) == std::vector<double>{20.0 * D, 1.0 * D, 27.0 * D, 20.0 * D});
        CHECK(xs(Belief::B6) == std::vector<double>{1.0 * D, 1.0 * D, 27.0 * D, 1.0 * D});
        CHECK(xs(Belief::B7) == std::vector<double>{1, 1, 1, 1});
        CHECK(xs(Belief::B8) == std::vector<double>{2, 1, 1, 2});
        // f4: b holds 4 of 104 lines (< 5%), a holds 100
        CHECK(xs(Belief::B10) == std::vector<double>{0, 0, 0, 50});
    }

    TEST_CASE("commit churn pairs commits with their files' defects") {
        const auto v = metric_b5_commit_churn(sample_window(), sample_defects());
        CHECK(v.entity_ids == std::vector<std::string>{"c1", "c2", "c3"});
        CHECK(v.x == std::vector<double>{117, 5, 4});
        CHECK(v.y == std::vector<std::int64_t>{5, 5, 1});
    }

    TEST_CASE("files never fixed drop out of the fix-recency vector") {
        auto w = sample_window();
        w.pre_records[1].is_bug_fix = false;  // f2 only touched by a feature
        const auto v = metric_recency(w, sample_defects(), true);
        CHECK(v.entity_ids == std::vector<std::string>{"f1.c", "f3.c", "f4.c"});
    }

    TEST_CASE("minor share boundary is exclusive at 5%") {
        ReleaseWindow w;
        w.pre_start = 0;
        w.pre_end = 10 * D;
        w.pre_records = {testing::rec("c1", D, "a", "f.c", 95, 0, false),
                         testing::rec("c2", 2 * D, "b", "f.c", 5, 0, false),
                         testing::rec("c3", 3 * D, "a", "g.c", 0, 0, false)};
        const auto v = metric_b10_minor_share(w, {});
        CHECK(v.x == std::vector<double>{0, 0});  // 5 of 100 is not below 5%; zero churn -> 0
    }

    TEST_CASE("short pre periods split into halves") {
        ReleaseWindow w;
        w.pre_start = 0;
        w.pre_end = 10 * D;
        // halves at day 5: the day-5 change is in the first half
        w.pre_records = {testing::rec("c1", 5 * D, "a", "x.c", 1, 0, false),
                         testing::rec("c1", 5 * D, "a", "y.c", 1, 0, false),
                         testing::rec("c2", 5 * D + 1, "a", "x.c", 1, 0, false),
                         testing::rec("c2", 5 * D + 1, "a", "z.c", 1, 0, false)};
        const auto v = metric_b1_hcm(w, {});
        REQUIRE(v.entity_ids == std::vector<std::string>{"x.c", "y.c", "z.c"});
        CHECK(v.x[0] == doctest::Approx(1.5));
        CHECK(v.x[1] == doctest::Approx(0.5));
        CHECK(v.x[2] == doctest::Approx(1.0));
    }

    TEST_CASE("partial trailing period counts as a whole period") {
        ReleaseWindow w;
        w.pre_start = 0;
        w.pre_end = 15 * D;  // periods (0,14d] and (14d,15d]
        w.pre_records = {testing::rec("c1", 14 * D, "a", "x.c", 1, 0, false),
                         testing::rec("c1", 14 * D, "a", "y.c", 1, 0, false)};
        HcmConfig cfg;
        cfg.decay_rate = 1.0;
        const auto v = metric_b1_hcm(w, {}, cfg);
        CHECK(v.x[0] == doctest::Approx(std::exp(-1.0)));
    }

    TEST_CASE("hcm configuration is validated") {
        HcmConfig bad;
        bad.period_days = 0;
        CHECK_THROWS_AS(bad.validate(), ConfigError);
        bad = {};
        bad.decay_rate = 0.0;
        CHECK_THROWS_AS(metric_b1_hcm(sample_window(), {}, bad), ConfigError);
    }

    TEST_CASE("empty window yields empty vectors") {
        for (const auto& v : compute_all(ReleaseWindow{}, {})) CHECK(v.empty());
    }

    TEST_CASE("vector csv") {
        std::ostringstream out;
        write_vectors_csv(out, {metric_b2_developers(sample_window(), sample_defects())});
        const auto t = csv::parse(out.str());
        CHECK(t.header == std::vector<std::string>{"belief_id", "entity_id", "x", "y"});
        REQUIRE(t.rows.size() == 4);
        CHECK(t.rows[3] == std::vector<std::string>{"B2", "f4.c", "2", "2"});
    }
}
