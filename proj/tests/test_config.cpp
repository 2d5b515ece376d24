#include <doctest.h>

#include <sstream>

#include "beliefs/config.hpp"
#include "support.hpp"

using namespace beliefs;

namespace {

std::vector<KeyValue> kvs(const std::string& text) {
    std::istringstream in(text);
    return parse_key_values(in, "test.conf");
}

std::string error_of(const std::string& text) {
    try {
        Config c;
        for (const auto& kv : kvs(text)) c.apply(kv);
        c.validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("defaults validate") {
        const Config c;
        CHECK_NOTHROW(c.validate());
        CHECK(c.post_days == 182);
        CHECK(c.alpha == 0.01);
        CHECK(c.min_observations == 4);
        CHECK(c.scott_knott().alpha == 0.05);
        CHECK(c.history().first_parent);
        CHECK(c.keywords().stems().size() == 29);
    }

    TEST_CASE("key-value parsing") {
        const auto v = kvs("# comment\n\n  alpha = 0.05  # trailing\nextensions = py, c  rb\n");
        REQUIRE(v.size() == 2);
        CHECK(v[0].key == "alpha");
        CHECK(v[0].value == "0.05");
        CHECK(v[0].line == 3);
        CHECK(parse_list(v[1]) == std::vector<std::string>{"py", "c", "rb"});
        CHECK_THROWS_WITH_AS(kvs("alpha\n"), "test.conf: line 1: expected 'key = value'", ConfigError);
        CHECK_THROWS_WITH_AS(kvs("a=1\na=2\n"), "test.conf: line 2: duplicate key 'a'", ConfigError);
        CHECK_THROWS_AS(kvs("= 3\n"), ConfigError);
    }

    TEST_CASE("value converters") {
        CHECK(parse_bool({"k", "yes", 1}));
        CHECK_FALSE(parse_bool({"k", "off", 1}));
        CHECK_THROWS_AS(parse_bool({"k", "maybe", 1}), ConfigError);
        CHECK(parse_int({"k", "-12", 1}) == -12);
        CHECK_THROWS_AS(parse_int({"k", "1.5", 1}), ConfigError);
        CHECK(parse_real({"k", "2.5e-1", 1}) == 0.25);
        CHECK_THROWS_AS(parse_real({"k", "inf", 1}), ConfigError);
        CHECK_THROWS_AS(parse_real({"k", "", 1}), ConfigError);
    }

    TEST_CASE("apply and validate name the offending key") {
        CHECK(error_of("alpha = 0.05\nseed = 9\nexact_p = true\n").empty());
        CHECK(error_of("colour = red\n").find("unknown key 'colour'") != std::string::npos);
        CHECK(error_of("alpha = 1\n").find("alpha") != std::string::npos);
        CHECK(error_of("min_observations = 2\n").find("min_observations") != std::string::npos);
        CHECK(error_of("bootstrap_iterations = 50\n").find("bootstrap_iterations") != std::string::npos);
        CHECK(error_of("a12_threshold = 0.4\n").find("a12_threshold") != std::string::npos);
        CHECK(error_of("seed = -1\n").find("seed") != std::string::npos);
        CHECK(error_of("post_days = x\n").find("post_days") != std::string::npos);
        CHECK(error_of("extensions = ,\n").find("extensions") != std::string::npos);
    }

    TEST_CASE("config file") {
        testing::TempDir tmp("cfg");
        testing::write_file(tmp / "kw.txt", "hotfix\n");
        testing::write_file(tmp / "a.conf", "post_days = 90\nall_commits = yes\nextensions = .PY\nkeyword_file = " +
                                                (tmp / "kw.txt").string() + "\nextend_keywords = true\n");
        const auto c = load_config(tmp / "a.conf");
        CHECK(c.post_days == 90);
        CHECK_FALSE(c.history().first_parent);
        CHECK(c.filter().accepts("x.py"));
        CHECK_FALSE(c.filter().accepts("x.c"));
        CHECK(c.keywords().stems().size() == 30);

        testing::write_file(tmp / "b.conf", "alpha = two\n");
        const std::string bad = (tmp / "b.conf").string();
        CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains(bad.c_str()), ConfigError);
        CHECK_THROWS_AS(load_config(tmp / "missing.conf"), ConfigError);
    }
}
