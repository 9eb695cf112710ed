#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "config_file.hpp"

using namespace nilheat::cli;

namespace {

std::string write_temp(const std::string& text) {
    const std::string path = "nilheat_test_config.txt";
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("key = value files") {
    const std::string path = write_temp("# comment\n\ngroup = g4\ntime=0.5\n  label = \"a b\"  \n");
    const ConfigFile f = ConfigFile::load(path);
    CHECK(f.get("group").value() == "g4");
    CHECK(f.get("time").value() == "0.5");
    CHECK(f.get("label").value() == "a b");
    CHECK_FALSE(f.get("missing").has_value());
    CHECK_NOTHROW(f.restrict_to({"group", "time", "label"}));
    CHECK_THROWS_AS(f.restrict_to({"group", "time"}), UsageError);
    std::remove(path.c_str());
}

TEST_CASE("malformed lines and missing files") {
    const std::string path = write_temp("group g4\n");
    CHECK_THROWS_AS(ConfigFile::load(path), UsageError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(ConfigFile::load("/nonexistent/nilheat.cfg"), UsageError);
}

TEST_CASE("value parsing") {
    CHECK(parse_double(" 2.5e-1 ", "x") == 0.25);
    CHECK_THROWS_AS(parse_double("1.5abc", "x"), UsageError);
    CHECK_THROWS_AS(parse_double("inf", "x"), UsageError);
    CHECK(parse_int("-12", "n") == -12);
    CHECK_THROWS_AS(parse_int("3.5", "n"), UsageError);
    CHECK(parse_bool("yes", "b"));
    CHECK_FALSE(parse_bool("0", "b"));
    CHECK_THROWS_AS(parse_bool("maybe", "b"), UsageError);
    const std::vector<double> v = parse_list("0,-1.5,2", "p");
    REQUIRE(v.size() == 3);
    CHECK(v[1] == -1.5);
    CHECK_THROWS_AS(parse_list("1,,2", "p"), UsageError);
}
