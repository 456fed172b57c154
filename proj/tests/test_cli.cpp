#include <doctest.h>

#include "config.hpp"
#include "run.hpp"
#include "tables.hpp"

#include "momentbounds/errors.hpp"

#include <sstream>

using namespace momentbounds;
using namespace momentbounds::cli;

namespace {

bool parse(std::vector<std::string> args, RunConfig& c)
{
    args.insert(args.begin(), "momentbounds");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    std::string help;
    return parse_args(static_cast<int>(argv.size()), argv.data(), c, help);
}

} // namespace

TEST_CASE("argument parsing")
{
    RunConfig c;
    REQUIRE(parse({"theorem4-bounds", "--pstar", "6,8", "--epub", "1.5", "--output", "json"}, c));
    CHECK(c.command == Command::Theorem4Bounds);
    CHECK(c.pstar == std::vector<int>{6, 8});
    CHECK(c.epub == 1.5);
    CHECK(c.output == OutputFormat::Json);

    RunConfig d;
    CHECK_THROWS_AS(parse({"no-such-command"}, d), ConfigError);
    RunConfig e;
    CHECK_THROWS_AS(parse({"barta-series", "--max-dim", "x"}, e), ConfigError);
    RunConfig h;
    CHECK_FALSE(parse({"--help"}, h));
}

TEST_CASE("validation")
{
    RunConfig c;
    c.precision = 10;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c.precision = 17;
    c.max_dim = 20;
    CHECK_FALSE(validate(c).empty());
}

TEST_CASE("csv and json layout")
{
    Table t{"demo", {"a", "b"}};
    t.add_row({"1", "x,y"});
    CHECK(to_csv(t) == "a,b\n1,\"x,y\"\n");
    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j["table"] == "demo");
    CHECK(j["rows"][0]["b"] == "x,y");
    CHECK_THROWS(t.add_row({"1"}));
    CHECK(cell(1.0 / 0.0) == "inf");
    CHECK(cell(0.5, 3) == "0.500");
}

TEST_CASE("barta-series table")
{
    RunConfig c;
    c.command = Command::BartaSeries;
    std::ostringstream log;
    const Table t = build_table(c, log);
    REQUIRE(t.rows.size() == 8);
    CHECK(t.rows[3][0] == "4");
    CHECK(t.rows[3][1] == "10");
    CHECK(std::stod(t.rows[3][2]) == doctest::Approx(-0.45810).epsilon(1e-4));
}

TEST_CASE("unknown suite is a configuration error")
{
    RunConfig c;
    c.command = Command::Verify;
    c.suite = "nope";
    std::ostringstream out, log;
    CHECK_THROWS_AS(run(c, out, log), ConfigError);
}

TEST_CASE("sandwich ordering helper")
{
    Theorem4Bounds t4;
    t4.inf_lambda_max.lo = 0.9;
    t4.inf_lambda_max.hi = 0.91;
    t4.sup_lambda_min.lo = 1.2;
    t4.sup_lambda_min.hi = 1.21;
    EmmOrderResult emm;
    emm.lower_edge.lo = 0.95;
    emm.lower_edge.hi = 0.96;
    emm.upper_edge.lo = 1.1;
    emm.upper_edge.hi = 1.11;
    std::string detail;
    CHECK(sandwich_holds(t4, emm, 1.06, detail));
    emm.upper_edge.lo = 1.3;
    emm.upper_edge.hi = 1.31;
    CHECK_FALSE(sandwich_holds(t4, emm, 1.06, detail));
}
