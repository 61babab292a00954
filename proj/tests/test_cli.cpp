#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"

using json = nlohmann::ordered_json;

namespace {

struct outcome {
    int code;
    std::string out;
    std::string err;
};

outcome run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = freebeta::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args)
{
    const auto r = run(std::move(args));
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

std::vector<std::string> lines(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST(CliEnvelope, HasSchemaCommandParamsResultsProvenance)
{
    const auto j = run_json({"moments", "--a", "2", "--b", "3", "--n", "5"});
    std::vector<std::string> keys;
    for (const auto &[k, v] : j.items()) {
        keys.push_back(k);
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "command", "params", "results", "provenance"}));
    EXPECT_EQ(j["schema_version"], "1.0");
    EXPECT_EQ(j["command"], "moments");
    EXPECT_EQ(j["params"]["a"], "2/1");
}

TEST(CliMoments, AllRoutesAgreeAndPrintFractions)
{
    const auto j = run_json({"moments", "--family", "fbp", "--a", "2", "--b", "3", "--n", "5"});
    const auto &rows = j["results"]["moments"];
    ASSERT_EQ(rows.size(), 5u);
    const std::vector<std::string> expected{"1/1", "2/1", "11/2", "71/4", "503/8"};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(rows[i]["ncl"], expected[i]);
        EXPECT_EQ(rows[i]["series"], expected[i]);
        EXPECT_EQ(rows[i]["fock"], expected[i]);
        EXPECT_TRUE(rows[i]["agree"].get<bool>());
    }
}

TEST(CliMoments, NonFreeBetaPrimeUsesSeriesOnly)
{
    const auto j = run_json({"moments", "--family", "fp", "--lambda", "1", "--n", "4"});
    EXPECT_EQ(j["results"]["moments"][3]["series"], "14/1");
    EXPECT_EQ(run({"moments", "--family", "fp", "--route", "ncl"}).code, 2);
}

TEST(CliMoments, CsvFormatAfterSubcommand)
{
    const auto r = run({"moments", "--a", "2", "--b", "3", "--n", "3", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0], "n,ncl,series,fock,agree");
    EXPECT_EQ(ls[3], "3,11/2,11/2,11/2,true");
    EXPECT_EQ(run({"--format", "csv", "moments", "--n", "2"}).code, 0);
}

TEST(CliSupport, FreePoissonUnitRate)
{
    const auto j = run_json({"support", "--family", "fp", "--lambda", "1"});
    EXPECT_NEAR(j["results"]["lo"].get<double>(), 0.0, 1e-15);
    EXPECT_NEAR(j["results"]["hi"].get<double>(), 4.0, 1e-15);
    EXPECT_TRUE(j["results"]["atoms"].empty());
}

TEST(CliDensity, GridSpansSupport)
{
    const auto j = run_json({"density", "--family", "ft", "--m", "3", "--points", "11"});
    const auto &grid = j["results"]["grid"];
    ASSERT_EQ(grid.size(), 11u);
    EXPECT_NEAR(grid[0]["x"].get<double>(), -3, 1e-12);
    EXPECT_NEAR(grid[10]["x"].get<double>(), 3, 1e-12);
    EXPECT_GT(grid[5]["density"].get<double>(), 0);
}

TEST(CliEnumerate, CountsAndListing)
{
    EXPECT_EQ(run_json({"enumerate-ncl", "--n", "5"})["results"]["count"], 90);
    EXPECT_EQ(run_json({"enumerate-ncl", "--n", "5", "--nc"})["results"]["count"], 42);
    const auto j = run_json({"enumerate-ncl", "--n", "3", "--list"});
    EXPECT_EQ(j["results"]["partitions"].size(), 6u);
    const auto r = run({"enumerate-ncl", "--n", "3", "--list", "--format", "csv"});
    const auto ls = lines(r.out);
    EXPECT_EQ(ls[0], "partition,dc,sc,sg");
    // Partition fields contain commas and must be quoted.
    EXPECT_EQ(ls[1].front(), '"');
    EXPECT_EQ(run({"enumerate-ncl", "--n", "13"}).code, 2);
}

TEST(CliStats, WorkedExample)
{
    const auto j = run_json({"ncl-stats", "--n", "10", "--partition", "{{1,2,7},{2,4},{3},{5,6},{7,8,9},{9,10}}"});
    EXPECT_TRUE(j["results"]["valid"].get<bool>());
    EXPECT_EQ(j["results"]["dc"], 3);
    EXPECT_EQ(j["results"]["sc"], 2);
    EXPECT_EQ(j["results"]["sg"], 1);
    EXPECT_EQ(j["results"]["cards"], "O0,U1,S2,C2,O1,C2,T1,I1,T1,C1");
    const auto bad = run_json({"ncl-stats", "--n", "4", "--partition", "{{1,3},{2,4}}"});
    EXPECT_FALSE(bad["results"]["valid"].get<bool>());
    EXPECT_EQ(run_json({"ncl-stats", "--n", "4"})["results"]["total"], 22);
}

TEST(CliGamma, RoutesAgree)
{
    const auto j = run_json({"gamma-gf", "--alpha", "1/2", "--beta", "-3", "--gamma", "2", "--n", "6"});
    for (const auto &row : j["results"]["coefficients"]) {
        EXPECT_TRUE(row["agree"].get<bool>());
    }
    EXPECT_TRUE(j["results"]["quadratic_residual_zero"].get<bool>());
}

TEST(CliTCoeffs, UnitParameters)
{
    const auto j = run_json({"t-coeffs", "--a", "1", "--b", "2", "--order", "4"});
    const auto &rows = j["results"]["alphas"];
    EXPECT_EQ(rows[0]["alpha"], "1/1");
    for (std::size_t k = 1; k <= 4; ++k) {
        EXPECT_EQ(rows[k]["alpha"], "2/1");
        EXPECT_TRUE(rows[k]["agree"].get<bool>());
    }
}

TEST(CliMeixner, StandardizationAndDirectClassification)
{
    const auto j = run_json({"meixner", "--a", "2", "--b", "3"});
    EXPECT_EQ(j["results"]["tau_exact"], "1/2");
    EXPECT_EQ(j["results"]["theta_squared"], "9/4");
    const auto d = run_json({"meixner", "--theta", "2", "--tau", "1"});
    EXPECT_EQ(d["results"]["class"], "free gamma");
    EXPECT_EQ(run({"meixner", "--theta", "1"}).code, 2);
    EXPECT_EQ(run({"meixner", "--theta", "1", "--tau", "-2"}).code, 2);
}

TEST(CliScore, SmallGap)
{
    const auto j = run_json({"score-check", "--family", "fbp", "--a", "2", "--b", "3", "--points", "10"});
    EXPECT_LT(j["results"]["max_gap"].get<double>(), 1e-6);
    EXPECT_EQ(run({"score-check", "--family", "fp"}).code, 2);
}

TEST(CliFisher, JsonAndCsv)
{
    const auto j = run_json({"mc-fisher", "--p", "50", "--seed", "3", "--bins", "10", "--eigenvalues"});
    EXPECT_EQ(j["results"]["eigenvalue_count"], 50);
    EXPECT_EQ(j["results"]["eigenvalues"].size(), 50u);
    EXPECT_EQ(j["results"]["histogram"].size(), 10u);
    const auto again = run_json({"mc-fisher", "--p", "50", "--seed", "3", "--bins", "10", "--eigenvalues"});
    EXPECT_EQ(j["results"]["eigenvalues"], again["results"]["eigenvalues"]);
    const auto r = run({"mc-fisher", "--p", "30", "--bins", "5", "--format", "csv"});
    EXPECT_EQ(lines(r.out).front(), "bin_left,bin_right,empirical_density,theoretical_density");
    EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(CliErrors, UsageAndDomainErrorsExitWithTwo)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"no-such-command"}).code, 2);
    EXPECT_EQ(run({"moments", "--family", "nope"}).code, 2);
    EXPECT_EQ(run({"moments", "--a", "0"}).code, 2);
    EXPECT_EQ(run({"moments", "--a", "x/y"}).code, 2);
    EXPECT_EQ(run({"--format", "xml", "moments"}).code, 2);
    const auto r = run({"moments", "--a", "0"});
    EXPECT_NE(r.err.find("InvalidParameters"), std::string::npos);
}

TEST(CliHelp, PrintsUsage)
{
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("moments"), std::string::npos);
    EXPECT_NE(r.out.find("mc-fisher"), std::string::npos);
}

TEST(CliVerify, FullSuitePassesAndReportsEveryCheck)
{
    const auto r = run({"verify", "--keep-going", "--format", "csv"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 13u);
    EXPECT_EQ(ls[0], "id,passed,title,detail");
    for (std::size_t i = 1; i < ls.size(); ++i) {
        EXPECT_EQ(ls[i].rfind("AC" + std::to_string(i) + ",true,", 0), 0u) << ls[i];
    }
}
