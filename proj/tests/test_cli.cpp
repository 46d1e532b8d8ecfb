#include "cli_app.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "chronofrac");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = chronofrac::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        v.push_back(l);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> v;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            v.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    v.push_back(cur);
    return v;
}

std::filesystem::path write_temp(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST(CliDeriv, ScatteredExamples)
{
    auto r = run({"deriv", "--scale", "Z", "--fn", "t^2", "--order", "1/2", "--at", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "{\"t\":4,\"value\":9,\"method\":\"ClosedFormScattered\",\"error_estimate\":0}\n");

    r = run({"deriv", "--scale", "hZ:1", "--fn", "t^2", "--order", "1.3", "--at", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"value\":2,"), std::string::npos) << r.out;
}

TEST(CliDeriv, ConstantOnRealsIsZero)
{
    const auto r = run({"deriv", "--scale", "R", "--fn", "7", "--order", "1/2", "--at", "0.3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"value\":0,"), std::string::npos) << r.out;
}

TEST(CliDeriv, JsonAndCsvCarryTheSameNumbers)
{
    const std::vector<std::string> base = {"deriv", "--scale", "union:{[0,1],{1.5},{2.25}}", "--fn", "t^3 - t",
                                           "--order", "1/3", "--grid", "4"};
    auto json_args = base;
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto json_run = run(json_args);
    const auto js = lines(json_run.out);
    const auto cs = lines(run(csv_args).out);
    // the left-scattered maximum 2.25 yields an error row
    EXPECT_EQ(json_run.code, 2);
    ASSERT_EQ(cs.size(), js.size() + 1);
    EXPECT_EQ(cs[0], "t,value,method,error_estimate");
    for (std::size_t i = 0; i < js.size(); ++i) {
        const auto cols = split(cs[i + 1], ',');
        ASSERT_EQ(cols.size(), 4u);
        if (cols[1].empty()) {
            EXPECT_EQ(cols[2], "error:NotInKappa");
            continue;
        }
        const double t = std::stod(cols[0]);
        const double v = std::stod(cols[1]);
        const auto json_t = std::stod(js[i].substr(js[i].find("\"t\":") + 4));
        const auto json_v = std::stod(js[i].substr(js[i].find("\"value\":") + 8));
        EXPECT_EQ(t, json_t);
        EXPECT_EQ(v, json_v);
        EXPECT_NE(js[i].find(cols[2]), std::string::npos);
    }
}

TEST(CliDeriv, GridCoversScatteredPointsOfTheWindow)
{
    const auto r = run({"deriv", "--scale", "Z", "--fn", "t", "--order", "1/2", "--grid", "1", "--window", "-2", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 5u);
    const auto unbounded = run({"deriv", "--scale", "Z", "--fn", "t", "--order", "1/2", "--grid", "1"});
    EXPECT_EQ(unbounded.code, 64);
}

TEST(CliDeriv, Deterministic)
{
    const std::vector<std::string> args = {"deriv", "--scale", "R", "--fn", "sin(t)*exp(t)", "--order", "3/4",
                                           "--at", "0.7"};
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliDeriv, EnvironmentToleranceAndFlagOverride)
{
    const std::vector<std::string> args = {"deriv", "--scale", "R", "--fn", "t^2", "--order", "1/2", "--at", "1"};
    ::setenv("CHRONOFRAC_TOL", "oops", 1);
    EXPECT_EQ(run(args).code, 64);
    auto with_flag = args;
    with_flag.insert(with_flag.end(), {"--tol", "1e-8"});
    EXPECT_EQ(run(with_flag).code, 0);
    ::setenv("CHRONOFRAC_TOL", "1e-6", 1);
    EXPECT_EQ(run(args).code, 0);
    ::unsetenv("CHRONOFRAC_TOL");
}

TEST(CliDeriv, UsageErrors)
{
    EXPECT_EQ(run({"deriv", "--scale", "Z", "--fn", "t^2", "--at", "4"}).code, 64);
    EXPECT_EQ(run({"deriv", "--scale", "Q", "--fn", "t^2", "--order", "1/2", "--at", "4"}).code, 64);
    EXPECT_EQ(run({"deriv", "--scale", "Z", "--fn", "t^^2", "--order", "1/2", "--at", "4"}).code, 64);
    EXPECT_EQ(run({"deriv", "--scale", "Z", "--fn", "t", "--order", "-1", "--at", "4"}).code, 64);
    EXPECT_EQ(run({"deriv", "--scale", "Z", "--fn", "t", "--order", "1/2", "--at", "4", "--format", "xml"}).code, 64);
    EXPECT_EQ(run({"bogus"}).code, 64);
    EXPECT_EQ(run({}).code, 64);
}

TEST(CliDeriv, EvaluationErrorsExitTwo)
{
    const auto r = run({"deriv", "--scale", "Z", "--fn", "t", "--order", "1/2", "--at", "0.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST(CliDeriv, CsvSignal)
{
    const auto path = write_temp("chronofrac_cli_signal.csv", "t,value\n0,1\n0.5,2\n1.7,4\n");
    auto r = run({"deriv", "--csv", path.string(), "--order", "1", "--at", "0.5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"value\":1.666666666666666"), std::string::npos) << r.out;
    EXPECT_EQ(run({"deriv", "--csv", path.string(), "--scale", "Z", "--order", "1", "--at", "0"}).code, 64);
    const auto bad = write_temp("chronofrac_cli_conflict.csv", "1,5\n1,6\n");
    EXPECT_EQ(run({"deriv", "--csv", bad.string(), "--order", "1", "--at", "1"}).code, 2);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST(CliInteg, Examples)
{
    auto r = run({"integ", "--scale", "Z", "--fn", "t", "--order", "1/2", "--from", "1", "--to", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"value\":9}"), std::string::npos) << r.out;
    r = run({"integ", "--scale", "Z", "--fn", "t", "--order", "1/2", "--from", "3", "--to", "3"});
    EXPECT_NE(r.out.find("\"value\":0}"), std::string::npos) << r.out;
    EXPECT_EQ(run({"integ", "--scale", "Z", "--fn", "t", "--order", "3/2", "--from", "1", "--to", "3"}).code, 64);
}

TEST(CliChain, Example)
{
    const auto r = run({"chain", "--scale", "Z", "--f", "t^2", "--g", "t", "--order", "1/2", "--at", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"c\":"), std::string::npos) << r.out;
    EXPECT_EQ(run({"chain", "--scale", "Z", "--f", "t^2", "--g", "t", "--order", "1", "--at", "1"}).code, 64);
}

TEST(CliInfo, PointClasses)
{
    auto r = run({"info", "--scale", "cantor:3", "--at", "1/3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("right_scattered"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"mu\":0.33333333333333331"), std::string::npos) << r.out;
    r = run({"info", "--scale", "Z", "--at", "0"});
    EXPECT_NE(r.out.find("isolated"), std::string::npos) << r.out;
    EXPECT_EQ(run({"info", "--scale", "Z", "--at", "0.5"}).code, 2);
    r = run({"info", "--scale", "R[0,1]"});
    EXPECT_EQ(r.code, 0);
    EXPECT_FALSE(r.out.empty());
}

TEST(CliLaws, ExitCodes)
{
    auto r = run({"laws", "--cases", "20", "--seed", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(run({"laws", "--cases", "20", "--seed", "3"}).out, r.out);
    EXPECT_EQ(run({"laws", "--cases", "0"}).code, 64);
    const auto fault = run({"laws", "--cases", "10", "--inject-fault"});
    EXPECT_EQ(fault.code, 1);
    EXPECT_NE(fault.err.find("sum_rule"), std::string::npos);
    const auto csv = run({"laws", "--cases", "10", "--format", "csv"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_EQ(lines(csv.out).size(), lines(run({"laws", "--cases", "10"}).out).size() + 1);
}
