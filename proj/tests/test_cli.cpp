#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = steinlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, Version) {
    const Result r = run({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("version"), steinlab::cli::kVersion);
}

TEST(Cli, Schema) {
    const Result r = run({"--schema"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.contains("DistanceEstimate"));
    EXPECT_TRUE(j.contains("BoundReport"));
    EXPECT_TRUE(j.contains("ExperimentResult"));
}

TEST(Cli, BoundExample1) {
    const Result r = run({"bound", "example1", "--delta", "0.01"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out).at("exact").get<double>(), 0.00995017, 5e-9);
}

TEST(Cli, BoundTheorem2AndPair) {
    Result r = run({"bound", "theorem2", "--mu", "2", "--var", "1", "--theta", "0.01"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out).at("w_bound").get<double>(), 0.853333333333, 1e-12);
    r = run({"bound", "gamma-pair", "--r1", "1", "--a1", "2", "--r2", "3", "--a2", "2"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out).at("bound").get<double>(), 1.0, 1e-15);
    r = run({"bound", "nb", "--kappa", "1", "--p", "0.1", "--nu", "1", "--out", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sum_bound"), std::string::npos);
}

TEST(Cli, DistanceZero) {
    const Result r =
        run({"distance", "--metric", "wasserstein", "--d1", "gamma:r=1,alpha=1", "--d2", "gamma:r=1,alpha=1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("value").get<double>(), 0.0);
}

TEST(Cli, EmpiricalDistanceIsSeeded) {
    const std::vector<std::string> args{"distance", "--metric", "kolmogorov", "--d1", "gamma:r=2,alpha=1", "--d2",
                                        "gamma:r=2,alpha=1", "--empirical", "2000", "--seed", "3"};
    const Result a = run(args);
    const Result b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(nlohmann::json::parse(a.out).at("method"), "empirical");
}

TEST(Cli, BiasClosedFormAndTable) {
    Result r = run({"bias", "--kind", "size", "--dist", "gamma:r=2,alpha=1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("spec"), "gamma:r=3,alpha=1");
    r = run({"bias", "--kind", "zero", "--dist", "uniform:a=0,b=1", "--tol", "1e-6"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j.at("closed_form").get<bool>());
    EXPECT_GT(j.at("law").at("nodes").size(), 2u);
}

TEST(Cli, Errors) {
    Result r = run({"distance", "--d1", "gamma:r=1", "--d2", "point:c=1"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: spec: ", 0), 0u) << r.err;
    r = run({"bound", "example1", "--delta", "0.1", "--bogus"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: usage: ", 0), 0u) << r.err;
    r = run({"bound", "theorem2", "--mu", "-1", "--var", "1", "--theta", "0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: domain: ", 0), 0u) << r.err;
    r = run({"reproduce", "nosuch"});
    EXPECT_EQ(r.code, 1);
    r = run({});
    EXPECT_EQ(r.code, 1);
    r = run({"reproduce", "example1", "--delta", "1:2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("error: usage: ", 0), 0u) << r.err;
}

TEST(Cli, HelpExitsZero) {
    const Result r = run({"reproduce", "--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("--seed"), std::string::npos);
}

TEST(Cli, ReproduceCounterexample) {
    const Result r = run({"reproduce", "counterexample", "--lambda", "10,100"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("all_satisfied").get<bool>());
    EXPECT_EQ(j.at("rows").size(), 6u);
}

TEST(Cli, UnsatisfiedRowGivesExitTwo) {
    // A zero threshold cannot be met by "theta < threshold".
    const Result r = run({"reproduce", "characterization", "--r", "1", "--alpha", "1", "--threshold", "0"});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(nlohmann::json::parse(r.out).at("all_satisfied").get<bool>());
}

TEST(Cli, GridParsing) {
    using steinlab::cli::parse_grid;
    EXPECT_EQ(parse_grid("1,2,3"), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(parse_grid("2:2:1"), (std::vector<double>{2}));
    EXPECT_THROW(parse_grid("0:1"), std::invalid_argument);
    EXPECT_THROW(parse_grid("a,b"), std::invalid_argument);
    EXPECT_THROW(parse_grid("0:1:0"), std::invalid_argument);
}
