#include <gtest/gtest.h>

#include "steinlab/distributions.hpp"
#include "steinlab/experiments.hpp"
#include "steinlab/output.hpp"

using namespace steinlab;

TEST(Experiments, CounterexampleRowsAllSatisfied) {
    const ExperimentResult r = run_counterexample();
    EXPECT_EQ(r.scenario, "counterexample");
    EXPECT_EQ(r.rows.size(), 9u);
    EXPECT_TRUE(r.all_satisfied());
}

TEST(Experiments, CharacterizationSmallGrid) {
    CharacterizationOptions o;
    o.grid = {{0.7, 1.3}, {4.0, 0.2}};
    const ExperimentResult r = run_characterization(o);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_TRUE(r.all_satisfied());
    EXPECT_NEAR(r.rows.back().computed.value, 1.0 / 6.0, 1e-8);
}

TEST(Experiments, NbSingleCellAndDeterminism) {
    NbOptions o;
    o.kappas = {2.0};
    o.ps = {0.05};
    const ExperimentResult a = run_nb(o, 7);
    const ExperimentResult b = run_nb(o, 7);
    EXPECT_TRUE(a.all_satisfied());
    EXPECT_EQ(dump_json(to_json(a)), dump_json(to_json(b)));
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_FALSE(to_json(a).contains("wall_time"));
}

TEST(Experiments, Example1SingleDelta) {
    Example1Options o;
    o.deltas = {0.2};
    const ExperimentResult r = run_example1(o);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_TRUE(r.all_satisfied());
    ASSERT_TRUE(r.rows[1].exact_value.has_value());
    EXPECT_NEAR(*r.rows[1].exact_value, 1 - std::exp(-0.2), 1e-15);
}

TEST(Experiments, SumOfGammaPartsHasNoTheta) {
    SumOptions o;
    o.parts.assign(5, make_exponential(1.0));
    o.n = 20000;
    const ExperimentResult r = run_sum(o, 1);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_LT(r.rows[0].params.at("theta_hat").get<double>(), 1e-12);
    // Sum of five Exp(1) is Gamma(5, 1): only sampling noise remains.
    EXPECT_LT(r.rows[0].computed.value, 0.05);
    EXPECT_TRUE(r.all_satisfied());
}

TEST(Experiments, SeedChangesMonteCarloRows) {
    SumOptions o;
    o.n = 5000;
    const auto a = run_sum(o, 1);
    const auto b = run_sum(o, 2);
    EXPECT_NE(a.rows[0].computed.value, b.rows[0].computed.value);
}

TEST(Experiments, CsvHeaderIsStable) {
    const std::string csv = to_csv(run_counterexample());
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "scenario,row,quantity,params,value,error,metric,method,n,paper_bound,exact_value,check,satisfied");
}

TEST(Output, RoundsToTwelveDigits) {
    EXPECT_DOUBLE_EQ(round12(0.1234567890123456), 0.123456789012);
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(dump_json(nlohmann::json{{"x", 2.0 / 3.0}}), "{\n  \"x\": 0.666666666667\n}\n");
}
