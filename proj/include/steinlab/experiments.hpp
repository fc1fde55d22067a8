#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinlab/dist.hpp"
#include "steinlab/metrics.hpp"

namespace steinlab {

/// How a row's verdict is formed.
///   below:  computed.value <= paper_bound + computed.error
///   above:  computed.value >= paper_bound (a lower-bound check)
///   match:  |computed.value - exact_value| <= paper_bound (a tolerance)
enum class Check { below, above, match };
std::string_view to_string(Check c) noexcept;

struct ExperimentRow {
    /// Scenario parameters plus a "quantity" label naming what was computed.
    nlohmann::json params;
    DistanceEstimate computed;
    double paper_bound = 0.0;
    std::optional<double> exact_value;
    Check check = Check::below;
    bool satisfied = false;
};

struct ExperimentResult {
    std::string scenario;
    std::vector<ExperimentRow> rows;
    std::uint64_t master_seed = 0;
    /// Seconds; left empty unless timing was requested, so outputs stay
    /// byte-identical across runs.
    std::optional<double> wall_time;

    bool all_satisfied() const noexcept;
};

nlohmann::json to_json(const ExperimentRow& row);
nlohmann::json to_json(const ExperimentResult& result);

/// Header plus one line per row. Columns, in order:
/// scenario,row,quantity,params,value,error,metric,method,n,paper_bound,
/// exact_value,check,satisfied. `params` is compact JSON with quotes doubled.
std::string to_csv(const ExperimentResult& result);

struct GammaCell {
    double r;
    double alpha;
};

struct CharacterizationOptions {
    /// Defaults to {0.5, 1, 2, 5} x {0.5, 1, 3}.
    std::vector<GammaCell> grid;
    double threshold = 1e-6;
    /// Uniform(0, 1) control: theta must exceed this.
    double control_threshold = 1e-2;
};
ExperimentResult run_characterization(const CharacterizationOptions& options = {}, std::uint64_t seed = 0);

struct Example1Options {
    /// Defaults to {0.001, 0.005, 0.01, 0.05, 0.1, 0.2, 0.5, 1}.
    std::vector<double> deltas;
    double tolerance = 1e-6;
};
ExperimentResult run_example1(const Example1Options& options = {}, std::uint64_t seed = 0);

struct NbOptions {
    /// Default {1, 2, 5}.
    std::vector<double> kappas;
    /// Default {0.01, 0.05, 0.1}.
    std::vector<double> ps;
    double tolerance = 1e-6;
};
ExperimentResult run_nb(const NbOptions& options = {}, std::uint64_t seed = 0);

struct CounterexampleOptions {
    /// Default {10, 100, 1000}.
    std::vector<double> lambdas;
};
ExperimentResult run_counterexample(const CounterexampleOptions& options = {}, std::uint64_t seed = 0);

struct SumOptions {
    /// Default: ten Uniform(0, 1) parts.
    std::vector<DistPtr> parts;
    std::size_t n = 100000;
    /// Multiple of the standard error allowed above the bound.
    double se_factor = 3.0;
};
ExperimentResult run_sum(const SumOptions& options = {}, std::uint64_t seed = 0);

}  // namespace steinlab
