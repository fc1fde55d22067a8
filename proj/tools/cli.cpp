#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinlab/bounds.hpp"
#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/experiments.hpp"
#include "steinlab/metrics.hpp"
#include "steinlab/numeric_law.hpp"
#include "steinlab/output.hpp"
#include "steinlab/spec_format.hpp"
#include "steinlab/transforms.hpp"

namespace steinlab::cli {

namespace {

using nlohmann::json;

/// Bad flag values found after CLI11 has accepted the command line.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutputFlags {
    std::string format = "json";
    std::string path;
    std::uint64_t seed = 0;
};

void add_output_flags(CLI::App* app, OutputFlags& o, bool with_seed) {
    app->add_option("--out", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app->add_option("--output", o.path, "Write to this file instead of stdout");
    if (with_seed) app->add_option("--seed", o.seed, "Master seed")->capture_default_str();
}

std::string csv_field(const json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

/// Header plus one line for a flat JSON object.
std::string flat_csv(const json& j) {
    std::string head;
    std::string line;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!head.empty()) {
            head += ',';
            line += ',';
        }
        head += it.key();
        line += csv_field(*it);
    }
    return head + "\n" + line + "\n";
}

void emit(const std::string& text, const OutputFlags& o, std::ostream& out) {
    if (o.path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file " + o.path);
    f << text;
    if (!f) throw UsageError("cannot write output file " + o.path);
}

bool has_bias(const Dist& d) {
    return std::visit(
        [](const auto& f) -> bool {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, family::Biased> || std::is_same_v<T, family::Numeric>) {
                return true;
            } else if constexpr (std::is_same_v<T, family::Scaled>) {
                return has_bias(*f.inner);
            } else if constexpr (std::is_same_v<T, family::CompoundPoisson>) {
                return has_bias(*f.jump);
            } else if constexpr (std::is_same_v<T, family::Convolution>) {
                return std::any_of(f.parts.begin(), f.parts.end(), [](const DistPtr& p) { return has_bias(*p); });
            } else {
                return false;
            }
        },
        d.variant());
}

json schemas() {
    const json number{{"type", "number"}};
    const json estimate{
        {"$schema", "https://json-schema.org/draft/2020-12/schema"},
        {"title", "DistanceEstimate"},
        {"type", "object"},
        {"required", {"value", "error", "metric", "method", "n", "converged"}},
        {"properties",
         {{"value", number},
          {"error", number},
          {"metric", {{"enum", {"wasserstein", "kolmogorov"}}}},
          {"method", {{"enum", {"exact-quadrature", "empirical", "monte-carlo"}}}},
          {"n", {{"type", "integer"}, {"minimum", 0}}},
          {"converged", {{"type", "boolean"}}}}}};
    json report{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
                {"title", "BoundReport"},
                {"type", "object"},
                {"required", {"mu", "sigma2", "r", "alpha", "theta", "w_bound", "k_bound", "a_const", "b_const",
                              "regime"}},
                {"properties", json::object()}};
    for (const char* k : {"mu", "sigma2", "r", "alpha", "theta", "w_bound", "k_bound", "a_const", "b_const"})
        report["properties"][k] = number;
    report["properties"]["regime"] = {{"enum", {"r<1", "r>=1"}}};
    const json row{{"type", "object"},
                   {"required", {"params", "computed_distance", "paper_bound", "exact_value", "check", "satisfied"}},
                   {"properties",
                    {{"params", {{"type", "object"}}},
                     {"computed_distance", {{"$ref", "#/$defs/DistanceEstimate"}}},
                     {"paper_bound", number},
                     {"exact_value", {{"type", {"number", "null"}}}},
                     {"check", {{"enum", {"below", "above", "match"}}}},
                     {"satisfied", {{"type", "boolean"}}}}}};
    json result{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
                {"title", "ExperimentResult"},
                {"type", "object"},
                {"required", {"scenario", "master_seed", "all_satisfied", "rows"}},
                {"properties",
                 {{"scenario", {{"enum", {"characterization", "example1", "nb", "counterexample", "sum"}}}},
                  {"master_seed", {{"type", "integer"}, {"minimum", 0}}},
                  {"all_satisfied", {{"type", "boolean"}}},
                  {"rows", {{"type", "array"}, {"items", row}}},
                  {"wall_time", number}}},
                {"$defs", {{"DistanceEstimate", estimate}}}};
    return {{"DistanceEstimate", estimate}, {"BoundReport", report}, {"ExperimentResult", result}};
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw UsageError("empty grid");
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> f;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ':');) f.push_back(item);
        if (f.size() != 3) throw UsageError("grid range must be start:stop:count, got '" + text + "'");
        const double a = parse_number(f[0]);
        const double b = parse_number(f[1]);
        const double c = parse_number(f[2]);
        if (c < 1 || c != std::floor(c) || c > 1e6) throw UsageError("grid count must be a positive integer");
        const auto n = static_cast<std::size_t>(c);
        if (n == 1) {
            if (a != b) throw UsageError("a one-point grid needs start == stop");
            return {a};
        }
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        out.back() = b;
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_number(item));
    if (text.back() == ',') throw UsageError("trailing comma in grid '" + text + "'");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gamma approximation by Stein's method", "steinlab"};
    app.require_subcommand(0, 1);
    bool version = false;
    bool schema = false;
    app.add_flag("--version", version, "Print the version as JSON and exit");
    app.add_flag("--schema", schema, "Print the JSON schemas of DistanceEstimate, BoundReport and ExperimentResult");

    // bias
    auto* bias = app.add_subcommand("bias", "Size, zero or equilibrium transform of a law");
    std::string bias_kind;
    std::string bias_dist;
    double bias_tol = 1e-8;
    bool bias_generic = false;
    OutputFlags bias_out;
    bias->add_option("--kind", bias_kind, "Transform")->required()->check(CLI::IsMember({"size", "zero", "equilibrium"}));
    bias->add_option("--dist", bias_dist, "Input law spec, e.g. gamma:r=2,alpha=1")->required();
    bias->add_option("--tol", bias_tol, "CDF tolerance of the tabulated output")->capture_default_str();
    bias->add_flag("--generic", bias_generic, "Skip closed forms and always tabulate");
    add_output_flags(bias, bias_out, false);

    // distance
    auto* dist = app.add_subcommand("distance", "Wasserstein or Kolmogorov distance between two laws");
    std::string metric = "wasserstein";
    std::string d1_text;
    std::string d2_text;
    double tol = 0.0;
    std::size_t empirical_n = 0;
    std::size_t replicates = 200;
    OutputFlags dist_out;
    dist->add_option("--metric", metric, "Metric")->check(CLI::IsMember({"wasserstein", "kolmogorov"}))->capture_default_str();
    dist->add_option("--d1", d1_text, "First law spec")->required();
    dist->add_option("--d2", d2_text, "Second law spec")->required();
    dist->add_option("--tol", tol, "Absolute tolerance (0 picks the default)");
    dist->add_option("--empirical", empirical_n, "Sample n draws of d1 and compare them with d2");
    dist->add_option("--replicates", replicates, "Bootstrap replicates for --empirical")->capture_default_str();
    add_output_flags(dist, dist_out, true);

    // bound
    auto* bound = app.add_subcommand("bound", "Evaluate the approximation bounds");
    bound->require_subcommand(1);
    OutputFlags bound_out;
    auto* theorem2 = bound->add_subcommand("theorem2", "Wasserstein and Kolmogorov bounds from (mu, var, theta)");
    double mu = 0, var = 0, theta = 0;
    theorem2->add_option("--mu", mu, "Mean")->required();
    theorem2->add_option("--var", var, "Variance")->required();
    theorem2->add_option("--theta", theta, "Theta")->required();
    add_output_flags(theorem2, bound_out, false);
    auto* pair = bound->add_subcommand("gamma-pair", "Wasserstein bound between two gamma laws");
    double r1 = 0, a1 = 0, r2 = 0, a2 = 0;
    pair->add_option("--r1", r1, "Shape of the first law")->required();
    pair->add_option("--a1", a1, "Rate of the first law")->required();
    pair->add_option("--r2", r2, "Shape of the second law")->required();
    pair->add_option("--a2", a2, "Rate of the second law")->required();
    add_output_flags(pair, bound_out, false);
    auto* nb = bound->add_subcommand("nb", "Rescaled negative binomial against Gamma(kappa (1-p), 1)");
    double kappa = 0, p = 0;
    std::optional<double> nu;
    nb->add_option("--kappa", kappa, "Negative binomial shape")->required();
    nb->add_option("--p", p, "Success probability in (0, 1)")->required();
    nb->add_option("--nu", nu, "Conditional standard deviation scale for the random-sum bound");
    add_output_flags(nb, bound_out, false);
    auto* ex1 = bound->add_subcommand("example1", "Gamma process compound Poisson approximation");
    double delta = 0;
    ex1->add_option("--delta", delta, "Jump cut-off")->required();
    add_output_flags(ex1, bound_out, false);

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "Run a named reproduction scenario");
    std::string scenario;
    OutputFlags rep_out;
    std::string g_r, g_alpha, g_delta, g_kappa, g_p, g_lambda;
    std::vector<std::string> g_parts;
    std::size_t g_copies = 10;
    std::size_t g_n = 100000;
    bool timing = false;
    std::optional<double> threshold;
    rep->add_option("scenario", scenario, "characterization | example1 | nb | counterexample | sum")
        ->required()
        ->check(CLI::IsMember({"characterization", "example1", "nb", "counterexample", "sum"}));
    rep->add_option("--r", g_r, "characterization: shape grid");
    rep->add_option("--alpha", g_alpha, "characterization: rate grid");
    rep->add_option("--threshold", threshold, "characterization: theta threshold for the gamma rows");
    rep->add_option("--delta", g_delta, "example1: cut-off grid in (0, 1]");
    rep->add_option("--kappa", g_kappa, "nb: shape grid");
    rep->add_option("--p", g_p, "nb: probability grid");
    rep->add_option("--lambda", g_lambda, "counterexample: intensity grid");
    rep->add_option("--part", g_parts, "sum: summand law spec (repeatable)");
    rep->add_option("--copies", g_copies, "sum: how many times the --part list is repeated")->capture_default_str();
    rep->add_option("--n", g_n, "sum: Monte Carlo draws")->capture_default_str();
    rep->add_flag("--timing", timing, "Add wall_time (output is then no longer reproducible)");
    add_output_flags(rep, rep_out, true);

    const auto fail = [&](const char* category, const std::string& detail) {
        err << "error: " << category << ": " << detail << "\n";
        return 1;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    }

    try {
        if (version) {
            out << json{{"name", "steinlab"}, {"version", kVersion}}.dump() << "\n";
            return 0;
        }
        if (schema) {
            out << schemas().dump(2) << "\n";
            return 0;
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return fail("usage", "a subcommand is required");
        }

        if (bias->parsed()) {
            const DistPtr d = parse_dist(bias_dist);
            const TransformOptions opt{!bias_generic};
            const BiasKind kind = parse_bias_kind(bias_kind);
            const DistPtr t = kind == BiasKind::size   ? size_bias(d, opt)
                              : kind == BiasKind::zero ? zero_bias(d, opt)
                                                       : equilibrium(d, opt);
            json j{{"kind", bias_kind}, {"input", format_dist(*d)}};
            std::optional<NumericLaw> law;
            if (!has_bias(*t)) {
                j["closed_form"] = true;
                j["spec"] = format_dist(*t);
            } else {
                law = tabulate(*t, bias_tol);
                j["closed_form"] = false;
                j["law"] = to_json(*law);
            }
            if (bias_out.format == "csv") {
                std::string text;
                if (!law) {
                    text = "kind,input,closed_form,spec\n" + bias_kind + ",\"" + format_dist(*d) + "\",true,\"" +
                           format_dist(*t) + "\"\n";
                } else {
                    text = "x,cdf\n";
                    for (double x : law->nodes()) text += format_number(x) + "," + format_number(law->cdf(x)) + "\n";
                }
                emit(text, bias_out, out);
            } else {
                emit(dump_json(j), bias_out, out);
            }
            return 0;
        }

        if (dist->parsed()) {
            const DistPtr d1 = parse_dist(d1_text);
            const DistPtr d2 = parse_dist(d2_text);
            const bool w = metric == "wasserstein";
            DistanceEstimate e;
            if (empirical_n > 0) {
                Rng rng = Rng::split(dist_out.seed, 0);
                const std::vector<double> s = sample(*d1, rng, empirical_n);
                const BootstrapOptions bo{replicates, Rng::split(dist_out.seed, 1).state()};
                e = w ? wasserstein_to_law(s, *d2, bo) : kolmogorov_empirical(s, *d2, bo);
            } else if (tol > 0.0) {
                e = w ? wasserstein(*d1, *d2, tol) : kolmogorov(*d1, *d2, tol);
            } else {
                e = w ? wasserstein(*d1, *d2) : kolmogorov(*d1, *d2);
            }
            const json j = to_json(e);
            emit(dist_out.format == "csv" ? flat_csv(round_numbers(j)) : dump_json(j), dist_out, out);
            return 0;
        }

        if (bound->parsed()) {
            json j;
            if (theorem2->parsed()) {
                j = to_json(theorem_bounds(mu, var, theta));
            } else if (pair->parsed()) {
                j = {{"r1", r1}, {"a1", a1}, {"r2", r2}, {"a2", a2}, {"bound", gamma_pair_bound(r1, a1, r2, a2)}};
            } else if (nb->parsed()) {
                const NbBounds b = nb_bounds(kappa, p);
                j = to_json(theorem_bounds(kappa * (1.0 - p), kappa * (1.0 - p), b.theta));
                j["kappa"] = kappa;
                j["p"] = p;
                if (nu) {
                    j["nu"] = *nu;
                    j["sum_bound"] = nb_sum_bound(kappa, p, *nu);
                }
            } else {
                const Example1Values v = example1_values(delta);
                j = {{"delta", delta}, {"theta", v.theta}, {"w_bound", v.w_bound}, {"exact", v.exact}};
            }
            emit(bound_out.format == "csv" ? flat_csv(round_numbers(j)) : dump_json(j), bound_out, out);
            return 0;
        }

        // reproduce
        const auto start = std::chrono::steady_clock::now();
        ExperimentResult res;
        if (scenario == "characterization") {
            CharacterizationOptions o;
            if (!g_r.empty() || !g_alpha.empty()) {
                const auto rs = g_r.empty() ? std::vector<double>{0.5, 1, 2, 5} : parse_grid(g_r);
                const auto as = g_alpha.empty() ? std::vector<double>{0.5, 1, 3} : parse_grid(g_alpha);
                for (double r : rs)
                    for (double a : as) o.grid.push_back({r, a});
            }
            if (threshold) o.threshold = *threshold;
            res = run_characterization(o, rep_out.seed);
        } else if (scenario == "example1") {
            Example1Options o;
            if (!g_delta.empty()) o.deltas = parse_grid(g_delta);
            res = run_example1(o, rep_out.seed);
        } else if (scenario == "nb") {
            NbOptions o;
            if (!g_kappa.empty()) o.kappas = parse_grid(g_kappa);
            if (!g_p.empty()) o.ps = parse_grid(g_p);
            res = run_nb(o, rep_out.seed);
        } else if (scenario == "counterexample") {
            CounterexampleOptions o;
            if (!g_lambda.empty()) o.lambdas = parse_grid(g_lambda);
            res = run_counterexample(o, rep_out.seed);
        } else {
            SumOptions o;
            o.n = g_n;
            if (!g_parts.empty()) {
                if (g_copies == 0) throw UsageError("--copies must be >= 1");
                std::vector<DistPtr> base;
                for (const std::string& s : g_parts) base.push_back(parse_dist(s));
                for (std::size_t c = 0; c < g_copies; ++c) o.parts.insert(o.parts.end(), base.begin(), base.end());
            }
            res = run_sum(o, rep_out.seed);
        }
        if (timing)
            res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(rep_out.format == "csv" ? to_csv(res) : dump_json(to_json(res)), rep_out, out);
        return res.all_satisfied() ? 0 : 2;
    } catch (const UsageError& e) {
        return fail("usage", e.what());
    } catch (const SpecSyntaxError& e) {
        return fail("spec", e.what());
    } catch (const DomainError& e) {
        return fail("domain", e.what());
    } catch (const NumericalError& e) {
        return fail("numerical", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
}

}  // namespace steinlab::cli
