// One line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "steinlab/bounds.hpp"
#include "steinlab/distributions.hpp"
#include "steinlab/experiments.hpp"
#include "steinlab/metrics.hpp"
#include "steinlab/special.hpp"
#include "steinlab/transforms.hpp"

using namespace steinlab;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

void note(Outcome& o, bool cond, const std::string& what) {
    if (!cond) {
        o.ok = false;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += what;
    }
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Outcome gamma_fixed_point() {
    Outcome o;
    const TransformOptions generic{false};
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0, 5.0})
        for (double a : {0.5, 1.0, 3.0}) worst = std::max(worst, theta_exact(make_gamma(r, a), generic).value);
    const double control = theta_exact(make_uniform(0.0, 1.0), generic).value;
    note(o, worst < 1e-6, "max gamma theta " + fmt(worst));
    note(o, control > 1e-2, "uniform theta " + fmt(control));
    o.detail = o.ok ? "max gamma theta " + fmt(worst) + ", uniform theta " + fmt(control) : o.detail;
    return o;
}

Outcome nb_theta_identity() {
    Outcome o;
    double worst = 0.0;
    for (double p : {0.05, 0.1, 0.3, 0.5}) {
        const double t = theta_jump(make_scaled(p, make_logarithmic(p))).value;
        worst = std::max(worst, std::fabs(t - 0.5 * p));
    }
    note(o, worst <= 1e-6, "max |theta - p/2| " + fmt(worst));
    if (o.ok) o.detail = "max |theta - p/2| " + fmt(worst);
    return o;
}

Outcome example_one() {
    Outcome o;
    double worst_theta = 0.0;
    double worst_w = 0.0;
    const auto target = make_gamma(1.0, 1.0);
    for (double delta : {0.001, 0.01, 0.05, 0.1, 0.5}) {
        const Example1Values v = example1_values(delta);
        const auto jump = make_gamma_levy_jump(delta);
        worst_theta = std::max(worst_theta, std::fabs(theta_jump(jump).value - v.theta));
        const auto cp = make_compound_poisson(special::expint_e1(delta), jump);
        worst_w = std::max(worst_w, std::fabs(wasserstein(*cp, *target).value - v.exact));
        note(o, v.exact <= delta && delta <= v.w_bound, "ordering fails at delta " + fmt(delta));
    }
    note(o, worst_theta <= 1e-6, "theta gap " + fmt(worst_theta));
    note(o, worst_w <= 1e-6, "d_W gap " + fmt(worst_w));
    if (o.ok) o.detail = "theta gap " + fmt(worst_theta) + ", d_W gap " + fmt(worst_w);
    return o;
}

Outcome nb_dominance() {
    Outcome o;
    double worst_w = 0.0;
    double worst_k = 0.0;
    for (double kappa : {1.0, 2.0, 5.0}) {
        for (double p : {0.01, 0.05, 0.1}) {
            const double r = kappa * (1 - p);
            const double wb = 4 * std::sqrt(6 * r * p / (r + 2)) + 4 * r * p / (r + 2);
            const double kb = kolmogorov_bound(r, r, 0.5 * p);
            const auto w = make_scaled(p, make_negative_binomial(kappa, p));
            const auto g = make_gamma(r, 1.0);
            const double dw = wasserstein(*w, *g).value;
            const double dk = kolmogorov(*w, *g).value;
            worst_w = std::max(worst_w, dw / wb);
            worst_k = std::max(worst_k, dk / kb);
            note(o, dw <= wb, "d_W above bound at kappa " + fmt(kappa) + " p " + fmt(p));
            note(o, dk <= kb, "d_K above bound at kappa " + fmt(kappa) + " p " + fmt(p));
        }
    }
    if (o.ok) o.detail = "max d_W/bound " + fmt(worst_w) + ", max d_K/bound " + fmt(worst_k);
    return o;
}

Outcome lemma_dominance() {
    Outcome o;
    const std::array<double, 5> g{0.5, 1.0, 2.0, 3.0, 5.0};
    double worst_excess = -1e300;
    double worst_eq = 0.0;
    for (double r1 : g)
        for (double a1 : g)
            for (double r2 : g)
                for (double a2 : g) {
                    const double w = wasserstein(*make_gamma(r1, a1), *make_gamma(r2, a2), 1e-10).value;
                    const double b = gamma_pair_bound(r1, a1, r2, a2);
                    worst_excess = std::max(worst_excess, w - b);
                    if (a1 == a2) worst_eq = std::max(worst_eq, std::fabs(w - b));
                }
    note(o, worst_excess <= 1e-8, "max d_W - bound " + fmt(worst_excess));
    note(o, worst_eq <= 1e-8, "equal-rate gap " + fmt(worst_eq));
    if (o.ok) o.detail = "max d_W - bound " + fmt(worst_excess) + ", equal-rate gap " + fmt(worst_eq);
    return o;
}

Outcome concentration() {
    Outcome o;
    double worst = -1e300;
    for (double r : {0.3, 0.5, 1.0, 2.0, 5.0})
        for (double a : {0.5, 1.0, 2.0}) {
            const auto g = make_gamma(r, a);
            const double hi = quantile(*g, 0.999);
            for (double delta : {1e-3, 1e-2, 1e-1, 1.0}) {
                const double eps = concentration_eps(r, a, delta);
                for (int i = 0; i < 50; ++i) {
                    const double z = hi * i / 49.0;
                    worst = std::max(worst, cdf(*g, z + delta) - cdf(*g, z) - eps);
                }
            }
        }
    note(o, worst <= 1e-12, "max excess " + fmt(worst));
    if (o.ok) o.detail = "max excess over eps " + fmt(worst);
    return o;
}

Outcome counterexample() {
    Outcome o;
    const auto pois = make_poisson(1.0);
    double gap = 0.0;
    for (double lambda : {10.0, 100.0, 1000.0}) {
        const auto cp = make_compound_poisson(lambda, make_discrete({0.0, 1.0}, {1 - 1 / lambda, 1 / lambda}));
        for (const Atom& a : atoms(*cp)) gap = std::max(gap, std::fabs(a.p - density_or_mass(*pois, a.x)));
        for (const Atom& a : atoms(*pois)) gap = std::max(gap, std::fabs(a.p - density_or_mass(*cp, a.x)));
    }
    const double dk = kolmogorov(*pois, *make_gamma(1.0, 1.0)).value;
    note(o, gap <= 1e-12, "atom gap " + fmt(gap));
    note(o, dk >= 0.3678, "d_K " + fmt(dk));
    if (o.ok) o.detail = "atom gap " + fmt(gap) + ", d_K " + std::to_string(dk);
    return o;
}

Outcome generic_sum() {
    Outcome o;
    const ExperimentResult r = run_sum();
    const ExperimentRow& row = r.rows.at(0);
    const double se = row.computed.error;
    note(o, row.computed.value <= row.paper_bound + 3 * se,
         "d_W " + fmt(row.computed.value) + " above bound " + fmt(row.paper_bound));
    if (o.ok)
        o.detail = "d_W " + fmt(row.computed.value) + " (SE " + fmt(se) + ") <= bound " + fmt(row.paper_bound) +
                   ", theta_hat " + fmt(row.params.at("theta_hat").get<double>());
    return o;
}

std::pair<int, std::string> capture(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, out};
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome determinism() {
    Outcome o;
    const std::string cmd = std::string("\"") + STEINLAB_EXE + "\" reproduce nb --seed 7";
    const auto a = capture(cmd);
    const auto b = capture(cmd);
    note(o, a.first == 0 && b.first == 0, "exit codes " + std::to_string(a.first) + "/" + std::to_string(b.first));
    note(o, !a.second.empty() && a.second == b.second, "outputs differ");
    if (o.ok) o.detail = std::to_string(a.second.size()) + " identical bytes";
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "gamma fixed point", 5, gamma_fixed_point},
        {2, "scaled logarithmic theta = p/2", 5, nb_theta_identity},
        {3, "gamma process compound Poisson example", 20, example_one},
        {4, "negative binomial bound dominance", 30, nb_dominance},
        {5, "gamma pair bound dominance", 30, lemma_dominance},
        {6, "gamma concentration inequality", 5, concentration},
        {7, "Poisson(1) counterexample", 2, counterexample},
        {8, "bound on a sum of uniforms", 30, generic_sum},
        {9, "reproduce determinism", 60, determinism},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget) {
            o.ok = false;
            o.detail += "; runtime " + fmt(secs) + " s over budget " + fmt(c.budget) + " s";
        }
        if (!o.ok) ++failed;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
