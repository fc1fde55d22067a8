#include "steinlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/quadrature.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

std::string_view to_string(Metric m) noexcept {
    return m == Metric::wasserstein ? "wasserstein" : "kolmogorov";
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::exact_quadrature: return "exact-quadrature";
        case Method::empirical: return "empirical";
        case Method::monte_carlo: return "monte-carlo";
    }
    return "exact-quadrature";
}

nlohmann::json to_json(const DistanceEstimate& e) {
    return {{"value", e.value},
            {"metric", std::string(to_string(e.metric))},
            {"method", std::string(to_string(e.method))},
            {"error", e.error},
            {"n", e.n},
            {"converged", e.converged}};
}

namespace {

bool tabulated(const Dist& d) { return cdf_tolerance(d) > 0.0 || representation_error(d) > 0.0; }

double tail_excess(const Dist& d, double x) {
    return std::max(0.0, upper_moment(d, 1, x) - x * upper_moment(d, 0, x));
}

std::vector<double> panel_edges(const Dist& d1, const Dist& d2, double lo, double hi) {
    std::vector<double> pts = breakpoints(d1, lo, hi);
    const std::vector<double> b2 = breakpoints(d2, lo, hi);
    pts.insert(pts.end(), b2.begin(), b2.end());
    pts.push_back(lo);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Sorted copy of s resampled with replacement, built from multiplicities so
// no re-sort is needed.
void resample_sorted(const std::vector<double>& sorted, Rng& rng, std::vector<std::size_t>& counts,
                     std::vector<double>& out) {
    const std::size_t n = sorted.size();
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        ++counts[std::min(k, n - 1)];
    }
    out.clear();
    for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), counts[i], sorted[i]);
}

double std_dev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

double default_tolerance(const Dist& d1, const Dist& d2) {
    return (tabulated(d1) || tabulated(d2)) ? 1e-6 : 1e-8;
}

DistanceEstimate wasserstein(const Dist& d1, const Dist& d2) {
    return wasserstein(d1, d2, default_tolerance(d1, d2));
}

DistanceEstimate wasserstein(const Dist& d1, const Dist& d2, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
    const double m1 = moments(d1).mean;
    const double m2 = moments(d2).mean;
    if (!std::isfinite(m1) || !std::isfinite(m2)) throw DomainError("wasserstein: both laws need a finite mean");

    DistanceEstimate out;
    out.metric = Metric::wasserstein;
    const double lo = std::min(lower_support(d1), lower_support(d2));
    const double hi = std::max({lo, upper_truncation(d1, 0.25 * tol), upper_truncation(d2, 0.25 * tol)});
    // Beyond hi, int |S1 - S2| lies between |E(X1 - hi)+ - E(X2 - hi)+| and
    // their sum: count the lower end, declare the rest as error.
    const double t1 = tail_excess(d1, hi);
    const double t2 = tail_excess(d2, hi);
    const double tail_floor = std::fabs(t1 - t2);
    const double tail = t1 + t2 - tail_floor;

    double value = 0.0;
    double quad_error = 0.0;
    if (hi > lo) {
        const std::vector<double> edges = panel_edges(d1, d2, lo, hi);
        auto gap = [&](double x) { return cdf(d1, x) - cdf(d2, x); };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const double a = edges[i];
            const double b = edges[i + 1];
            QuadOptions q;
            q.abs_tol = std::max(0.5 * tol * (b - a) / (hi - lo), 1e-15);
            const QuadResult r = integrate_abs(gap, a, b, q);
            value += r.value;
            quad_error += r.error;
            out.converged = out.converged && r.converged;
        }
    }
    out.value = value + tail_floor;
    out.error = quad_error + tail + representation_error(d1) + representation_error(d2);
    return out;
}

DistanceEstimate kolmogorov(const Dist& d1, const Dist& d2) {
    return kolmogorov(d1, d2, default_tolerance(d1, d2));
}

DistanceEstimate kolmogorov(const Dist& d1, const Dist& d2, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be > 0");
    DistanceEstimate out;
    out.metric = Metric::kolmogorov;

    const double lo = std::min(lower_support(d1), lower_support(d2));
    const double hi = std::max({lo, upper_truncation(d1, 1e-3 * tol), upper_truncation(d2, 1e-3 * tol)});
    auto gap = [&](double x) { return std::fabs(cdf(d1, x) - cdf(d2, x)); };
    auto gap_left = [&](double x) { return std::fabs(cdf_left(d1, x) - cdf_left(d2, x)); };

    double best = 0.0;
    // Jumps: both one-sided limits at every atom and breakpoint.
    const std::vector<double> edges = panel_edges(d1, d2, lo, hi);
    for (double x : edges) best = std::max({best, gap(x), gap_left(x)});

    std::vector<double> fixed = edges;
    for (const Dist* d : {&d1, &d2}) {
        constexpr int kQuantiles = 64;
        for (int i = 0; i < kQuantiles; ++i) {
            const double u = (i + 0.5) / kQuantiles;
            fixed.push_back(quantile(*d, u));
        }
    }

    double previous = -1.0;
    for (int round = 0, m = 256; round < 8; ++round, m *= 2) {
        std::vector<double> xs = fixed;
        for (int i = 0; i <= m; ++i) xs.push_back(lo + (hi - lo) * i / m);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<double> g(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            g[i] = gap(xs[i]);
            best = std::max(best, g[i]);
        }
        // Golden-section polish around the largest local maxima.
        std::vector<std::size_t> peaks;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const bool left_ok = i == 0 || g[i] >= g[i - 1];
            const bool right_ok = i + 1 == xs.size() || g[i] >= g[i + 1];
            if (left_ok && right_ok) peaks.push_back(i);
        }
        std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
        if (peaks.size() > 8) peaks.resize(8);
        for (std::size_t i : peaks) {
            double a = xs[i == 0 ? 0 : i - 1];
            double b = xs[std::min(i + 1, xs.size() - 1)];
            constexpr double kPhi = 0.6180339887498949;
            double c = b - kPhi * (b - a);
            double d = a + kPhi * (b - a);
            double gc = gap(c);
            double gd = gap(d);
            for (int it = 0; it < 80 && b - a > 1e-14 * std::max(1.0, std::fabs(b)); ++it) {
                if (gc > gd) {
                    b = d;
                    d = c;
                    gd = gc;
                    c = b - kPhi * (b - a);
                    gc = gap(c);
                } else {
                    a = c;
                    c = d;
                    gc = gd;
                    d = a + kPhi * (b - a);
                    gd = gap(d);
                }
            }
            best = std::max({best, gc, gd});
        }
        if (previous >= 0.0 && std::fabs(best - previous) < tol) break;
        previous = best;
        if (round == 7) out.converged = false;
    }
    // Beyond hi both survival functions are below the truncation budget.
    out.value = std::min(1.0, best);
    out.error = tol + cdf_tolerance(d1) + cdf_tolerance(d2);
    return out;
}

DistanceEstimate wasserstein_empirical(std::span<const double> s1, std::span<const double> s2,
                                       const BootstrapOptions& options) {
    if (s1.size() != s2.size()) throw DomainError("two-sample Wasserstein needs equal sample sizes");
    if (s1.empty()) throw DomainError("samples must be non-empty");
    std::vector<double> a(s1.begin(), s1.end());
    std::vector<double> b(s2.begin(), s2.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size();
    auto l1 = [n](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i] - y[i]);
        return s / static_cast<double>(n);
    };
    DistanceEstimate out;
    out.metric = Metric::wasserstein;
    out.method = Method::empirical;
    out.n = n;
    out.value = l1(a, b);
    Rng rng(options.seed);
    std::vector<std::size_t> counts(n);
    std::vector<double> ra;
    std::vector<double> rb;
    std::vector<double> reps;
    for (std::size_t r = 0; r < options.replicates; ++r) {
        resample_sorted(a, rng, counts, ra);
        resample_sorted(b, rng, counts, rb);
        reps.push_back(l1(ra, rb));
    }
    out.error = std_dev(reps);
    return out;
}

DistanceEstimate wasserstein_to_law(std::span<const double> s, const Dist& d, const BootstrapOptions& options) {
    if (s.empty()) throw DomainError("samples must be non-empty");
    std::vector<double> a(s.begin(), s.end());
    std::sort(a.begin(), a.end());
    const std::size_t n = a.size();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = quantile(d, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    auto l1 = [&](const std::vector<double>& x) {
        double t = 0.0;
        for (std::size_t i = 0; i < n; ++i) t += std::fabs(x[i] - q[i]);
        return t / static_cast<double>(n);
    };
    DistanceEstimate out;
    out.metric = Metric::wasserstein;
    out.method = Method::empirical;
    out.n = n;
    out.value = l1(a);
    Rng rng(options.seed);
    std::vector<std::size_t> counts(n);
    std::vector<double> ra;
    std::vector<double> reps;
    for (std::size_t r = 0; r < options.replicates; ++r) {
        resample_sorted(a, rng, counts, ra);
        reps.push_back(l1(ra));
    }
    out.error = std_dev(reps);
    return out;
}

DistanceEstimate kolmogorov_empirical(std::span<const double> s, const Dist& d, const BootstrapOptions& options) {
    if (s.empty()) throw DomainError("samples must be non-empty");
    std::vector<double> a(s.begin(), s.end());
    std::sort(a.begin(), a.end());
    // Distinct values with their law CDF limits.
    std::vector<double> values;
    std::vector<std::size_t> mult;
    for (double x : a) {
        if (values.empty() || x != values.back()) {
            values.push_back(x);
            mult.push_back(1);
        } else {
            ++mult.back();
        }
    }
    std::vector<double> right(values.size());
    std::vector<double> left(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        right[i] = cdf(d, values[i]);
        left[i] = cdf_left(d, values[i]);
    }
    const double n = static_cast<double>(a.size());
    auto stat = [&](const std::vector<std::size_t>& m) {
        double below = 0.0;
        double sup = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (m[i] == 0) continue;
            sup = std::max(sup, std::fabs(below / n - left[i]));
            below += static_cast<double>(m[i]);
            sup = std::max(sup, std::fabs(below / n - right[i]));
        }
        return sup;
    };
    DistanceEstimate out;
    out.metric = Metric::kolmogorov;
    out.method = Method::empirical;
    out.n = a.size();
    out.value = stat(mult);

    // Resample by multiplicity over the distinct values.
    std::vector<double> cum(values.size());
    double run = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        run += static_cast<double>(mult[i]);
        cum[i] = run / n;
    }
    Rng rng(options.seed);
    std::vector<std::size_t> m(values.size());
    std::vector<double> reps;
    for (std::size_t r = 0; r < options.replicates; ++r) {
        std::fill(m.begin(), m.end(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double u = rng.uniform();
            const auto it = std::upper_bound(cum.begin(), cum.end(), u);
            ++m[std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), values.size() - 1)];
        }
        reps.push_back(stat(m));
    }
    out.error = std_dev(reps);
    return out;
}

}  // namespace steinlab
