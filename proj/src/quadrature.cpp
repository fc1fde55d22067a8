#include "steinlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace steinlab {

namespace {

// Kronrod abscissae (descending) with Kronrod and embedded Gauss weights.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod(const std::function<double(double)>& f, double a, double b, int& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double k15 = fc * kWk[7];
    double g7 = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXk[j];
        const double s = f(center - dx) + f(center + dx);
        k15 += kWk[j] * s;
        if (j % 2 == 1) g7 += kWg[j / 2] * s;
    }
    evals += 15;
    return {a, b, k15 * half, std::fabs((k15 - g7) * half)};
}

std::array<double, 15> kronrod_nodes(double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> nodes{};
    for (int j = 0; j < 7; ++j) {
        nodes[j] = center - half * kXk[j];
        nodes[14 - j] = center + half * kXk[j];
    }
    nodes[7] = center;
    return nodes;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options) {
    QuadResult out;
    if (a == b) return out;
    if (b < a) {
        out = integrate(f, b, a, options);
        out.value = -out.value;
        return out;
    }
    std::priority_queue<Panel> panels;
    panels.push(kronrod(f, a, b, out.evaluations));
    double value = panels.top().value;
    double error = panels.top().error;
    int splits = 0;
    while (error > std::max(options.abs_tol, options.rel_tol * std::fabs(value))) {
        if (splits >= options.max_subdivisions) {
            out.converged = false;
            break;
        }
        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        panels.pop();
        const Panel left = kronrod(f, worst.a, mid, out.evaluations);
        const Panel right = kronrod(f, mid, worst.b, out.evaluations);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++splits;
    }
    // Re-sum from the panels to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    std::vector<Panel> rest;
    while (!panels.empty()) {
        rest.push_back(panels.top());
        panels.pop();
    }
    std::sort(rest.begin(), rest.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    for (const Panel& p : rest) {
        value += p.value;
        error += p.error;
    }
    out.value = value;
    out.error = error;
    return out;
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double fa) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (!(mid > a && mid < b)) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

QuadResult integrate_abs(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& options) {
    QuadResult out;
    if (!(b > a)) return out;

    // Cut [a, b] at sign changes seen on the Kronrod nodes of a uniform
    // pre-partition; each sign-constant piece is integrated separately.
    constexpr int kPrePanels = 4;
    std::vector<double> cuts{a};
    for (int p = 0; p < kPrePanels; ++p) {
        const double lo = a + (b - a) * p / kPrePanels;
        const double hi = p + 1 == kPrePanels ? b : a + (b - a) * (p + 1) / kPrePanels;
        const auto nodes = kronrod_nodes(lo, hi);
        double prev_x = lo;
        double prev_f = f(lo);
        for (double x : nodes) {
            const double fx = f(x);
            out.evaluations += 1;
            if ((prev_f < 0.0 && fx > 0.0) || (prev_f > 0.0 && fx < 0.0)) {
                cuts.push_back(bisect_root(f, prev_x, x, prev_f));
            }
            if (fx != 0.0) {
                prev_x = x;
                prev_f = fx;
            }
        }
        const double fh = f(hi);
        if ((prev_f < 0.0 && fh > 0.0) || (prev_f > 0.0 && fh < 0.0)) {
            cuts.push_back(bisect_root(f, prev_x, hi, prev_f));
        }
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    const double total = b - a;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        if (!(hi > lo)) continue;
        QuadOptions piece = options;
        piece.abs_tol = options.abs_tol * (hi - lo) / total;
        // Integrand sign is constant on the piece up to missed double
        // crossings; integrating |f| keeps those nonnegative either way.
        const QuadResult r = integrate([&](double x) { return std::fabs(f(x)); }, lo, hi, piece);
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace steinlab
