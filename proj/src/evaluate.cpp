#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "resolve.hpp"
#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/special.hpp"

namespace steinlab {

namespace {

using detail::Resolved;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

const Resolved& res(const Dist& d) { return d.resolved(); }

// ---- partial moments -------------------------------------------------------

double gamma_lower(double r, double alpha, int k, double x) {
    if (x <= 0.0) return 0.0;
    return special::rising_factorial(r, k) / ipow(alpha, k) * special::gamma_p(r + k, alpha * x);
}

double gamma_upper(double r, double alpha, int k, double x) {
    const double c = special::rising_factorial(r, k) / ipow(alpha, k);
    if (x <= 0.0) return c;
    return c * special::gamma_q(r + k, alpha * x);
}

// Moment of order k >= 1 of the Levy jump law on (x, inf), x >= delta.
double levy_tail(double delta, int k, double x) {
    const double lambda = special::expint_e1(delta);
    if (k == 0) return special::expint_e1(x) / lambda;
    return special::gamma_fn(k) * special::gamma_q(k, x) / lambda;
}

double levy_lower(double delta, int k, double x) {
    if (x < delta) return 0.0;
    const double lambda = special::expint_e1(delta);
    if (k == 0) return (lambda - special::expint_e1(x)) / lambda;
    return special::gamma_fn(k) * (special::gamma_q(k, delta) - special::gamma_q(k, x)) / lambda;
}

double levy_upper(double delta, int k, double x) { return levy_tail(delta, k, std::max(x, delta)); }

// E[(W - mu) 1{W > x}], using whichever side of mu avoids cancellation.
double zero_tail(const Dist& w, double mu, double x) {
    if (x < mu) return mu * lower_moment(w, 0, x) - lower_moment(w, 1, x);
    return upper_moment(w, 1, x) - mu * upper_moment(w, 0, x);
}

double biased_lower(const family::Biased& b, int k, double x) {
    if (x < 0.0) return 0.0;
    const Dist& w = *b.inner;
    switch (b.kind) {
        case BiasKind::size:
            return lower_moment(w, k + 1, x) / raw_moment(w, 1);
        case BiasKind::zero: {
            const Moments m = moments(w);
            const double num = lower_moment(w, k + 2, x) - m.mean * lower_moment(w, k + 1, x) +
                               ipow(x, k + 1) * zero_tail(w, m.mean, x);
            return num / ((k + 1) * m.variance);
        }
        case BiasKind::equilibrium: {
            const double mu = raw_moment(w, 1);
            return (lower_moment(w, k + 1, x) + ipow(x, k + 1) * upper_moment(w, 0, x)) / ((k + 1) * mu);
        }
    }
    return 0.0;
}

double biased_upper(const family::Biased& b, int k, double x) {
    const Dist& w = *b.inner;
    if (x < 0.0) x = 0.0;
    switch (b.kind) {
        case BiasKind::size:
            return upper_moment(w, k + 1, x) / raw_moment(w, 1);
        case BiasKind::zero: {
            const Moments m = moments(w);
            const double num = upper_moment(w, k + 2, x) - m.mean * upper_moment(w, k + 1, x) -
                               ipow(x, k + 1) * zero_tail(w, m.mean, x);
            return num / ((k + 1) * m.variance);
        }
        case BiasKind::equilibrium: {
            const double mu = raw_moment(w, 1);
            return (upper_moment(w, k + 1, x) - ipow(x, k + 1) * upper_moment(w, 0, x)) / ((k + 1) * mu);
        }
    }
    return 0.0;
}

// sum_a p_a E[(a + B)^k 1{a + B <= x}] (or > x when `upper`).
double shift_mix_moment(const Resolved& r, int k, double x, bool upper) {
    double total = 0.0;
    for (const Atom& a : r.table.atoms()) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) {
            const double part = upper ? upper_moment(*r.continuous, j, x - a.x)
                                      : lower_moment(*r.continuous, j, x - a.x);
            s += binomial(k, j) * ipow(a.x, k - j) * part;
        }
        total += a.p * s;
    }
    return total;
}

double resolved_moment(const Resolved& r, int k, double x, bool upper) {
    switch (r.form) {
        case Resolved::Form::atoms:
            return upper ? r.table.upper_moment(k, x) : r.table.lower_moment(k, x);
        case Resolved::Form::grid:
            return upper ? r.grid->upper_moment(k, x) : r.grid->lower_moment(k, x);
        case Resolved::Form::shift_mix:
            return shift_mix_moment(r, k, x, upper);
        case Resolved::Form::direct:
            break;
    }
    throw NumericalError("law has no tabulated form");
}

double partial_moment(const Dist& d, int k, double x, bool upper) {
    if (k < 0) throw DomainError("moment order must be >= 0");
    return std::visit(
        Overloaded{
            [&](const family::Gamma& g) {
                return upper ? gamma_upper(g.r, g.alpha, k, x) : gamma_lower(g.r, g.alpha, k, x);
            },
            [&](const family::Exponential& e) {
                return upper ? gamma_upper(1.0, e.alpha, k, x) : gamma_lower(1.0, e.alpha, k, x);
            },
            [&](const family::Uniform& u) {
                const double w = (k + 1) * (u.b - u.a);
                if (upper) {
                    if (x >= u.b) return 0.0;
                    const double xx = std::max(x, u.a);
                    return (ipow(u.b, k + 1) - ipow(xx, k + 1)) / w;
                }
                if (x < u.a) return 0.0;
                const double xx = std::min(x, u.b);
                return (ipow(xx, k + 1) - ipow(u.a, k + 1)) / w;
            },
            [&](const family::GammaLevyJump& l) {
                return upper ? levy_upper(l.delta, k, x) : levy_lower(l.delta, k, x);
            },
            [&](const family::Scaled& s) {
                return ipow(s.c, k) * partial_moment(*s.inner, k, x / s.c, upper);
            },
            [&](const family::Biased& b) { return upper ? biased_upper(b, k, x) : biased_lower(b, k, x); },
            [&](const auto&) { return resolved_moment(res(d), k, x, upper); },
        },
        d.variant());
}

// ---- point masses ----------------------------------------------------------

double point_mass(const Dist& d, double x) {
    return std::visit(
        Overloaded{
            [&](const family::Scaled& s) { return point_mass(*s.inner, x / s.c); },
            [&](const family::Biased& b) {
                if (b.kind != BiasKind::size) return 0.0;
                return x * point_mass(*b.inner, x) / raw_moment(*b.inner, 1);
            },
            [&](const family::Numeric& n) { return n.law->atoms().mass_at(x); },
            [&](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, family::Gamma> || std::is_same_v<T, family::Exponential> ||
                              std::is_same_v<T, family::Uniform> ||
                              std::is_same_v<T, family::GammaLevyJump>) {
                    return 0.0;
                } else {
                    const Resolved& r = res(d);
                    switch (r.form) {
                        case Resolved::Form::atoms:
                            return r.table.mass_at(x);
                        case Resolved::Form::grid:
                            return r.grid->atoms().mass_at(x);
                        case Resolved::Form::shift_mix: {
                            double s = 0.0;
                            for (const Atom& a : r.table.atoms()) s += a.p * point_mass(*r.continuous, x - a.x);
                            return s;
                        }
                        case Resolved::Form::direct:
                            break;
                    }
                    return 0.0;
                }
            },
        },
        d.variant());
}

// ---- raw moments -----------------------------------------------------------

double raw_moment_impl(const Dist& d, int k);

std::vector<double> moment_vector(const Dist& d, int k) {
    std::vector<double> m(k + 1);
    for (int j = 0; j <= k; ++j) m[j] = raw_moment_impl(d, j);
    return m;
}

double raw_moment_impl(const Dist& d, int k) {
    if (k < 0) throw DomainError("moment order must be >= 0");
    if (k == 0) return 1.0;
    return std::visit(
        Overloaded{
            [&](const family::Gamma& g) { return special::rising_factorial(g.r, k) / ipow(g.alpha, k); },
            [&](const family::Exponential& e) { return special::rising_factorial(1.0, k) / ipow(e.alpha, k); },
            [&](const family::Uniform& u) {
                return (ipow(u.b, k + 1) - ipow(u.a, k + 1)) / ((k + 1) * (u.b - u.a));
            },
            [&](const family::Poisson& p) {
                if (k == 1) return p.lambda;
                if (k == 2) return p.lambda + p.lambda * p.lambda;
                return res(d).table.moment(k);
            },
            [&](const family::Geometric& g) {
                if (k == 1) return (1.0 - g.p) / g.p;
                if (k == 2) return (1.0 - g.p) * (2.0 - g.p) / (g.p * g.p);
                return res(d).table.moment(k);
            },
            [&](const family::NegativeBinomial& nb) {
                const double m = nb.kappa * (1.0 - nb.p) / nb.p;
                if (k == 1) return m;
                if (k == 2) return m / nb.p + m * m;
                return res(d).table.moment(k);
            },
            [&](const family::Logarithmic& l) {
                const double base = -(1.0 - l.p) / std::log(l.p);
                if (k == 1) return base / l.p;
                if (k == 2) return base / (l.p * l.p);
                return res(d).table.moment(k);
            },
            [&](const family::GammaLevyJump& l) { return levy_tail(l.delta, k, l.delta); },
            [&](const family::Scaled& s) { return ipow(s.c, k) * raw_moment_impl(*s.inner, k); },
            [&](const family::Convolution& c) {
                std::vector<double> acc(k + 1, 0.0);
                acc[0] = 1.0;
                for (const DistPtr& p : c.parts) {
                    const std::vector<double> m = moment_vector(*p, k);
                    std::vector<double> next(k + 1, 0.0);
                    for (int n = 0; n <= k; ++n)
                        for (int j = 0; j <= n; ++j) next[n] += binomial(n, j) * acc[j] * m[n - j];
                    acc = std::move(next);
                }
                return acc[k];
            },
            [&](const family::CompoundPoisson& cp) {
                // Moments from cumulants kappa_j = lambda E X^j.
                std::vector<double> m(k + 1, 0.0);
                m[0] = 1.0;
                std::vector<double> cum(k + 1, 0.0);
                for (int j = 1; j <= k; ++j) cum[j] = cp.lambda * raw_moment_impl(*cp.jump, j);
                for (int n = 1; n <= k; ++n)
                    for (int j = 1; j <= n; ++j) m[n] += binomial(n - 1, j - 1) * cum[j] * m[n - j];
                return m[k];
            },
            [&](const family::Numeric& n) { return n.law->moment(k); },
            [&](const family::Biased& b) {
                const Dist& w = *b.inner;
                switch (b.kind) {
                    case BiasKind::size:
                        return raw_moment_impl(w, k + 1) / raw_moment_impl(w, 1);
                    case BiasKind::zero: {
                        const Moments mm = moments(w);
                        return (raw_moment_impl(w, k + 2) - mm.mean * raw_moment_impl(w, k + 1)) /
                               ((k + 1) * mm.variance);
                    }
                    case BiasKind::equilibrium:
                        return raw_moment_impl(w, k + 1) / ((k + 1) * raw_moment_impl(w, 1));
                }
                return 0.0;
            },
            [&](const auto&) { return res(d).table.moment(k); },
        },
        d.variant());
}

// ---- densities -------------------------------------------------------------

double gamma_density(double r, double alpha, double x) {
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        if (r < 1.0) return std::numeric_limits<double>::infinity();
        return r == 1.0 ? alpha : 0.0;
    }
    return std::exp(r * std::log(alpha) + (r - 1.0) * std::log(x) - alpha * x - special::log_gamma(r));
}

double continuous_density(const Dist& d, double x) {
    return std::visit(
        Overloaded{
            [&](const family::Gamma& g) { return gamma_density(g.r, g.alpha, x); },
            [&](const family::Exponential& e) { return gamma_density(1.0, e.alpha, x); },
            [&](const family::Uniform& u) { return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
            [&](const family::GammaLevyJump& l) {
                return x >= l.delta ? std::exp(-x) / (special::expint_e1(l.delta) * x) : 0.0;
            },
            [&](const family::Scaled& s) { return continuous_density(*s.inner, x / s.c) / s.c; },
            [&](const family::Numeric& n) { return n.law->density(x); },
            [&](const family::Biased& b) {
                const Dist& w = *b.inner;
                if (x < 0.0) return 0.0;
                switch (b.kind) {
                    case BiasKind::size:
                        return x * continuous_density(w, x) / raw_moment_impl(w, 1);
                    case BiasKind::zero: {
                        const Moments m = moments(w);
                        return std::max(0.0, zero_tail(w, m.mean, x)) / m.variance;
                    }
                    case BiasKind::equilibrium:
                        return survival(w, x) / raw_moment_impl(w, 1);
                }
                return 0.0;
            },
            [&](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, family::Convolution> ||
                              std::is_same_v<T, family::CompoundPoisson>) {
                    const Resolved& r = res(d);
                    if (r.form == Resolved::Form::grid) return r.grid->density(x);
                    if (r.form == Resolved::Form::shift_mix) {
                        double s = 0.0;
                        for (const Atom& a : r.table.atoms()) s += a.p * continuous_density(*r.continuous, x - a.x);
                        return s;
                    }
                }
                return 0.0;
            },
        },
        d.variant());
}

// ---- atoms / breakpoints -----------------------------------------------------

std::vector<Atom> atoms_impl(const Dist& d) {
    return std::visit(
        Overloaded{
            [&](const family::Scaled& s) {
                std::vector<Atom> out = atoms_impl(*s.inner);
                for (Atom& a : out) a.x *= s.c;
                return out;
            },
            [&](const family::Biased& b) {
                std::vector<Atom> out;
                if (b.kind != BiasKind::size) return out;
                const double mu = raw_moment_impl(*b.inner, 1);
                for (const Atom& a : atoms_impl(*b.inner))
                    if (a.x > 0.0) out.push_back({a.x, a.x * a.p / mu});
                return out;
            },
            [&](const family::Numeric& n) {
                auto s = n.law->atoms().atoms();
                return std::vector<Atom>(s.begin(), s.end());
            },
            [&](const auto& f) -> std::vector<Atom> {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, family::Gamma> || std::is_same_v<T, family::Exponential> ||
                              std::is_same_v<T, family::Uniform> ||
                              std::is_same_v<T, family::GammaLevyJump>) {
                    return {};
                } else {
                    const Resolved& r = res(d);
                    switch (r.form) {
                        case Resolved::Form::atoms: {
                            auto s = r.table.atoms();
                            return {s.begin(), s.end()};
                        }
                        case Resolved::Form::grid: {
                            auto s = r.grid->atoms().atoms();
                            return {s.begin(), s.end()};
                        }
                        case Resolved::Form::shift_mix: {
                            const std::vector<Atom> inner = atoms_impl(*r.continuous);
                            std::vector<Atom> out;
                            for (const Atom& a : r.table.atoms())
                                for (const Atom& b : inner) out.push_back({a.x + b.x, a.p * b.p});
                            AtomTable t(std::move(out));
                            auto s = t.atoms();
                            return {s.begin(), s.end()};
                        }
                        case Resolved::Form::direct:
                            break;
                    }
                    return {};
                }
            },
        },
        d.variant());
}

void breakpoints_impl(const Dist& d, double lo, double hi, std::vector<double>& out);
double lower_support_impl(const Dist& d);

// Kinks a tabulated law inherits from its ingredients. A k-fold sum of
// densities with a jump is C^{k-2} there, so a few folds suffice.
std::vector<double> structural_kinks(const Dist& d, double hi) {
    constexpr std::size_t kCap = 256;
    constexpr int kFolds = 4;
    std::vector<double> out;
    auto dedupe = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::fabs(a - b) <= 1e-12 * (1 + std::fabs(b)); }),
                v.end());
    };
    if (const auto* cp = d.as<family::CompoundPoisson>()) {
        std::vector<double> base;
        breakpoints_impl(*cp->jump, 0.0, hi, base);
        base.push_back(lower_support_impl(*cp->jump));
        dedupe(base);
        for (double b : base) {
            if (!(b > 0.0)) continue;
            for (int k = 1; k <= kFolds && k * b <= hi && out.size() < kCap; ++k) out.push_back(k * b);
        }
    } else if (const auto* conv = d.as<family::Convolution>()) {
        std::vector<double> sums{0.0};
        for (const DistPtr& part : conv->parts) {
            std::vector<double> bp;
            breakpoints_impl(*part, 0.0, hi, bp);
            bp.push_back(lower_support_impl(*part));
            dedupe(bp);
            std::vector<double> next;
            for (double s0 : sums)
                for (double b : bp)
                    if (s0 + b <= hi) next.push_back(s0 + b);
            dedupe(next);
            if (next.size() > kCap) next.resize(kCap);
            sums = std::move(next);
        }
        out = std::move(sums);
    }
    dedupe(out);
    return out;
}

void breakpoints_impl(const Dist& d, double lo, double hi, std::vector<double>& out) {
    auto keep = [&](double x) {
        if (x >= lo && x <= hi) out.push_back(x);
    };
    auto table_points = [&](const AtomTable& t) {
        auto s = t.atoms();
        auto it = std::lower_bound(s.begin(), s.end(), lo, [](const Atom& a, double v) { return a.x < v; });
        for (; it != s.end() && it->x <= hi; ++it) out.push_back(it->x);
    };
    std::visit(
        Overloaded{
            [&](const family::Gamma&) { keep(0.0); },
            [&](const family::Exponential&) { keep(0.0); },
            [&](const family::Uniform& u) {
                keep(u.a);
                keep(u.b);
            },
            [&](const family::GammaLevyJump& l) { keep(l.delta); },
            [&](const family::Scaled& s) {
                std::vector<double> inner;
                breakpoints_impl(*s.inner, lo / s.c, hi / s.c, inner);
                for (double x : inner) keep(x * s.c);
            },
            [&](const family::Numeric& n) {
                table_points(n.law->atoms());
                keep(n.law->lower());
                keep(n.law->upper());
            },
            [&](const family::Biased& b) {
                breakpoints_impl(*b.inner, lo, hi, out);
                if (b.kind == BiasKind::equilibrium) keep(0.0);
            },
            [&](const auto&) {
                {
                    const Resolved& r = res(d);
                    switch (r.form) {
                        case Resolved::Form::atoms:
                            table_points(r.table);
                            break;
                        case Resolved::Form::grid:
                            table_points(r.grid->atoms());
                            keep(r.grid->lower());
                            keep(r.grid->upper());
                            for (double x : structural_kinks(d, hi)) keep(x);
                            break;
                        case Resolved::Form::shift_mix:
                            for (const Atom& a : r.table.atoms()) {
                                if (a.x > hi) break;
                                std::vector<double> inner;
                                breakpoints_impl(*r.continuous, lo - a.x, hi - a.x, inner);
                                for (double x : inner) keep(x + a.x);
                                keep(a.x);
                            }
                            break;
                        case Resolved::Form::direct:
                            break;
                    }
                }
            },
        },
        d.variant());
}

double lower_support_impl(const Dist& d) {
    return std::visit(
        Overloaded{
            [&](const family::Uniform& u) { return u.a; },
            [&](const family::Logarithmic&) { return 1.0; },
            [&](const family::GammaLevyJump& l) { return l.delta; },
            [&](const family::Scaled& s) { return s.c * lower_support_impl(*s.inner); },
            [&](const family::Convolution& c) {
                double s = 0.0;
                for (const DistPtr& p : c.parts) s += lower_support_impl(*p);
                return s;
            },
            [&](const family::Discrete&) { return res(d).table.atoms().front().x; },
            [&](const family::Empirical& e) { return e.samples.front(); },
            [&](const family::Numeric& n) {
                const AtomTable& t = n.law->atoms();
                double lo = n.law->lower();
                if (!t.empty()) lo = std::min(lo, t.atoms().front().x);
                return lo;
            },
            [&](const family::Biased& b) {
                return b.kind == BiasKind::equilibrium ? 0.0 : lower_support_impl(*b.inner);
            },
            [&](const auto&) { return 0.0; },
        },
        d.variant());
}

double upper_tail(const Dist& d, double x) {
    return std::max(0.0, upper_moment(d, 1, x) - x * upper_moment(d, 0, x));
}

// Continuous-CDF bracket search: smallest x with cdf(x) >= u.
double generic_quantile(const Dist& d, double u) {
    double lo = lower_support_impl(d);
    if (cdf(d, lo) >= u) return lo;
    const Moments m = moments(d);
    double step = std::sqrt(m.variance) + m.mean + 1e-12;
    double hi = lo + step;
    while (cdf(d, hi) < u) {
        lo = hi;
        step *= 2.0;
        hi += step;
        if (!std::isfinite(hi)) throw NumericalError("quantile bracket diverged");
    }
    const double resolution = 4.0 * std::numeric_limits<double>::epsilon();
    if (atom_mass(d) == 0.0) {
        // Newton steps kept inside the bracket; bisection when they leave it.
        double x = 0.5 * (lo + hi);
        for (int i = 0; i < 200 && hi - lo > resolution * std::max(1.0, hi); ++i) {
            const double f = cdf(d, x) - u;
            if (f >= 0.0)
                hi = x;
            else
                lo = x;
            const double dens = density_or_mass(d, x);
            double next = dens > 0.0 && std::isfinite(dens) ? x - f / dens : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::fabs(next - x) <= resolution * std::max(1.0, std::fabs(x))) {
                // Settle on the side where cdf >= u.
                return cdf(d, next) >= u ? next : hi;
            }
            x = next;
        }
        return hi;
    }
    for (int i = 0; i < 200 && hi - lo > resolution * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(d, mid) >= u)
            hi = mid;
        else
            lo = mid;
    }
    {
        for (const Atom& a : atoms_impl(d))
            if (a.x >= lo && a.x <= hi) return a.x;
    }
    return hi;
}

double gamma_quantile(double r, double alpha, double u) {
    // Bracketed Newton on P(r, y) = u in y = alpha x.
    double lo = 0.0;
    double hi = std::max(1.0, r);
    while (special::gamma_p(r, hi) < u) {
        lo = hi;
        hi *= 2.0;
    }
    double y = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double f = special::gamma_p(r, y) - u;
        if (f > 0.0)
            hi = y;
        else
            lo = y;
        const double dens = gamma_density(r, 1.0, y);
        double next = (dens > 0.0 && std::isfinite(dens)) ? y - f / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - y) <= 1e-15 * std::max(1e-300, y) || hi - lo <= 1e-15 * hi) {
            y = next;
            break;
        }
        y = next;
    }
    return y / alpha;
}

}  // namespace

Moments moments(const Dist& d) {
    Moments out;
    out.mean = raw_moment_impl(d, 1);
    out.variance = std::visit(
        Overloaded{
            [&](const family::Gamma& g) { return g.r / (g.alpha * g.alpha); },
            [&](const family::Exponential& e) { return 1.0 / (e.alpha * e.alpha); },
            [&](const family::Uniform& u) { return (u.b - u.a) * (u.b - u.a) / 12.0; },
            [&](const family::Poisson& p) { return p.lambda; },
            [&](const family::Geometric& g) { return (1.0 - g.p) / (g.p * g.p); },
            [&](const family::NegativeBinomial& nb) { return nb.kappa * (1.0 - nb.p) / (nb.p * nb.p); },
            [&](const family::Scaled& s) { return s.c * s.c * moments(*s.inner).variance; },
            [&](const family::Convolution& c) {
                double v = 0.0;
                for (const DistPtr& p : c.parts) v += moments(*p).variance;
                return v;
            },
            [&](const family::CompoundPoisson& cp) { return cp.lambda * raw_moment_impl(*cp.jump, 2); },
            [&](const auto&) { return std::max(0.0, raw_moment_impl(d, 2) - out.mean * out.mean); },
        },
        d.variant());
    if (!std::isfinite(out.mean) || !std::isfinite(out.variance))
        throw NumericalError("moments are not finite");
    return out;
}

double raw_moment(const Dist& d, int k) { return raw_moment_impl(d, k); }

double lower_moment(const Dist& d, int k, double x) { return partial_moment(d, k, x, false); }
double upper_moment(const Dist& d, int k, double x) { return partial_moment(d, k, x, true); }

double cdf(const Dist& d, double x) { return std::clamp(lower_moment(d, 0, x), 0.0, 1.0); }

double cdf_left(const Dist& d, double x) { return std::clamp(cdf(d, x) - point_mass(d, x), 0.0, 1.0); }

double survival(const Dist& d, double x) { return std::clamp(upper_moment(d, 0, x), 0.0, 1.0); }

double density_or_mass(const Dist& d, double x) {
    const double m = point_mass(d, x);
    if (m > 0.0) return m;
    return continuous_density(d, x);
}

double quantile(const Dist& d, double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
    return std::visit(
        Overloaded{
            [&](const family::Gamma& g) { return gamma_quantile(g.r, g.alpha, u); },
            [&](const family::Exponential& e) { return -std::log1p(-u) / e.alpha; },
            [&](const family::Uniform& un) { return un.a + u * (un.b - un.a); },
            [&](const family::Scaled& s) { return s.c * quantile(*s.inner, u); },
            [&](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, family::Poisson> || std::is_same_v<T, family::Geometric> ||
                              std::is_same_v<T, family::NegativeBinomial> ||
                              std::is_same_v<T, family::Logarithmic> || std::is_same_v<T, family::Discrete> ||
                              std::is_same_v<T, family::Empirical> || std::is_same_v<T, family::Convolution> ||
                              std::is_same_v<T, family::CompoundPoisson>) {
                    const Resolved& r = res(d);
                    if (r.form == Resolved::Form::atoms) return r.table.quantile(u);
                }
                return generic_quantile(d, u);
            },
        },
        d.variant());
}

std::vector<Atom> atoms(const Dist& d) { return atoms_impl(d); }

double atom_mass(const Dist& d) {
    double s = 0.0;
    for (const Atom& a : atoms_impl(d)) s += a.p;
    return s;
}

std::vector<double> breakpoints(const Dist& d, double lo, double hi) {
    std::vector<double> out;
    breakpoints_impl(d, lo, hi, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double lower_support(const Dist& d) { return lower_support_impl(d); }

double upper_truncation(const Dist& d, double eps) {
    if (!(eps > 0.0)) throw DomainError("truncation tolerance must be > 0");
    const Moments m = moments(d);
    double lo = lower_support_impl(d);
    if (upper_tail(d, lo) <= eps) return lo;
    double step = std::sqrt(m.variance) + m.mean + 1e-12;
    double hi = std::max(lo, m.mean) + step;
    while (upper_tail(d, hi) > eps) {
        lo = hi;
        step *= 2.0;
        hi += step;
        if (!std::isfinite(hi)) throw NumericalError("upper truncation diverged");
    }
    for (int i = 0; i < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (upper_tail(d, mid) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double representation_error(const Dist& d) {
    return std::visit(
        Overloaded{
            [&](const family::Numeric& n) { return n.law->l1_error(); },
            [&](const family::Scaled& s) { return s.c * representation_error(*s.inner); },
            [&](const family::Convolution& c) {
                const Resolved& r = res(d);
                if (r.form == Resolved::Form::grid) return r.grid->l1_error();
                double e = 0.0;
                for (const DistPtr& p : c.parts) e += representation_error(*p);
                if (r.form == Resolved::Form::shift_mix) e += representation_error(*r.continuous);
                return e;
            },
            [&](const family::CompoundPoisson& cp) {
                const Resolved& r = res(d);
                if (r.form == Resolved::Form::grid) return r.grid->l1_error();
                return cp.lambda * representation_error(*cp.jump);
            },
            [&](const family::Biased& b) {
                const double e = representation_error(*b.inner);
                if (e == 0.0) return 0.0;
                const Moments m = moments(*b.inner);
                const double scale = b.kind == BiasKind::zero ? m.variance : m.mean;
                return e * (1.0 + upper_truncation(*b.inner, 1e-12) / scale);
            },
            [&](const auto&) { return 0.0; },
        },
        d.variant());
}

double cdf_tolerance(const Dist& d) {
    return std::visit(
        Overloaded{
            [&](const family::Numeric& n) { return n.law->tol(); },
            [&](const family::Scaled& s) { return cdf_tolerance(*s.inner); },
            [&](const family::Biased& b) {
                const double t = cdf_tolerance(*b.inner);
                if (t == 0.0) return 0.0;
                // The transformed CDF is an integral of the inner law's CDF
                // error; its scale is set by the same support length.
                return representation_error(d) + t;
            },
            [&](const auto&) -> double {
                const Resolved& r = res(d);
                switch (r.form) {
                    case Resolved::Form::grid:
                        return r.grid->tol();
                    case Resolved::Form::shift_mix:
                        return cdf_tolerance(*r.continuous);
                    default:
                        return 0.0;
                }
            },
        },
        d.variant());
}

}  // namespace steinlab
