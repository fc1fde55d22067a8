#include "steinlab/numeric_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <string>

#include <fftw3.h>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"

namespace steinlab {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlX = {-0.9602898564975363, -0.7966664774136267,
                                        -0.5255324099163290, -0.1834346424956498,
                                        0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW = {0.1012285362903763, 0.2223810344533745,
                                        0.3137066458778873, 0.3626837833783620,
                                        0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

constexpr int kPrefixOrder = 8;

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return d;
    }
    std::vector<double> h(n - 1);
    std::vector<double> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        s[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double e = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (e * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::fabs(e) > 3.0 * std::fabs(s0)) return 3.0 * s0;
        return e;
    };
    d[0] = end_slope(h[0], h[1], s[0], s[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
    return d;
}

// E[X^k 1{a < X <= b}] taken from whichever tail keeps the difference small.
double cell_moment(const Dist& d, int k, double a, double b, double pivot) {
    if (a < pivot) return lower_moment(d, k, b) - lower_moment(d, k, a);
    return upper_moment(d, k, a) - upper_moment(d, k, b);
}

// Largest common spacing of the positive kinks, if they sit on a lattice.
double kink_base(const std::vector<double>& kinks) {
    double base = 0.0;
    for (double k : kinks) {
        if (k > 0.0 && (base == 0.0 || k < base)) base = k;
    }
    if (base == 0.0) return 0.0;
    for (double k : kinks) {
        if (k <= 0.0) continue;
        const double ratio = k / base;
        if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) return 0.0;
    }
    return base;
}

double aligned_step(double target, double base) {
    if (base <= 0.0) return target;
    const double m = std::ceil(base / target - 1e-9);
    return base / std::max(1.0, m);
}

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

using Spectrum = std::vector<std::complex<double>>;

Spectrum forward(std::vector<double> x) {
    const int n = static_cast<int>(x.size());
    Spectrum out(x.size() / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(n, x.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<double> inverse(Spectrum s, std::size_t n) {
    std::vector<double> out(n);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(s.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

// Mass of d moved onto the lattice k h (k < n) by splitting each cell's
// mass between its endpoints so the cell mean is preserved. Returns the
// mass beyond the last node in `lost`.
std::vector<double> hat_masses(const Dist& d, double h, std::size_t n, double& lost) {
    std::vector<double> q(n, 0.0);
    const double pivot = moments(d).mean;
    const double top = upper_truncation(d, 1e-18 * std::max(1.0, pivot));
    q[0] = cdf(d, 0.0);
    const auto cells = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(top / h)) + 1);
    for (std::size_t j = 0; j < cells; ++j) {
        const double lo = static_cast<double>(j) * h;
        const double hi = static_cast<double>(j + 1) * h;
        const double m0 = cell_moment(d, 0, lo, hi, pivot);
        if (m0 <= 0.0) continue;
        const double m1 = cell_moment(d, 1, lo, hi, pivot);
        const double right = std::clamp((m1 - lo * m0) / h, 0.0, m0);
        q[j] += m0 - right;
        q[j + 1] += right;
    }
    lost = survival(d, static_cast<double>(n - 1) * h);
    return q;
}

std::size_t next_pow2(double x) {
    std::size_t n = 1024;
    while (static_cast<double>(n) < x) n *= 2;
    return n;
}

// Lattice pmf of a law given its spectrum builder; grows the lattice until
// the top quarter (a proxy for wrap-around) holds no appreciable mass.
template <class Build>
std::vector<double> lattice_pmf(Build build, double h, double reach, const GridOptions& options) {
    std::size_t n = next_pow2(reach / h);
    for (;;) {
        if (n > options.max_nodes * 4) {
            throw NumericalError("lattice exceeds " + std::to_string(options.max_nodes * 4) + " points");
        }
        double lost = 0.0;
        std::vector<double> p = build(n, lost);
        double top = 0.0;
        for (std::size_t k = 3 * n / 4; k < n; ++k) top += p[k];
        if (top <= 1e-2 * options.tail_mass && lost <= 1e-2 * options.tail_mass) return p;
        n *= 2;
    }
}

// Continuous-part CDF at the half-lattice nodes (k + 1/2) h from a lattice
// pmf: the cumulative lattice mass through k h is second-order accurate
// there.
std::vector<double> half_node_cdf(const std::vector<double>& p) {
    std::vector<double> g(p.size());
    double run = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        run += std::max(0.0, p[k]);
        g[k] = std::min(1.0, run);
    }
    return g;
}

// Combines lattice CDFs at steps h (coarse) and h/2 (fine) by Richardson
// extrapolation at the coarse half-nodes and packages the law. The fine
// values are brought onto the coarse nodes by 4-point interpolation.
NumericLaw assemble(const std::vector<double>& coarse, const std::vector<double>* fine, double h,
                    double atom0, const GridOptions& options) {
    std::size_t n = coarse.size();
    while (n > 2 && 1.0 - coarse[n - 2] <= options.tail_mass) --n;
    std::vector<double> nodes{0.0};
    std::vector<double> values{0.0};
    double tol = 0.0;
    double l1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double v = coarse[k];
        if (fine) {
            const auto& f = *fine;
            const std::size_t j = 2 * k;
            auto at = [&](std::ptrdiff_t i) {
                if (i < 0) return 0.0;
                return f[std::min<std::size_t>(static_cast<std::size_t>(i), f.size() - 1)];
            };
            const auto jj = static_cast<std::ptrdiff_t>(j);
            double fv = (-at(jj - 1) + 9.0 * at(jj) + 9.0 * at(jj + 1) - at(jj + 2)) / 16.0;
            if (k == 0) fv = 0.5 * (at(0) + at(1));
            const double e = std::fabs(fv - v) / 3.0;
            v = (4.0 * fv - v) / 3.0;
            tol = std::max(tol, e);
            l1 += e * h;
        }
        nodes.push_back((static_cast<double>(k) + 0.5) * h);
        values.push_back(std::clamp(v - atom0, 0.0, 1.0 - atom0));
    }
    std::vector<Atom> atoms;
    if (atom0 > 0.0) atoms.push_back({0.0, atom0});
    return NumericLaw(std::move(nodes), std::move(values), std::move(atoms), tol + options.tail_mass, l1);
}

double choose_step(double target, const std::vector<double>& kinks) {
    return aligned_step(target, kink_base(kinks));
}
}  // namespace

NumericLaw::NumericLaw(std::vector<double> nodes, std::vector<double> continuous_cdf,
                       std::vector<Atom> atoms, double tol, double l1_error)
    : nodes_(std::move(nodes)),
      values_(std::move(continuous_cdf)),
      atoms_(std::move(atoms)),
      tol_(tol),
      l1_error_(l1_error) {
    if (nodes_.size() < 2 || nodes_.size() != values_.size()) {
        throw DomainError("numeric law: need >= 2 nodes with one CDF value each");
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) throw DomainError("numeric law: nodes must increase");
    }
    if (!(tol >= 0.0)) throw DomainError("numeric law: tol must be >= 0");
    const double cont_cap = std::max(0.0, 1.0 - atoms_.total_mass());
    double running = 0.0;
    for (double& v : values_) {
        if (!std::isfinite(v)) throw DomainError("numeric law: CDF values must be finite");
        if (v < -tol - 1e-12 || v > 1.0 + tol + 1e-12) {
            throw DomainError("numeric law: CDF values must lie in [0, 1] up to tol");
        }
        v = std::clamp(std::max(v, running), 0.0, cont_cap);
        running = v;
    }
    if (atoms_.total_mass() > 1.0 + tol + 1e-12) {
        throw DomainError("numeric law: atom mass exceeds 1");
    }
    tail_ = std::max(0.0, 1.0 - atoms_.total_mass() - values_.back());
    slopes_ = pchip_slopes(nodes_, values_);
    prefix_.assign(kPrefixOrder + 1, std::vector<double>(nodes_.size(), 0.0));
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        for (int k = 0; k <= kPrefixOrder; ++k) {
            prefix_[k][i + 1] = prefix_[k][i] + cell_moment(i, k, nodes_[i], nodes_[i + 1]);
        }
    }
}

double NumericLaw::hermite(std::size_t cell, double x) const {
    const double h = nodes_[cell + 1] - nodes_[cell];
    const double t = (x - nodes_[cell]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values_[cell] + (t3 - 2 * t2 + t) * h * slopes_[cell] +
           (-2 * t3 + 3 * t2) * values_[cell + 1] + (t3 - t2) * h * slopes_[cell + 1];
}

double NumericLaw::cell_moment(std::size_t cell, int k, double a, double b) const {
    if (!(b > a)) return 0.0;
    const double x0 = nodes_[cell];
    const double h = nodes_[cell + 1] - x0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < kGlX.size(); ++q) {
        const double x = mid + half * kGlX[q];
        const double t = (x - x0) / h;
        const double dens = ((6 * t * t - 6 * t) * values_[cell] + (3 * t * t - 4 * t + 1) * h * slopes_[cell] +
                             (-6 * t * t + 6 * t) * values_[cell + 1] + (3 * t * t - 2 * t) * h * slopes_[cell + 1]) /
                            h;
        s += kGlW[q] * std::pow(x, k) * dens;
    }
    return s * half;
}

double NumericLaw::continuous_part(double x) const {
    if (x <= nodes_.front()) return 0.0;
    if (x >= nodes_.back()) return values_.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::clamp(hermite(cell, x), values_[cell], values_[cell + 1]);
}

double NumericLaw::cdf(double x) const {
    if (x >= nodes_.back()) return 1.0;
    return std::min(1.0, continuous_part(x) + atoms_.lower_moment(0, x));
}

double NumericLaw::density(double x) const {
    if (x < nodes_.front() || x >= nodes_.back()) return 0.0;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double h = nodes_[cell + 1] - nodes_[cell];
    const double t = (x - nodes_[cell]) / h;
    return std::max(0.0, ((6 * t * t - 6 * t) * values_[cell] + (3 * t * t - 4 * t + 1) * h * slopes_[cell] +
                          (-6 * t * t + 6 * t) * values_[cell + 1] + (3 * t * t - 2 * t) * h * slopes_[cell + 1]) /
                             h);
}

double NumericLaw::lower_moment(int k, double x) const {
    double s = atoms_.lower_moment(k, x);
    if (x <= nodes_.front()) return s;
    if (x >= nodes_.back()) {
        const std::size_t last = nodes_.size() - 1;
        const double cont = k <= kPrefixOrder
                                ? prefix_[k][last]
                                : [&] {
                                      double t = 0.0;
                                      for (std::size_t i = 0; i < last; ++i) t += cell_moment(i, k, nodes_[i], nodes_[i + 1]);
                                      return t;
                                  }();
        return s + cont + tail_ * std::pow(nodes_.back(), k);
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    double cont = 0.0;
    if (k <= kPrefixOrder) {
        cont = prefix_[k][cell];
    } else {
        for (std::size_t i = 0; i < cell; ++i) cont += cell_moment(i, k, nodes_[i], nodes_[i + 1]);
    }
    return s + cont + cell_moment(cell, k, nodes_[cell], x);
}

double NumericLaw::moment(int k) const { return lower_moment(k, nodes_.back()); }

double NumericLaw::upper_moment(int k, double x) const {
    if (x >= nodes_.back()) return atoms_.upper_moment(k, x);
    return std::max(0.0, moment(k) - lower_moment(k, x));
}

NumericLaw compound_poisson_law(double lambda, const Dist& jump, const GridOptions& options) {
    if (!(lambda > 0.0)) throw DomainError("compound Poisson: rate must be > 0");
    const double m1 = raw_moment(jump, 1);
    const double m2 = raw_moment(jump, 2);
    const double mean = lambda * m1;
    const double sd = std::sqrt(lambda * m2);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
        throw DomainError("compound Poisson: jump law needs a finite positive second moment");
    }
    const double g0 = std::exp(-lambda * (1.0 - cdf(jump, 0.0)));

    double h = options.step;
    if (!(h > 0.0)) {
        std::vector<double> kinks = breakpoints(jump, 0.0, std::max(1.0, 4.0 * sd));
        const double low = lower_support(jump);
        if (low > 0.0) kinks.push_back(low);
        h = choose_step(std::min(sd, std::max(mean, sd)) / 2000.0, kinks);
    }
    const double reach = mean + 12.0 * sd;
    auto run = [&](double step) {
        return half_node_cdf(lattice_pmf(
            [&](std::size_t n, double& lost) {
                std::vector<double> q = hat_masses(jump, step, n, lost);
                lost *= lambda;
                Spectrum s = forward(std::move(q));
                for (auto& z : s) z = std::exp(lambda * (z - 1.0));
                return inverse(std::move(s), n);
            },
            step, reach, options));
    };
    const std::vector<double> coarse = run(h);
    if (!options.extrapolate) return assemble(coarse, nullptr, h, g0, options);
    const std::vector<double> fine = run(0.5 * h);
    return assemble(coarse, &fine, h, g0, options);
}

NumericLaw convolution_law(const std::vector<DistPtr>& parts, const GridOptions& options) {
    if (parts.size() < 2) throw DomainError("convolution grid: need at least two parts");
    double reach = 0.0;
    double atom0 = 1.0;
    double sd = 0.0;
    std::vector<double> kinks;
    for (const DistPtr& p : parts) {
        const double top = upper_truncation(*p, options.tail_mass / static_cast<double>(parts.size()));
        reach += top;
        atom0 *= cdf(*p, 0.0);
        sd += moments(*p).variance;
        for (double k : breakpoints(*p, 0.0, top)) kinks.push_back(k);
        kinks.push_back(lower_support(*p));
    }
    sd = std::sqrt(sd);
    const double h = options.step > 0.0 ? options.step : choose_step(std::min(sd, reach) / 2000.0, kinks);
    auto run = [&](double step) {
        return half_node_cdf(lattice_pmf(
            [&](std::size_t n, double& lost) {
                Spectrum acc;
                lost = 0.0;
                for (const DistPtr& p : parts) {
                    double part_lost = 0.0;
                    Spectrum s = forward(hat_masses(*p, step, n, part_lost));
                    lost += part_lost;
                    if (acc.empty()) {
                        acc = std::move(s);
                    } else {
                        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= s[i];
                    }
                }
                return inverse(std::move(acc), n);
            },
            step, reach, options));
    };
    const std::vector<double> coarse = run(h);
    if (!options.extrapolate) return assemble(coarse, nullptr, h, atom0, options);
    const std::vector<double> fine = run(0.5 * h);
    return assemble(coarse, &fine, h, atom0, options);
}

NumericLaw tabulate(const Dist& d, double tol) {
    if (!(tol > 0.0)) throw DomainError("tabulate: tol must be > 0");
    const double lo = lower_support(d);
    const double hi = std::max(lo + 1e-12, upper_truncation(d, tol * 1e-2));
    const std::vector<Atom> at = atoms(d);
    const AtomTable table(at);
    auto cont = [&](double x) { return std::max(0.0, cdf(d, x) - table.lower_moment(0, x)); };

    std::vector<double> xs;
    constexpr int kInitial = 64;
    for (int i = 0; i <= kInitial; ++i) xs.push_back(lo + (hi - lo) * i / kInitial);
    for (double b : breakpoints(d, lo, hi)) xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a <= 1e-14 * std::max(1.0, std::fabs(a)); }),
             xs.end());

    constexpr std::size_t kMaxNodes = 1 << 16;
    for (int pass = 0; pass < 40; ++pass) {
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = cont(xs[i]);
        NumericLaw trial(xs, ys, at, 1.0);
        std::vector<double> added;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const double mid = 0.5 * (xs[i] + xs[i + 1]);
            if (std::fabs(trial.continuous_part(mid) - cont(mid)) > tol) added.push_back(mid);
        }
        if (added.empty() || xs.size() + added.size() > kMaxNodes) {
            return NumericLaw(xs, ys, at, tol);
        }
        xs.insert(xs.end(), added.begin(), added.end());
        std::sort(xs.begin(), xs.end());
    }
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = cont(xs[i]);
    return NumericLaw(xs, ys, at, tol);
}

}  // namespace steinlab
