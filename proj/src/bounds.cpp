#include "steinlab/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "steinlab/error.hpp"
#include "steinlab/rng.hpp"
#include "steinlab/special.hpp"

namespace steinlab {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_theta(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("theta must be >= 0 and finite");
}

// log of alpha / Gamma(r) ((r - 1)/e)^{r - 1}, r >= 1, with 0^0 = 1. Both
// factors overflow for large r while their ratio stays moderate.
double log_density_max(double r, double alpha) {
    const double mode = r == 1.0 ? 0.0 : (r - 1.0) * (std::log(r - 1.0) - 1.0);
    return std::log(alpha) - special::log_gamma(r) + mode;
}

}  // namespace

GammaParams gamma_params_from_moments(double mu, double sigma2) {
    require_positive(mu, "mean");
    require_positive(sigma2, "variance");
    return {mu * mu / sigma2, mu / sigma2};
}

double wasserstein_bound(double mu, double sigma2, double theta) {
    require_theta(theta);
    const GammaParams g = gamma_params_from_moments(mu, sigma2);
    return 8.0 * std::sqrt(3.0 * mu / (g.r + 2.0)) * std::sqrt(theta) + 8.0 * g.r / (g.r + 2.0) * theta;
}

double density_max(double r, double alpha) {
    require_positive(alpha, "alpha");
    if (!(r >= 1.0)) throw DomainError("density maximum formula needs r >= 1");
    return std::exp(log_density_max(r, alpha));
}

KolmogorovConstants kolmogorov_constants(double r, double alpha) {
    require_positive(r, "r");
    require_positive(alpha, "alpha");
    const double mu = r / alpha;
    KolmogorovConstants c;
    if (r < 1.0) {
        // Work in logs: alpha^r / Gamma(r) can be extreme for small r.
        const double log_ratio = r * std::log(alpha) - special::log_gamma(r);
        c.a = (0.5 + 1.0 / r) * std::pow(48.0 * mu / (r + 2.0), r / (r + 2.0)) *
              std::exp(2.0 / (r + 2.0) * log_ratio);
        c.b = 8.0 * alpha * std::pow(mu / (r + 2.0), (r + 1.0) / (r + 2.0)) *
              std::exp((log_ratio - std::log(48.0)) / (r + 2.0));
    } else {
        const double m = std::exp(log_density_max(r, alpha));
        c.a = 3.0 * std::cbrt(6.0 * mu / (r + 2.0)) * std::pow(m, 2.0 / 3.0);
        c.b = 4.0 * alpha * std::pow(mu / (r + 2.0), 2.0 / 3.0) * std::cbrt(m / 6.0);
    }
    return c;
}

double kolmogorov_bound(double mu, double sigma2, double theta) {
    require_theta(theta);
    const GammaParams g = gamma_params_from_moments(mu, sigma2);
    const KolmogorovConstants c = kolmogorov_constants(g.r, g.alpha);
    const double s = std::min(g.r, 1.0);
    return c.a * std::pow(theta, s / (s + 2.0)) + c.b * std::pow(theta, (s + 1.0) / (s + 2.0));
}

double concentration_eps(double r, double alpha, double delta) {
    require_positive(r, "r");
    require_positive(alpha, "alpha");
    require_positive(delta, "delta");
    if (r < 1.0) return std::exp(r * std::log(alpha * delta) - special::log_gamma(r + 1.0));
    return density_max(r, alpha) * delta;
}

double gamma_pair_bound(double r1, double alpha1, double r2, double alpha2) {
    require_positive(r1, "r1");
    require_positive(alpha1, "alpha1");
    require_positive(r2, "r2");
    require_positive(alpha2, "alpha2");
    return std::fabs(r1 - r2) / std::max(alpha1, alpha2) + std::max(r1, r2) * std::fabs(1.0 / alpha1 - 1.0 / alpha2);
}

BoundReport theorem_bounds(double mu, double sigma2, double theta) {
    BoundReport b;
    const GammaParams g = gamma_params_from_moments(mu, sigma2);
    b.mu = mu;
    b.sigma2 = sigma2;
    b.r = g.r;
    b.alpha = g.alpha;
    b.theta = theta;
    b.w_bound = wasserstein_bound(mu, sigma2, theta);
    b.k_bound = kolmogorov_bound(mu, sigma2, theta);
    const KolmogorovConstants c = kolmogorov_constants(g.r, g.alpha);
    b.a_const = c.a;
    b.b_const = c.b;
    b.regime = g.r < 1.0 ? "r<1" : "r>=1";
    return b;
}

nlohmann::json to_json(const BoundReport& b) {
    return {{"mu", b.mu},           {"sigma2", b.sigma2},   {"r", b.r},
            {"alpha", b.alpha},     {"theta", b.theta},     {"w_bound", b.w_bound},
            {"k_bound", b.k_bound}, {"a_const", b.a_const}, {"b_const", b.b_const},
            {"regime", b.regime}};
}

Example1Values example1_values(double delta) {
    require_positive(delta, "delta");
    return {delta * (1.0 + 0.5 * delta) / (1.0 + delta), 8.0 * std::sqrt(delta) + 17.0 * delta / 3.0,
            -std::expm1(-delta)};
}

NbBounds nb_bounds(double kappa, double p) {
    require_positive(kappa, "kappa");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    const double r = kappa * (1.0 - p);
    NbBounds out;
    out.theta = 0.5 * p;
    out.w_bound = wasserstein_bound(r, r, out.theta);
    out.k_bound = kolmogorov_bound(r, r, out.theta);
    return out;
}

double nb_sum_bound(double kappa, double p, double nu) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("nu must be >= 0 and finite");
    return nb_bounds(kappa, p).w_bound + nu * std::sqrt(kappa * (1.0 - p) * p) + p * kappa;
}

DistanceEstimate conv_theta(const std::vector<GammaComponent>& parts, std::uint64_t seed, std::size_t n,
                            bool shared_y) {
    if (parts.empty()) throw DomainError("need at least one gamma component");
    if (n == 0) throw DomainError("sample count must be >= 1");
    std::vector<double> c1;
    std::vector<double> c2;
    double t1 = 0.0;
    double t2 = 0.0;
    for (const GammaComponent& g : parts) {
        require_positive(g.r, "r");
        require_positive(g.alpha, "alpha");
        t1 += g.r / g.alpha;
        t2 += g.r / (g.alpha * g.alpha);
        c1.push_back(t1);
        c2.push_back(t2);
    }
    auto pick = [](const std::vector<double>& cum, double u) {
        const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
        return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
    };
    Rng rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i1 = pick(c1, rng.uniform());
        const std::size_t i2 = pick(c2, rng.uniform());
        double d = 0.0;
        if (!(shared_y && i1 == i2)) {
            const double y1 = -std::log(rng.uniform_open()) / parts[i1].alpha;
            const double y2 = -std::log(rng.uniform_open()) / parts[i2].alpha;
            d = std::fabs(y1 - y2);
        }
        sum += d;
        sum_sq += d * d;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    DistanceEstimate out;
    out.value = mean;
    out.metric = Metric::wasserstein;
    out.method = Method::monte_carlo;
    out.n = n;
    out.error = n > 1 ? std::sqrt(std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) / nn) : 0.0;
    return out;
}

}  // namespace steinlab
