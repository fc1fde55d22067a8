#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "steinlab/metrics.hpp"

namespace steinlab {

struct GammaParams {
    double r = 0.0;
    double alpha = 0.0;
};

/// Moment-matched gamma: r = mu^2 / sigma2, alpha = mu / sigma2.
GammaParams gamma_params_from_moments(double mu, double sigma2);

/// d_W(L(W), Gamma(r, alpha)) <= 8 sqrt(3 mu / (r + 2)) Theta^{1/2} + 8 r Theta / (r + 2).
double wasserstein_bound(double mu, double sigma2, double theta);

struct KolmogorovConstants {
    double a = 0.0;
    double b = 0.0;
};

/// The constants a_{r,alpha}, b_{r,alpha}, piecewise in r < 1 and r >= 1,
/// with mu = r / alpha. Discontinuous across r = 1.
KolmogorovConstants kolmogorov_constants(double r, double alpha);

/// a Theta^{s/(s+2)} + b Theta^{(s+1)/(s+2)} with s = min(r, 1).
double kolmogorov_bound(double mu, double sigma2, double theta);

/// Maximum of the Gamma(r, alpha) density for r >= 1:
/// alpha / Gamma(r) ((r - 1)/e)^{r - 1}, with 0^0 = 1.
double density_max(double r, double alpha);

/// Bound on P(z < Z <= z + delta) for Z ~ Gamma(r, alpha):
/// (alpha delta)^r / Gamma(r + 1) for r < 1, M(r, alpha) delta otherwise.
double concentration_eps(double r, double alpha, double delta);

/// |r1 - r2| / max(alpha1, alpha2) + max(r1, r2) |1/alpha1 - 1/alpha2|.
double gamma_pair_bound(double r1, double alpha1, double r2, double alpha2);

struct BoundReport {
    double mu = 0.0;
    double sigma2 = 0.0;
    double r = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    double w_bound = 0.0;
    double k_bound = 0.0;
    double a_const = 0.0;
    double b_const = 0.0;
    /// "r<1" or "r>=1".
    std::string regime;
};

BoundReport theorem_bounds(double mu, double sigma2, double theta);
nlohmann::json to_json(const BoundReport& b);

/// Gamma-process jump law cut at delta: Theta = delta (1 + delta/2)/(1 + delta),
/// bound 8 sqrt(delta) + 17 delta / 3, exact distance 1 - e^{-delta}.
struct Example1Values {
    double theta = 0.0;
    double w_bound = 0.0;
    double exact = 0.0;
};
Example1Values example1_values(double delta);

/// Rescaled negative binomial against Gamma(kappa (1 - p), 1): Theta = p / 2.
struct NbBounds {
    double theta = 0.0;
    double w_bound = 0.0;
    double k_bound = 0.0;
};
NbBounds nb_bounds(double kappa, double p);

/// nb_bounds(kappa, p).w_bound + nu sqrt(kappa (1 - p) p) + p kappa.
double nb_sum_bound(double kappa, double p, double nu);

struct GammaComponent {
    double r = 0.0;
    double alpha = 0.0;
};

/// Monte Carlo E|Y_{I1} - Y_{I2}| for a sum of independent Gamma(r_i, alpha_i):
/// P(I1 = i) proportional to r_i / alpha_i, P(I2 = i) to r_i / alpha_i^2,
/// indices drawn independently, Y_i ~ Gamma(1, alpha_i). By default the two
/// Y draws are independent copies even when I1 = I2; `shared_y` reuses one
/// draw per index, so equal indices contribute 0.
DistanceEstimate conv_theta(const std::vector<GammaComponent>& parts, std::uint64_t seed, std::size_t n,
                            bool shared_y = false);

}  // namespace steinlab
