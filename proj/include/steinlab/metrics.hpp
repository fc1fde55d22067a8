#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "steinlab/dist.hpp"

namespace steinlab {

enum class Metric { wasserstein, kolmogorov };
enum class Method { exact_quadrature, empirical, monte_carlo };

std::string_view to_string(Metric m) noexcept;
std::string_view to_string(Method m) noexcept;

struct DistanceEstimate {
    double value = 0.0;
    Metric metric = Metric::wasserstein;
    Method method = Method::exact_quadrature;
    /// Quadrature and truncation bound (exact) or standard error (sampled).
    double error = 0.0;
    /// Sample count; 0 for exact evaluations.
    std::size_t n = 0;
    bool converged = true;
};

nlohmann::json to_json(const DistanceEstimate& e);

/// Default tolerance: 1e-8 for closed-form laws, 1e-6 when a tabulated law
/// is involved.
double default_tolerance(const Dist& d1, const Dist& d2);

/// int |F1 - F2| over [0, inf): adaptive Gauss-Kronrod panels between the
/// breakpoints of both laws, split again at sign changes of F1 - F2. Half
/// of `tol` bounds the truncated tails, half the interior quadrature. The
/// reported error also carries the declared error of tabulated laws.
DistanceEstimate wasserstein(const Dist& d1, const Dist& d2, double tol);
DistanceEstimate wasserstein(const Dist& d1, const Dist& d2);

/// sup |F1 - F2|, with both one-sided limits at every atom and a candidate
/// grid refined (with golden-section polishing) until the supremum
/// estimate moves by less than `tol`.
DistanceEstimate kolmogorov(const Dist& d1, const Dist& d2, double tol);
DistanceEstimate kolmogorov(const Dist& d1, const Dist& d2);

struct BootstrapOptions {
    std::size_t replicates = 200;
    std::uint64_t seed = 0;
};

/// Two-sample sorted-quantile L1 distance (equal sizes), bootstrap SE.
DistanceEstimate wasserstein_empirical(std::span<const double> s1, std::span<const double> s2,
                                       const BootstrapOptions& options = {});

/// (1/n) sum |s_(i) - Q((i - 1/2)/n)| against the quantiles of d, bootstrap SE.
DistanceEstimate wasserstein_to_law(std::span<const double> s, const Dist& d,
                                    const BootstrapOptions& options = {});

/// One-sample Kolmogorov-Smirnov statistic against d using both step
/// limits of the empirical CDF, bootstrap SE.
DistanceEstimate kolmogorov_empirical(std::span<const double> s, const Dist& d,
                                      const BootstrapOptions& options = {});

}  // namespace steinlab
