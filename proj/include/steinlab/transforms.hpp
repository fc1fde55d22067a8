#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "steinlab/dist.hpp"
#include "steinlab/metrics.hpp"

namespace steinlab {

struct TransformOptions {
    /// Use the known closed forms (gamma, logarithmic, scaling, compound
    /// Poisson, ...). When false every transform is evaluated generically
    /// from the partial moments of its input.
    bool closed_form = true;
};

/// Law of V^s with E[V f(V)] = E V * E f(V^s). Throws DomainError when the
/// mean is not positive.
DistPtr size_bias(const DistPtr& d, const TransformOptions& options = {});

/// Law of W^z with E[(W - mu) f(W)] = var(W) E f'(W^z); absolutely
/// continuous with density E[(W - mu) 1{W > x}] / var(W). Throws
/// DomainError when the variance is zero.
DistPtr zero_bias(const DistPtr& d, const TransformOptions& options = {});

/// Law with density P(X >= x) / E X on [0, inf).
DistPtr equilibrium(const DistPtr& d, const TransformOptions& options = {});

/// Law with density E[X 1{X >= y}] / E X^2, i.e. equilibrium(size_bias(X)).
DistPtr x_tilde(const DistPtr& jump, const TransformOptions& options = {});

/// For W = CP(lambda, L(X)): W^s = W + X^s and W^z = W + X~ (independent
/// summands). Throw DomainError unless `cp` is compound Poisson.
DistPtr id_size_bias(const DistPtr& cp, const TransformOptions& options = {});
DistPtr id_zero_bias(const DistPtr& cp, const TransformOptions& options = {});

/// Probability vector over component indices.
class IndexLaw {
public:
    /// Normalizes nonnegative weights; throws DomainError if none is positive.
    explicit IndexLaw(std::vector<double> weights);

    const std::vector<double>& weights() const noexcept { return weights_; }
    /// Index whose cumulative weight first exceeds u in [0, 1).
    std::size_t pick(double u) const;

private:
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

/// Index laws for a sum of independent parts: P(I1 = i) = E X_i / E W and
/// P(I2 = i) = var X_i / var W.
IndexLaw size_index_law(const std::vector<DistPtr>& parts);
IndexLaw zero_index_law(const std::vector<DistPtr>& parts);

struct SumCoupling {
    std::vector<double> w_size;
    std::vector<double> w_zero;
    /// Mean of |W^s - W^z| with its standard error.
    DistanceEstimate theta;
};

/// Coupled draws of (W^s, W^z) for W = X_1 + ... + X_n:
///   W^s = W - X_{I1} + X_{I1}^s,  W^z = W - X_{I2} + X_{I2}^z,
/// sharing the background draws. I1 and I2 are picked from one uniform by
/// inversion, so identical parts always share the index. When I1 = I2 the
/// replacements are quantile-coupled; gamma parts use X^s = X^z = X + Y
/// with Y ~ Gamma(1, alpha).
SumCoupling sum_bias_coupling(const std::vector<DistPtr>& parts, std::uint64_t seed, std::size_t n);

/// Theta = d_W(L(W^s), L(W^z)), computed exactly by quadrature (in one
/// dimension the quantile coupling is optimal). tol <= 0 picks the metric
/// default.
DistanceEstimate theta_exact(const DistPtr& d, const TransformOptions& options = {}, double tol = 0.0);

/// d_W(L(X^s), L(X~)) for a jump law X: the compound Poisson Theta bound.
DistanceEstimate theta_jump(const DistPtr& jump, const TransformOptions& options = {}, double tol = 0.0);

}  // namespace steinlab
