#include <gtest/gtest.h>

#include <cmath>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/metrics.hpp"
#include "steinlab/spec_format.hpp"
#include "steinlab/transforms.hpp"

using namespace steinlab;

namespace {

const TransformOptions kGeneric{false};

// E[V f(V)] = E V * E f(V^s) for f = 1{. <= x}, checked through partial moments.
void expect_size_bias_identity(const DistPtr& v, const DistPtr& vs) {
    const double mu = moments(*v).mean;
    for (double x : {0.2, 0.7, 1.5, 3.0}) {
        EXPECT_NEAR(lower_moment(*v, 1, x), mu * cdf(*vs, x), 1e-10) << v->family_name() << " x=" << x;
    }
}

}  // namespace

TEST(Transforms, GammaClosedForms) {
    const auto g = make_gamma(2.5, 1.5);
    EXPECT_EQ(format_dist(*size_bias(g)), "gamma:r=3.5,alpha=1.5");
    EXPECT_EQ(format_dist(*zero_bias(g)), "gamma:r=3.5,alpha=1.5");
    EXPECT_EQ(format_dist(*equilibrium(make_exponential(2.0))), "exponential:alpha=2");
    EXPECT_EQ(format_dist(*size_bias(make_poisson(2.0))), "conv:parts=[(point:c=1);(poisson:lambda=2)]");
}

TEST(Transforms, GenericSizeBiasMatchesClosedForm) {
    for (const auto& d : {make_gamma(0.5, 2.0), make_gamma(3.0, 1.0)}) {
        const auto generic = size_bias(d, kGeneric);
        const auto closed = size_bias(d);
        EXPECT_LT(wasserstein(*generic, *closed).value, 1e-9);
        expect_size_bias_identity(d, generic);
    }
}

TEST(Transforms, SizeBiasIdentityOnAssortedLaws) {
    for (const auto& d : {make_uniform(0.0, 2.0), make_negative_binomial(2.0, 0.3), make_logarithmic(0.4),
                          make_gamma_levy_jump(0.1), make_compound_poisson(1.5, make_exponential(1.0))}) {
        expect_size_bias_identity(d, size_bias(d));
        expect_size_bias_identity(d, size_bias(d, kGeneric));
    }
}

TEST(Transforms, ZeroBiasOfUniformIsBetaTwoTwo) {
    // Density 6x(1-x) on [0, 1].
    const auto z = zero_bias(make_uniform(0.0, 1.0));
    for (double x : {0.1, 0.4, 0.8}) EXPECT_NEAR(cdf(*z, x), 3 * x * x - 2 * x * x * x, 1e-12);
}

TEST(Transforms, ZeroBiasOfPoissonIsUniformMixture) {
    // Zero bias of a lattice law: density P(W >= ceil(x))-ish steps; check E[(W - mu) f(W)] = var E f'(W^z)
    // with f(w) = (w - t)^+, so f' = 1{w > t}.
    const auto w = make_poisson(1.3);
    const auto z = zero_bias(w);
    const Moments m = moments(*w);
    for (double t : {0.5, 1.0, 2.5}) {
        const double lhs = upper_moment(*w, 2, t) - (t + m.mean) * upper_moment(*w, 1, t) + m.mean * t * survival(*w, t);
        EXPECT_NEAR(lhs, m.variance * survival(*z, t), 1e-12) << t;
    }
}

TEST(Transforms, EquilibriumDensity) {
    // Equilibrium of U(0, 2): density (1 - x/2) / 1 on [0, 2].
    const auto e = equilibrium(make_uniform(0.0, 2.0), kGeneric);
    for (double x : {0.3, 1.0, 1.9}) EXPECT_NEAR(cdf(*e, x), x - x * x / 4, 1e-12);
    EXPECT_NEAR(cdf(*equilibrium(make_point(2.0)), 0.5), 0.25, 1e-15);
}

TEST(Transforms, CompoundPoissonBiasesAreSums) {
    const auto cp = make_compound_poisson(2.0, make_uniform(0.0, 1.0));
    const auto s = id_size_bias(cp);
    const auto z = id_zero_bias(cp);
    // W^s has mean E W^2 / E W; W^z has mean (E W^3 - ...) checked via W + X~.
    const Moments m = moments(*cp);
    EXPECT_NEAR(moments(*s).mean, raw_moment(*cp, 2) / m.mean, 1e-10);
    EXPECT_NEAR(moments(*z).mean, m.mean + moments(*x_tilde(make_uniform(0.0, 1.0))).mean, 1e-10);
    EXPECT_THROW(id_size_bias(make_gamma(1.0, 1.0)), DomainError);
}

TEST(Transforms, XTildeOfLevyJumpIsShiftedExponentialEquilibrium) {
    // Size bias of the cut Levy jump is delta + Exp(1); its equilibrium has density
    // min(1, e^{-(x - delta)}) / (1 + delta).
    const double delta = 0.2;
    const auto xt = x_tilde(make_gamma_levy_jump(delta));
    for (double x : {0.1, 0.2, 1.0, 3.0}) {
        const double want = x <= delta ? x / (1 + delta) : (delta + 1 - std::exp(-(x - delta))) / (1 + delta);
        EXPECT_NEAR(cdf(*xt, x), want, 1e-11) << x;
    }
}

TEST(Transforms, ThetaExactVanishesOnGammaAndNotOnUniform) {
    EXPECT_LT(theta_exact(make_gamma(2.0, 3.0), kGeneric).value, 1e-8);
    // Size bias of U(0,1) has CDF x^2, zero bias has CDF 3x^2 - 2x^3: Theta = 1/6.
    const DistanceEstimate u = theta_exact(make_uniform(0.0, 1.0));
    EXPECT_NEAR(u.value, 1.0 / 6.0, u.error + 1e-12);
    EXPECT_NEAR(theta_exact(make_uniform(0.0, 1.0), {}, 1e-11).value, 1.0 / 6.0, 1e-11);
}

TEST(Transforms, ThetaJumpForLevyJump) {
    for (double delta : {0.01, 0.3}) {
        EXPECT_NEAR(theta_jump(make_gamma_levy_jump(delta)).value, delta * (1 + delta / 2) / (1 + delta), 1e-8);
    }
}

TEST(Transforms, IndexLaws) {
    const std::vector<DistPtr> parts{make_gamma(1.0, 1.0), make_gamma(1.0, 2.0), make_uniform(0.0, 1.0)};
    const IndexLaw s = size_index_law(parts);
    const IndexLaw z = zero_index_law(parts);
    const double mean_total = 1.0 + 0.5 + 0.5;
    const double var_total = 1.0 + 0.25 + 1.0 / 12.0;
    EXPECT_NEAR(s.weights()[1], 0.5 / mean_total, 1e-15);
    EXPECT_NEAR(z.weights()[2], (1.0 / 12.0) / var_total, 1e-15);
    EXPECT_EQ(s.pick(0.0), 0u);
    EXPECT_EQ(s.pick(0.99), 2u);
    EXPECT_THROW(IndexLaw({0.0, 0.0}), DomainError);
}

TEST(Transforms, SumCouplingOnGammaPartsIsExact) {
    // Equal-rate gamma parts: the coupling gives W^s = W^z path by path.
    const std::vector<DistPtr> parts(4, make_gamma(0.7, 2.0));
    const SumCoupling c = sum_bias_coupling(parts, 11, 20000);
    EXPECT_LT(c.theta.value, 1e-12);
    EXPECT_EQ(c.w_size.size(), 20000u);
}

TEST(Transforms, SumCouplingMarginals) {
    // Marginal means: E W^s = E W^2 / E W and E W^z = mu + (E W^3 - 3 mu var - mu^3) / (2 var).
    const std::vector<DistPtr> parts(3, make_uniform(0.0, 1.0));
    const SumCoupling c = sum_bias_coupling(parts, 5, 100000);
    double ms = 0.0;
    double mz = 0.0;
    for (double x : c.w_size) ms += x;
    for (double x : c.w_zero) mz += x;
    ms /= c.w_size.size();
    mz /= c.w_zero.size();
    const double mu = 1.5;
    const double var = 0.25;
    EXPECT_NEAR(ms, (var + mu * mu) / mu, 0.01);
    // The sum is symmetric about mu, so the third central moment is 0 and E W^z = mu.
    EXPECT_NEAR(mz, mu, 0.01);
    EXPECT_GT(c.theta.value, 0.0);
    const SumCoupling again = sum_bias_coupling(parts, 5, 100000);
    EXPECT_EQ(again.theta.value, c.theta.value);
}
