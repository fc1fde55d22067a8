#include <gtest/gtest.h>

#include <cmath>

#include "steinlab/distributions.hpp"
#include "steinlab/metrics.hpp"

using namespace steinlab;

TEST(Metrics, WassersteinClosedForms) {
    EXPECT_NEAR(wasserstein(*make_point(1.0), *make_point(3.5)).value, 2.5, 1e-12);
    // Same rate: the CDFs are ordered, so d_W is the mean gap.
    EXPECT_NEAR(wasserstein(*make_gamma(1.0, 2.0), *make_gamma(3.0, 2.0)).value, 1.0, 1e-9);
    EXPECT_NEAR(wasserstein(*make_exponential(1.0), *make_exponential(4.0)).value, 0.75, 1e-9);
    // Uniform(0,1) vs point 0.5: int |F - G| = 1/4.
    EXPECT_NEAR(wasserstein(*make_uniform(0.0, 1.0), *make_point(0.5)).value, 0.25, 1e-12);
    EXPECT_NEAR(wasserstein(*make_gamma(2.0, 1.0), *make_gamma(2.0, 1.0)).value, 0.0, 1e-14);
}

TEST(Metrics, WassersteinCrossingCdfs) {
    // Poisson(1) vs Exp(1) have equal means, so the CDF difference changes sign;
    // compare with a brute-force midpoint sum.
    const auto a = make_poisson(1.0);
    const auto b = make_exponential(1.0);
    double brute = 0.0;
    const double h = 1e-5;
    for (double x = h / 2; x < 40.0; x += h) brute += std::fabs(cdf(*a, x) - cdf(*b, x)) * h;
    const DistanceEstimate e = wasserstein(*a, *b);
    EXPECT_NEAR(e.value, brute, 1e-7);
    EXPECT_TRUE(e.converged);
    EXPECT_EQ(e.method, Method::exact_quadrature);
}

TEST(Metrics, KolmogorovClosedForms) {
    // Poisson(1) vs Exp(1): the jump at 0 gives e^{-1}.
    EXPECT_NEAR(kolmogorov(*make_poisson(1.0), *make_gamma(1.0, 1.0)).value, std::exp(-1.0), 1e-9);
    // Exp(a) vs Exp(b): sup at x* = ln(a/b)/(a - b).
    const double a = 1.0;
    const double b = 3.0;
    const double xs = std::log(a / b) / (a - b);
    EXPECT_NEAR(kolmogorov(*make_exponential(a), *make_exponential(b)).value,
                std::exp(-a * xs) - std::exp(-b * xs), 1e-9);
    EXPECT_NEAR(kolmogorov(*make_point(1.0), *make_point(2.0)).value, 1.0, 1e-15);
}

TEST(Metrics, EmpiricalWassersteinBetweenSamples) {
    const std::vector<double> s1{0.0, 1.0, 2.0};
    const std::vector<double> s2{1.0, 2.0, 3.0};
    const DistanceEstimate e = wasserstein_empirical(s1, s2);
    EXPECT_NEAR(e.value, 1.0, 1e-15);
    EXPECT_EQ(e.method, Method::empirical);
    EXPECT_EQ(e.n, 3u);
}

TEST(Metrics, EmpiricalKolmogorovInsideDkwBand) {
    // DKW: P(sup |F_n - F| > eps) <= 2 exp(-2 n eps^2); eps at level 1e-6.
    const auto d = make_gamma(2.0, 1.0);
    const std::size_t n = 20000;
    for (std::uint64_t seed : {1, 2, 3}) {
        Rng rng(seed);
        const auto s = sample(*d, rng, n);
        const double eps = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * n));
        const DistanceEstimate e = kolmogorov_empirical(s, *d, {100, seed});
        EXPECT_LT(e.value, eps);
        EXPECT_GT(e.error, 0.0);
    }
}

TEST(Metrics, EmpiricalWassersteinToLawConverges) {
    const auto d = make_exponential(1.0);
    Rng rng(4);
    const auto s = sample(*d, rng, 100000);
    const DistanceEstimate e = wasserstein_to_law(s, *d, {50, 4});
    EXPECT_LT(e.value, 0.02);
    const DistanceEstimate again = wasserstein_to_law(s, *d, {50, 4});
    EXPECT_EQ(e.error, again.error);
}

TEST(Metrics, JsonShape) {
    const auto j = to_json(wasserstein(*make_point(0.0), *make_point(1.0)));
    EXPECT_EQ(j.at("metric"), "wasserstein");
    EXPECT_EQ(j.at("method"), "exact-quadrature");
    EXPECT_TRUE(j.contains("error"));
}
