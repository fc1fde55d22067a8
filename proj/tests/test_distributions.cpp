#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/geometric.hpp>
#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"

using namespace steinlab;

namespace {

// CP(lambda, Exp(alpha)): atom e^{-lambda} at 0 plus a Poisson mixture of gamma laws.
double cp_exponential_cdf(double lambda, double alpha, double x) {
    double total = std::exp(-lambda);
    double w = std::exp(-lambda);
    for (int k = 1; k < 200; ++k) {
        w *= lambda / k;
        total += w * boost::math::gamma_p(static_cast<double>(k), alpha * x);
        if (w < 1e-18 && k > lambda) break;
    }
    return total;
}

double irwin_hall_cdf(int n, double x) {
    double s = 0.0;
    for (int k = 0; k <= std::floor(x) && k <= n; ++k) {
        const double term = boost::math::binomial_coefficient<double>(n, k) * std::pow(x - k, n);
        s += (k % 2 == 0 ? term : -term);
    }
    return s / boost::math::factorial<double>(n);
}

}  // namespace

TEST(Distributions, GammaMatchesBoost) {
    for (double r : {0.3, 1.0, 4.5}) {
        for (double a : {0.5, 2.0}) {
            const auto d = make_gamma(r, a);
            boost::math::gamma_distribution<> g(r, 1.0 / a);
            for (double x : {0.01, 0.5, 2.0, 9.0}) {
                EXPECT_NEAR(cdf(*d, x), boost::math::cdf(g, x), 1e-13);
                EXPECT_NEAR(survival(*d, x), boost::math::cdf(boost::math::complement(g, x)), 1e-13);
                EXPECT_NEAR(density_or_mass(*d, x), boost::math::pdf(g, x), 1e-12 * (1 + boost::math::pdf(g, x)));
            }
            for (double u : {1e-6, 0.1, 0.5, 0.99}) {
                EXPECT_NEAR(quantile(*d, u), boost::math::quantile(g, u), 1e-9 * (1 + boost::math::quantile(g, u)));
            }
            const Moments m = moments(*d);
            EXPECT_NEAR(m.mean, r / a, 1e-14);
            EXPECT_NEAR(m.variance, r / (a * a), 1e-13);
        }
    }
}

TEST(Distributions, CountLawsMatchBoost) {
    const auto pois = make_poisson(3.2);
    const auto nb = make_negative_binomial(2.5, 0.3);
    const auto geo = make_geometric(0.4);
    boost::math::poisson_distribution<> bp(3.2);
    boost::math::negative_binomial_distribution<> bnb(2.5, 0.3);
    boost::math::geometric_distribution<> bg(0.4);
    for (int k : {0, 1, 3, 7, 15}) {
        EXPECT_NEAR(cdf(*pois, k), boost::math::cdf(bp, k), 1e-13);
        EXPECT_NEAR(cdf(*nb, k), boost::math::cdf(bnb, k), 1e-12);
        EXPECT_NEAR(cdf(*geo, k), boost::math::cdf(bg, k), 1e-13);
        EXPECT_NEAR(density_or_mass(*nb, k), boost::math::pdf(bnb, k), 1e-13);
        // Between atoms the CDF is flat.
        EXPECT_NEAR(cdf(*pois, k + 0.5), cdf(*pois, k), 1e-15);
        EXPECT_NEAR(cdf_left(*pois, k + 1.0), cdf(*pois, k), 1e-15);
    }
    EXPECT_NEAR(moments(*nb).mean, 2.5 * 0.7 / 0.3, 1e-12);
    EXPECT_NEAR(moments(*nb).variance, 2.5 * 0.7 / 0.09, 1e-11);
}

TEST(Distributions, LogarithmicPmf) {
    const double p = 0.3;
    const auto d = make_logarithmic(p);
    for (int i : {1, 2, 5, 10}) {
        EXPECT_NEAR(density_or_mass(*d, i), -std::pow(1 - p, i) / (i * std::log(p)), 1e-14);
    }
    EXPECT_NEAR(moments(*d).mean, -(1 - p) / (p * std::log(p)), 1e-12);
    EXPECT_DOUBLE_EQ(lower_support(*d), 1.0);
}

TEST(Distributions, LevyJumpLaw) {
    const double delta = 0.05;
    const auto d = make_gamma_levy_jump(delta);
    const double lam = boost::math::expint(1, delta);
    EXPECT_NEAR(moments(*d).mean, std::exp(-delta) / lam, 1e-12);
    EXPECT_NEAR(raw_moment(*d, 2), (1 + delta) * std::exp(-delta) / lam, 1e-12);
    EXPECT_DOUBLE_EQ(cdf(*d, delta * 0.99), 0.0);
    EXPECT_NEAR(survival(*d, 1.0), boost::math::expint(1, 1.0) / lam, 1e-13);
}

TEST(Distributions, PartialMomentsAddUp) {
    const std::vector<DistPtr> laws{make_gamma(2.0, 1.5), make_uniform(0.5, 2.0), make_poisson(2.0),
                                    make_negative_binomial(3.0, 0.4), make_gamma_levy_jump(0.1),
                                    make_scaled(0.5, make_gamma(1.5, 1.0))};
    for (const auto& d : laws) {
        for (int k = 0; k <= 3; ++k) {
            for (double x : {0.3, 1.0, 2.7}) {
                const double total = lower_moment(*d, k, x) + upper_moment(*d, k, x);
                EXPECT_NEAR(total, raw_moment(*d, k), 1e-11 * (1 + raw_moment(*d, k))) << d->family_name();
            }
        }
    }
}

TEST(Distributions, QuantileIsGeneralizedInverse) {
    const std::vector<DistPtr> laws{make_poisson(1.7), make_gamma(0.4, 1.0),
                                    make_discrete({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3}),
                                    make_convolution({make_point(1.0), make_gamma(2.0, 1.0)})};
    for (const auto& d : laws) {
        for (double u : {0.01, 0.2, 0.5, 0.7, 0.95}) {
            const double q = quantile(*d, u);
            EXPECT_GE(cdf(*d, q), u - 1e-12);
            EXPECT_LE(cdf_left(*d, q), u + 1e-12);
        }
    }
}

TEST(Distributions, ScaledLaw) {
    const auto inner = make_gamma(2.0, 1.0);
    const auto d = make_scaled(0.25, inner);
    for (double x : {0.1, 0.5, 1.3}) EXPECT_NEAR(cdf(*d, x), cdf(*inner, x / 0.25), 1e-15);
    EXPECT_NEAR(moments(*d).variance, 0.0625 * 2.0, 1e-14);
}

TEST(Distributions, CompoundPoissonExponentialJumpsAgainstSeries) {
    const double lambda = 2.0;
    const double alpha = 1.0;
    const auto d = make_compound_poisson(lambda, make_exponential(alpha));
    EXPECT_NEAR(atom_mass(*d), std::exp(-lambda), 1e-14);
    double worst = 0.0;
    for (double x = 0.0; x < 15.0; x += 0.173) worst = std::max(worst, std::fabs(cdf(*d, x) - cp_exponential_cdf(lambda, alpha, x)));
    EXPECT_LT(worst, 1e-7);
    EXPECT_LE(worst, cdf_tolerance(*d) + 1e-12);
    EXPECT_NEAR(moments(*d).mean, lambda / alpha, 1e-12);
    EXPECT_NEAR(moments(*d).variance, 2 * lambda / (alpha * alpha), 1e-12);
}

TEST(Distributions, CompoundPoissonLatticeJumpsUsePanjer) {
    // A unit jump gives exactly a Poisson law.
    const auto d = make_compound_poisson(2.0, make_point(1.0));
    const auto pois = make_poisson(2.0);
    for (int k = 0; k < 12; ++k) EXPECT_NEAR(density_or_mass(*d, k), density_or_mass(*pois, k), 1e-14);
    EXPECT_NEAR(atom_mass(*d), 1.0, 1e-12);
}

TEST(Distributions, ConvolutionOfUniformsIsIrwinHall) {
    for (int n : {2, 3, 5}) {
        std::vector<DistPtr> parts(n, make_uniform(0.0, 1.0));
        const auto d = make_convolution(parts);
        double worst = 0.0;
        for (double x = 0.0; x <= n; x += 0.0371) worst = std::max(worst, std::fabs(cdf(*d, x) - irwin_hall_cdf(n, x)));
        EXPECT_LT(worst, 1e-9) << n;
    }
}

TEST(Distributions, ConvolutionOfGammasWithSharedRate) {
    const auto d = make_convolution({make_gamma(1.5, 2.0), make_gamma(0.5, 2.0), make_exponential(2.0)});
    const auto g = make_gamma(3.0, 2.0);
    for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(cdf(*d, x), cdf(*g, x), 1e-14);
}

TEST(Distributions, ShiftMixture) {
    // Poisson(1) + Exp(1): P(W <= x) = sum_k P(N = k) (1 - e^{-(x - k)}) over k <= x.
    const auto d = make_convolution({make_poisson(1.0), make_exponential(1.0)});
    boost::math::poisson_distribution<> p(1.0);
    for (double x : {0.5, 1.5, 4.2}) {
        double want = 0.0;
        for (int k = 0; k <= x; ++k) want += boost::math::pdf(p, k) * (1 - std::exp(-(x - k)));
        EXPECT_NEAR(cdf(*d, x), want, 1e-13);
    }
}

TEST(Distributions, DomainChecks) {
    EXPECT_THROW(make_gamma(-1.0, 1.0), DomainError);
    EXPECT_THROW(make_gamma(1.0, 0.0), DomainError);
    EXPECT_THROW(make_uniform(2.0, 1.0), DomainError);
    EXPECT_THROW(make_geometric(1.5), DomainError);
    EXPECT_THROW(make_logarithmic(1.0), DomainError);
    EXPECT_THROW(make_discrete({0.0, 1.0}, {0.5, 0.6}), DomainError);
    EXPECT_THROW(make_discrete({-1.0}, {1.0}), DomainError);
    EXPECT_THROW(make_gamma_levy_jump(0.0), DomainError);
    EXPECT_THROW(make_empirical({}), DomainError);
}

TEST(Distributions, SampleMeansWithinFiveStandardErrors) {
    const std::vector<DistPtr> laws{make_gamma(0.3, 2.0), make_gamma(4.0, 1.0), make_negative_binomial(2.0, 0.2),
                                    make_logarithmic(0.2), make_gamma_levy_jump(0.01),
                                    make_compound_poisson(3.0, make_uniform(0.0, 1.0))};
    Rng rng(123);
    const std::size_t n = 200000;
    for (const auto& d : laws) {
        const auto s = sample(*d, rng, n);
        double sum = 0.0;
        for (double x : s) sum += x;
        const Moments m = moments(*d);
        EXPECT_NEAR(sum / n, m.mean, 5.0 * std::sqrt(m.variance / n)) << d->family_name();
        EXPECT_GE(*std::min_element(s.begin(), s.end()), lower_support(*d));
    }
}

TEST(Distributions, SamplingIsReproducible) {
    const auto d = make_gamma(2.0, 1.0);
    Rng a(9);
    Rng b(9);
    EXPECT_EQ(sample(*d, a, 100), sample(*d, b, 100));
}
