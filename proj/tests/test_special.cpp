#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "steinlab/special.hpp"

namespace sp = steinlab::special;

TEST(Special, RegularizedGammaMatchesBoost) {
    for (double a : {0.01, 0.3, 0.5, 1.0, 2.5, 10.0, 57.0, 400.0}) {
        for (double x : {1e-8, 1e-3, 0.1, 0.9, 1.0, 3.0, 10.0, 60.0, 450.0}) {
            const double p = boost::math::gamma_p(a, x);
            const double q = boost::math::gamma_q(a, x);
            EXPECT_NEAR(sp::gamma_p(a, x), p, 1e-13 + 1e-12 * p) << "a=" << a << " x=" << x;
            EXPECT_NEAR(sp::gamma_q(a, x), q, 1e-13 + 1e-12 * q) << "a=" << a << " x=" << x;
        }
    }
}

TEST(Special, UpperTailKeepsRelativeAccuracy) {
    // Far tail values are tiny; compare relatively.
    const double q = boost::math::gamma_q(2.0, 80.0);
    EXPECT_NEAR(sp::gamma_q(2.0, 80.0) / q, 1.0, 1e-11);
}

TEST(Special, LogGammaAndGamma) {
    for (double x : {0.05, 0.5, 1.0, 1.5, 7.0, 30.0, 170.0}) {
        EXPECT_NEAR(sp::log_gamma(x), boost::math::lgamma(x), 1e-12 * (1 + std::fabs(boost::math::lgamma(x))));
    }
    EXPECT_NEAR(sp::gamma_fn(0.5), std::sqrt(M_PI), 1e-14);
    EXPECT_NEAR(sp::gamma_fn(5.0), 24.0, 1e-12);
}

TEST(Special, ExponentialIntegral) {
    for (double x : {1e-6, 1e-3, 0.01, 0.5, 1.0, 5.0, 30.0}) {
        const double e1 = boost::math::expint(1, x);
        EXPECT_NEAR(sp::expint_e1(x) / e1, 1.0, 1e-12) << x;
    }
}

TEST(Special, RisingFactorial) {
    EXPECT_DOUBLE_EQ(sp::rising_factorial(2.5, 0), 1.0);
    EXPECT_DOUBLE_EQ(sp::rising_factorial(2.5, 3), 2.5 * 3.5 * 4.5);
}
