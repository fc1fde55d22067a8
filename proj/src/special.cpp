#include "steinlab/special.hpp"

#include <cmath>
#include <limits>

#include "steinlab/error.hpp"

namespace steinlab::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 1'000'000;

double log_prefactor(double a, double x) { return a * std::log(x) - x - log_gamma(a); }

// sum_{n>=0} x^n / (a (a+1) ... (a+n)), times the prefactor: P(a, x).
double lower_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            return sum * std::exp(log_prefactor(a, x));
        }
    }
    throw NumericalError("incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            return std::exp(log_prefactor(a, x)) * h;
        }
    }
    throw NumericalError("incomplete gamma continued fraction did not converge");
}

void check_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: shape must be > 0");
    if (std::isnan(x)) throw DomainError("incomplete gamma: argument is NaN");
}

}  // namespace

double gamma_p(double a, double x) {
    check_args(a, x);
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_fraction(a, x);
}

double gamma_q(double a, double x) {
    check_args(a, x);
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_fraction(a, x);
}

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double gamma_fn(double x) { return std::tgamma(x); }

double expint_e1(double x) {
    if (!(x > 0.0)) throw DomainError("E1: argument must be > 0");
    if (x > 700.0) return 0.0;
    return -std::expint(-x);
}

double rising_factorial(double x, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= x + i;
    return out;
}

}  // namespace steinlab::special
