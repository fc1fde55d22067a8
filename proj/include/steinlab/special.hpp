#pragma once

namespace steinlab::special {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated
/// without cancellation in the upper tail.
double gamma_q(double a, double x);

/// log Gamma(x) for x > 0 (reentrant).
double log_gamma(double x);

double gamma_fn(double x);

/// Exponential integral E1(x) = int_x^inf e^{-t}/t dt, x > 0.
double expint_e1(double x);

/// Rising factorial x (x+1) ... (x+k-1); 1 for k = 0.
double rising_factorial(double x, int k);

}  // namespace steinlab::special
