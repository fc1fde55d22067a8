#pragma once

#include <functional>

namespace steinlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 2000;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite [a, b].
/// Bisects the panel with the largest error estimate until the summed
/// estimate meets max(abs_tol, rel_tol * |value|).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options = {});

/// Integral of |f| over [a, b]. Panels whose Kronrod nodes disagree in sign
/// are split at the bracketed roots so each piece integrates a smooth
/// integrand.
QuadResult integrate_abs(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& options = {});

/// Root of f in [a, b] given f(a), f(b) of opposite sign (bisection to
/// machine resolution).
double bisect_root(const std::function<double(double)>& f, double a, double b, double fa);

}  // namespace steinlab
