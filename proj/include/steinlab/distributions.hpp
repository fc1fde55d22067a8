#pragma once

#include <cstddef>
#include <vector>

#include "steinlab/dist.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Exact for parametric families; independent sums add means and
/// variances; compound Poisson uses lambda E X and lambda E X^2.
Moments moments(const Dist& d);

/// E X^k.
double raw_moment(const Dist& d, int k);

/// P(X <= x).
double cdf(const Dist& d, double x);
/// P(X < x).
double cdf_left(const Dist& d, double x);
/// P(X > x), computed from the upper tail directly.
double survival(const Dist& d, double x);

/// Mass at x when x is an atom, otherwise the density of the continuous part.
double density_or_mass(const Dist& d, double x);

/// Generalized inverse: the smallest x with cdf(x) >= u, u in (0, 1).
double quantile(const Dist& d, double u);

/// E[X^k 1{X <= x}] and E[X^k 1{X > x}].
double lower_moment(const Dist& d, int k, double x);
double upper_moment(const Dist& d, int k, double x);

/// Point masses of d, possibly truncated at cumulative mass 1 - 1e-12.
std::vector<Atom> atoms(const Dist& d);
double atom_mass(const Dist& d);

/// Locations where the CDF is not smooth (atoms and density kinks/jumps)
/// that fall inside [lo, hi], sorted.
std::vector<double> breakpoints(const Dist& d, double lo, double hi);

/// Infimum of the support.
double lower_support(const Dist& d);

/// A point x with E[(X - x)^+] <= eps.
double upper_truncation(const Dist& d, double eps);

/// Declared integrated CDF error of tabulated parts of d (0 for closed forms).
double representation_error(const Dist& d);

/// Declared pointwise CDF error of tabulated parts of d (0 for closed forms).
double cdf_tolerance(const Dist& d);

double draw(const Dist& d, Rng& rng);
std::vector<double> sample(const Dist& d, Rng& rng, std::size_t n);

}  // namespace steinlab
