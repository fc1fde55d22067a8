#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "steinlab/atoms.hpp"

namespace steinlab {

/// Law given by a tabulated continuous CDF part plus explicit atoms.
///
/// The continuous part C(x) is known at increasing nodes and interpolated
/// by monotone piecewise-cubic Hermite (Fritsch-Carlson slopes), so C is
/// C^1, nondecreasing, and partial moments over a cell are exact
/// polynomial integrals. Mass beyond `upper()` (at most `tail()`) is
/// treated as sitting at `upper()`.
class NumericLaw {
public:
    /// `continuous_cdf[i]` is the continuous-part mass on [lower, nodes[i]].
    /// Values are clamped to be nondecreasing; `tol` is the declared absolute
    /// CDF error and `l1_error` the declared integrated CDF error.
    NumericLaw(std::vector<double> nodes, std::vector<double> continuous_cdf,
               std::vector<Atom> atoms, double tol, double l1_error = 0.0);

    double lower() const noexcept { return nodes_.front(); }
    double upper() const noexcept { return nodes_.back(); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> continuous_cdf() const noexcept { return values_; }
    const AtomTable& atoms() const noexcept { return atoms_; }
    double tol() const noexcept { return tol_; }
    double l1_error() const noexcept { return l1_error_; }
    double tail() const noexcept { return tail_; }

    double cdf(double x) const;
    double continuous_part(double x) const;
    double density(double x) const;
    double lower_moment(int k, double x) const;
    double upper_moment(int k, double x) const;
    double moment(int k) const;

private:
    double hermite(std::size_t cell, double x) const;
    double cell_moment(std::size_t cell, int k, double a, double b) const;

    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<std::vector<double>> prefix_;  // prefix_[k][i]: moment of continuous part on [lower, nodes[i]]
    AtomTable atoms_;
    double tol_ = 0.0;
    double l1_error_ = 0.0;
    double tail_ = 0.0;
};

}  // namespace steinlab

namespace steinlab {

class Dist;

struct GridOptions {
    /// Grid step; 0 picks one from the law's scale and kinks.
    double step = 0.0;
    /// The grid ends once the remaining upper-tail mass is below this.
    double tail_mass = 1e-12;
    /// Combine runs at h and h/2 (Richardson) and use their gap as the
    /// declared error.
    bool extrapolate = true;
    std::size_t max_nodes = 4'000'000;
};

/// Compound Poisson law CP(lambda, L(jump)) on a uniform lattice. Each
/// grid cell's jump mass is split between its two endpoints so that the
/// cell mean is kept; the lattice law is then exp(lambda (Q - 1)) taken
/// through a real FFT. CDF values are read at half-nodes, and a second run
/// at h/2 gives a Richardson combination whose gap is the declared error.
/// Atoms of the jump law away from 0 get smeared over one cell; lattice
/// jump laws are better served by the Panjer recursion.
NumericLaw compound_poisson_law(double lambda, const Dist& jump, const GridOptions& options = {});

/// Independent sum of laws without atoms away from 0: the same lattice
/// scheme with the product of the parts' spectra.
NumericLaw convolution_law(const std::vector<std::shared_ptr<const Dist>>& parts,
                           const GridOptions& options = {});

/// Adaptive table of an arbitrary law: the continuous part is sampled on
/// nodes refined until the cubic interpolant is within `tol` at every cell
/// midpoint; atoms are copied.
NumericLaw tabulate(const Dist& d, double tol);

}  // namespace steinlab
