#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace steinlab {

struct Atom {
    double x = 0.0;
    double p = 0.0;
};

/// Sorted point masses with prefix/suffix power sums for O(log n) partial
/// moments E[X^k 1{X <= x}] and E[X^k 1{X > x}].
class AtomTable {
public:
    static constexpr int kCachedOrder = 8;

    AtomTable() = default;

    /// Sorts, merges locations closer than 1e-12 * max(1, |x|) and drops
    /// non-positive masses.
    explicit AtomTable(std::vector<Atom> atoms);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    double total_mass() const noexcept { return total_; }

    double lower_moment(int k, double x) const;
    double upper_moment(int k, double x) const;
    double moment(int k) const;

    /// Mass located exactly at x (0 when x is not an atom).
    double mass_at(double x) const;

    /// Smallest atom location whose cumulative mass reaches u.
    double quantile(double u) const;

    /// Index of the first atom with location > x.
    std::size_t upper_index(double x) const;

private:
    using Powers = std::array<double, kCachedOrder + 1>;

    std::vector<Atom> atoms_;
    std::vector<Powers> prefix_;  // prefix_[i] sums atoms [0, i)
    std::vector<Powers> suffix_;  // suffix_[i] sums atoms [i, n)
    double total_ = 0.0;
};

/// Distribution of the sum of two independent atom laws.
AtomTable convolve(const AtomTable& a, const AtomTable& b);

}  // namespace steinlab
