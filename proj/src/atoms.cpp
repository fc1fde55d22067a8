#include "steinlab/atoms.hpp"

#include <algorithm>
#include <cmath>

#include "steinlab/error.hpp"

namespace steinlab {

namespace {

bool same_location(double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

double power_sum_direct(std::span<const Atom> atoms, int k) {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.p * std::pow(a.x, k);
    return s;
}

}  // namespace

AtomTable::AtomTable(std::vector<Atom> atoms) {
    std::erase_if(atoms, [](const Atom& a) { return !(a.p > 0.0); });
    std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.x) || !std::isfinite(a.p)) {
            throw DomainError("atom table: locations and masses must be finite");
        }
        if (!atoms_.empty() && same_location(atoms_.back().x, a.x)) {
            atoms_.back().p += a.p;
        } else {
            atoms_.push_back(a);
        }
    }
    const std::size_t n = atoms_.size();
    prefix_.assign(n + 1, Powers{});
    suffix_.assign(n + 1, Powers{});
    for (std::size_t i = 0; i < n; ++i) {
        double w = atoms_[i].p;
        for (int k = 0; k <= kCachedOrder; ++k) {
            prefix_[i + 1][k] = prefix_[i][k] + w;
            w *= atoms_[i].x;
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double w = atoms_[i].p;
        for (int k = 0; k <= kCachedOrder; ++k) {
            suffix_[i][k] = suffix_[i + 1][k] + w;
            w *= atoms_[i].x;
        }
    }
    total_ = prefix_[n][0];
}

std::size_t AtomTable::upper_index(double x) const {
    return static_cast<std::size_t>(
        std::upper_bound(atoms_.begin(), atoms_.end(), x,
                         [](double v, const Atom& a) { return v < a.x; }) -
        atoms_.begin());
}

double AtomTable::lower_moment(int k, double x) const {
    const std::size_t i = upper_index(x);
    if (k <= kCachedOrder) return prefix_[i][k];
    return power_sum_direct(std::span(atoms_).first(i), k);
}

double AtomTable::upper_moment(int k, double x) const {
    const std::size_t i = upper_index(x);
    if (k <= kCachedOrder) return suffix_[i][k];
    return power_sum_direct(std::span(atoms_).subspan(i), k);
}

double AtomTable::moment(int k) const {
    if (k <= kCachedOrder) return prefix_.back()[k];
    return power_sum_direct(atoms_, k);
}

double AtomTable::mass_at(double x) const {
    const std::size_t i = upper_index(x);
    if (i > 0 && same_location(atoms_[i - 1].x, x)) return atoms_[i - 1].p;
    if (i < atoms_.size() && same_location(atoms_[i].x, x)) return atoms_[i].p;
    return 0.0;
}

double AtomTable::quantile(double u) const {
    if (atoms_.empty()) throw DomainError("quantile of an empty atom table");
    const auto it = std::lower_bound(prefix_.begin() + 1, prefix_.end(), u,
                                     [](const Powers& p, double v) { return p[0] < v; });
    if (it == prefix_.end()) return atoms_.back().x;
    return atoms_[static_cast<std::size_t>(it - prefix_.begin()) - 1].x;
}

AtomTable convolve(const AtomTable& a, const AtomTable& b) {
    constexpr std::size_t kMaxPairs = 50'000'000;
    if (a.size() * b.size() > kMaxPairs) {
        throw NumericalError("discrete convolution too large (" + std::to_string(a.size()) + " x " +
                             std::to_string(b.size()) + " atoms)");
    }
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& u : a.atoms()) {
        for (const Atom& v : b.atoms()) {
            const double p = u.p * v.p;
            if (p > 0.0) out.push_back({u.x + v.x, p});
        }
    }
    return AtomTable(std::move(out));
}

}  // namespace steinlab
