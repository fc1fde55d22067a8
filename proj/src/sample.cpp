#include <cmath>
#include <memory>
#include <numbers>

#include "resolve.hpp"
#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"

namespace steinlab {

namespace {

double standard_normal(Rng& rng) {
    // Box-Muller; the second variate is discarded to keep draws stateless.
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang squeeze method, with the U^{1/r} boost for r < 1.
double standard_gamma(double r, Rng& rng) {
    if (r < 1.0) {
        const double g = standard_gamma(r + 1.0, rng);
        return g * std::pow(rng.uniform_open(), 1.0 / r);
    }
    const double d = r - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = standard_normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Per-law sampling plan, built once and reused across draws.
class Sampler {
public:
    explicit Sampler(const Dist& d) : d_(d) {
        if (const auto* s = d.as<family::Scaled>()) {
            children_.push_back(std::make_unique<Sampler>(*s->inner));
        } else if (const auto* c = d.as<family::Convolution>()) {
            for (const DistPtr& p : c->parts) children_.push_back(std::make_unique<Sampler>(*p));
        } else if (const auto* cp = d.as<family::CompoundPoisson>()) {
            count_ = make_poisson(cp->lambda);
            children_.push_back(std::make_unique<Sampler>(*count_));
            children_.push_back(std::make_unique<Sampler>(*cp->jump));
        } else if (d.as<family::Poisson>() || d.as<family::Geometric>() ||
                   d.as<family::NegativeBinomial>() || d.as<family::Logarithmic>() ||
                   d.as<family::Discrete>()) {
            table_ = &d.resolved().table;
        } else if (d.as<family::Biased>()) {
            if (atom_mass(d) >= 1.0 - 1e-9) {
                owned_table_ = std::make_unique<AtomTable>(atoms(d));
                table_ = owned_table_.get();
            }
        }
    }

    double operator()(Rng& rng) const {
        if (table_) return table_->quantile(rng.uniform_open() * table_->total_mass());
        if (const auto* g = d_.as<family::Gamma>()) return standard_gamma(g->r, rng) / g->alpha;
        if (const auto* e = d_.as<family::Exponential>()) return -std::log(rng.uniform_open()) / e->alpha;
        if (const auto* u = d_.as<family::Uniform>()) return u->a + rng.uniform() * (u->b - u->a);
        if (const auto* s = d_.as<family::Scaled>()) return s->c * (*children_[0])(rng);
        if (d_.as<family::Convolution>()) {
            double sum = 0.0;
            for (const auto& c : children_) sum += (*c)(rng);
            return sum;
        }
        if (d_.as<family::CompoundPoisson>()) {
            const double n = (*children_[0])(rng);
            double sum = 0.0;
            for (double i = 0; i < n; i += 1.0) sum += (*children_[1])(rng);
            return sum;
        }
        if (const auto* e = d_.as<family::Empirical>()) {
            const auto n = e->samples.size();
            auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
            return e->samples[std::min(i, n - 1)];
        }
        return quantile(d_, rng.uniform_open());
    }

private:
    const Dist& d_;
    std::vector<std::unique_ptr<Sampler>> children_;
    DistPtr count_;
    std::unique_ptr<AtomTable> owned_table_;
    const AtomTable* table_ = nullptr;
};

}  // namespace

double draw(const Dist& d, Rng& rng) { return Sampler(d)(rng); }

std::vector<double> sample(const Dist& d, Rng& rng, std::size_t n) {
    const Sampler s(d);
    std::vector<double> out(n);
    for (double& x : out) x = s(rng);
    return out;
}

}  // namespace steinlab
