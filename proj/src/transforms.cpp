#include "steinlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/rng.hpp"

namespace steinlab {

namespace {

double positive_mean(const Dist& d, const char* what) {
    const double m = moments(d).mean;
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError(std::string(what) + ": mean must be positive and finite");
    return m;
}

bool is_gamma_like(const Dist& d, double& r, double& alpha) {
    if (const auto* g = d.as<family::Gamma>()) {
        r = g->r;
        alpha = g->alpha;
        return true;
    }
    if (const auto* e = d.as<family::Exponential>()) {
        r = 1.0;
        alpha = e->alpha;
        return true;
    }
    return false;
}

DistPtr reweighted_atoms(const Dist& d, double mean) {
    std::vector<double> xs;
    std::vector<double> ps;
    for (const Atom& a : atoms(d)) {
        if (a.x <= 0.0) continue;
        xs.push_back(a.x);
        ps.push_back(a.x * a.p / mean);
    }
    const double total = std::accumulate(ps.begin(), ps.end(), 0.0);
    for (double& p : ps) p /= total;
    return make_discrete(std::move(xs), std::move(ps));
}

}  // namespace

DistPtr size_bias(const DistPtr& d, const TransformOptions& options) {
    const double mean = positive_mean(*d, "size bias");
    if (!options.closed_form) return make_biased(BiasKind::size, d);
    double r = 0.0;
    double alpha = 0.0;
    if (is_gamma_like(*d, r, alpha)) return make_gamma(r + 1.0, alpha);
    if (const auto* l = d->as<family::Logarithmic>()) {
        return make_convolution({make_point(1.0), make_geometric(l->p)});
    }
    if (d->as<family::Poisson>()) return make_convolution({make_point(1.0), d});
    if (const auto* s = d->as<family::Scaled>()) return make_scaled(s->c, size_bias(s->inner, options));
    if (d->as<family::CompoundPoisson>()) return id_size_bias(d, options);
    if (d->as<family::Discrete>() || d->as<family::Empirical>()) return reweighted_atoms(*d, mean);
    return make_biased(BiasKind::size, d);
}

DistPtr zero_bias(const DistPtr& d, const TransformOptions& options) {
    const Moments m = moments(*d);
    if (!(m.variance > 0.0)) throw DomainError("zero bias: variance must be > 0");
    if (!options.closed_form) return make_biased(BiasKind::zero, d);
    double r = 0.0;
    double alpha = 0.0;
    if (is_gamma_like(*d, r, alpha)) return make_gamma(r + 1.0, alpha);
    if (const auto* s = d->as<family::Scaled>()) return make_scaled(s->c, zero_bias(s->inner, options));
    if (d->as<family::CompoundPoisson>()) return id_zero_bias(d, options);
    return make_biased(BiasKind::zero, d);
}

DistPtr equilibrium(const DistPtr& d, const TransformOptions& options) {
    positive_mean(*d, "equilibrium");
    if (!options.closed_form) return make_biased(BiasKind::equilibrium, d);
    if (d->as<family::Exponential>()) return d;
    if (const auto* g = d->as<family::Gamma>(); g && g->r == 1.0) return make_exponential(g->alpha);
    if (const auto* x = d->as<family::Discrete>(); x && x->x.size() == 1) return make_uniform(0.0, x->x[0]);
    if (const auto* s = d->as<family::Scaled>()) return make_scaled(s->c, equilibrium(s->inner, options));
    return make_biased(BiasKind::equilibrium, d);
}

DistPtr x_tilde(const DistPtr& jump, const TransformOptions& options) {
    return equilibrium(size_bias(jump, options), options);
}

DistPtr id_size_bias(const DistPtr& cp, const TransformOptions& options) {
    const auto* c = cp->as<family::CompoundPoisson>();
    if (!c) throw DomainError("infinitely divisible transform needs a compound Poisson law");
    return make_convolution({cp, size_bias(c->jump, options)});
}

DistPtr id_zero_bias(const DistPtr& cp, const TransformOptions& options) {
    const auto* c = cp->as<family::CompoundPoisson>();
    if (!c) throw DomainError("infinitely divisible transform needs a compound Poisson law");
    return make_convolution({cp, x_tilde(c->jump, options)});
}

IndexLaw::IndexLaw(std::vector<double> weights) : weights_(std::move(weights)) {
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("index weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("index weights must not all be 0");
    double run = 0.0;
    for (double& w : weights_) {
        w /= total;
        run += w;
        cumulative_.push_back(run);
    }
}

std::size_t IndexLaw::pick(double u) const {
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), weights_.size() - 1);
}

IndexLaw size_index_law(const std::vector<DistPtr>& parts) {
    std::vector<double> w;
    for (const DistPtr& p : parts) w.push_back(moments(*p).mean);
    return IndexLaw(std::move(w));
}

IndexLaw zero_index_law(const std::vector<DistPtr>& parts) {
    std::vector<double> w;
    for (const DistPtr& p : parts) w.push_back(moments(*p).variance);
    return IndexLaw(std::move(w));
}

SumCoupling sum_bias_coupling(const std::vector<DistPtr>& parts, std::uint64_t seed, std::size_t n) {
    if (parts.empty()) throw DomainError("sum coupling needs at least one part");
    if (n == 0) throw DomainError("sample count must be >= 1");
    for (const DistPtr& p : parts) {
        if (!(moments(*p).variance > 0.0)) throw DomainError("sum coupling: degenerate part (zero variance)");
    }
    const IndexLaw i1_law = size_index_law(parts);
    const IndexLaw i2_law = zero_index_law(parts);

    struct PartPlan {
        bool gamma = false;
        double alpha = 0.0;
        DistPtr s;
        DistPtr z;
    };
    std::vector<PartPlan> plans;
    std::vector<std::vector<double>> background;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        PartPlan plan;
        double r = 0.0;
        plan.gamma = is_gamma_like(*parts[i], r, plan.alpha);
        if (!plan.gamma) {
            plan.s = size_bias(parts[i]);
            plan.z = zero_bias(parts[i]);
        }
        plans.push_back(plan);
        Rng stream = Rng::split(seed, i);
        background.push_back(sample(*parts[i], stream, n));
    }

    Rng rng = Rng::split(seed, parts.size());
    SumCoupling out;
    out.w_size.resize(n);
    out.w_zero.resize(n);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double w = 0.0;
        for (const auto& b : background) w += b[j];
        const double u = rng.uniform();
        const std::size_t i1 = i1_law.pick(u);
        const std::size_t i2 = i2_law.pick(u);
        double xs = 0.0;
        double xz = 0.0;
        if (i1 == i2) {
            const PartPlan& p = plans[i1];
            if (p.gamma) {
                const double y = -std::log(rng.uniform_open()) / p.alpha;
                xs = background[i1][j] + y;
                xz = xs;
            } else {
                const double v = rng.uniform_open();
                xs = quantile(*p.s, v);
                xz = quantile(*p.z, v);
            }
        } else {
            const PartPlan& a = plans[i1];
            const PartPlan& b = plans[i2];
            xs = a.gamma ? background[i1][j] - std::log(rng.uniform_open()) / a.alpha
                         : quantile(*a.s, rng.uniform_open());
            xz = b.gamma ? background[i2][j] - std::log(rng.uniform_open()) / b.alpha
                         : quantile(*b.z, rng.uniform_open());
        }
        out.w_size[j] = w - background[i1][j] + xs;
        out.w_zero[j] = w - background[i2][j] + xz;
        const double diff = std::fabs(out.w_size[j] - out.w_zero[j]);
        sum += diff;
        sum_sq += diff * diff;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
    out.theta.value = mean;
    out.theta.metric = Metric::wasserstein;
    out.theta.method = Method::monte_carlo;
    out.theta.error = std::sqrt(var / nn);
    out.theta.n = n;
    return out;
}

DistanceEstimate theta_exact(const DistPtr& d, const TransformOptions& options, double tol) {
    const DistPtr s = size_bias(d, options);
    const DistPtr z = zero_bias(d, options);
    return tol > 0.0 ? wasserstein(*s, *z, tol) : wasserstein(*s, *z);
}

DistanceEstimate theta_jump(const DistPtr& jump, const TransformOptions& options, double tol) {
    const DistPtr s = size_bias(jump, options);
    const DistPtr t = x_tilde(jump, options);
    return tol > 0.0 ? wasserstein(*s, *t, tol) : wasserstein(*s, *t);
}

}  // namespace steinlab
