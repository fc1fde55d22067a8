#include "resolve.hpp"

#include <cmath>
#include <map>

#include "steinlab/distributions.hpp"
#include "steinlab/error.hpp"
#include "steinlab/special.hpp"

namespace steinlab::detail {

namespace {

constexpr double kTailMass = 1e-12;
constexpr std::size_t kMaxAtoms = 20'000'000;
constexpr double kDiscreteMass = 1.0 - 1e-9;

// Generates masses pmf(0), pmf(1), ... until the remaining mass is below
// kTailMass and the last terms no longer move moments up to order 4. `start` is the first support point.
template <class Pmf>
AtomTable integer_atoms(Pmf pmf, std::size_t start, double mode_hint) {
    std::vector<Atom> out;
    double cumulative = 0.0;
    for (std::size_t i = start;; ++i) {
        const double p = pmf(i);
        if (p > 0.0) out.push_back({static_cast<double>(i), p});
        cumulative += p;
        // Past the mode, stop once the tail is negligible for the cached
        // moment orders too, not only for the mass.
        const double x = std::max(1.0, static_cast<double>(i));
        if (static_cast<double>(i) > mode_hint && 1.0 - cumulative <= kTailMass && p * x * x * x * x < 1e-17) break;
        if (out.size() > kMaxAtoms) throw NumericalError("atom table exceeds size cap");
    }
    return AtomTable(std::move(out));
}

AtomTable panjer(double lambda, const AtomTable& jump) {
    double span = 0.0;
    for (const Atom& a : jump.atoms()) {
        if (a.x > 0.0 && (span == 0.0 || a.x < span)) span = a.x;
    }
    if (span == 0.0) return AtomTable({{0.0, 1.0}});
    struct Term {
        std::size_t index;
        double weight;  // j q_j
    };
    std::vector<Term> terms;
    double q0 = 0.0;
    for (const Atom& a : jump.atoms()) {
        if (a.x == 0.0) {
            q0 += a.p;
            continue;
        }
        const double ratio = a.x / span;
        const double idx = std::round(ratio);
        terms.push_back({static_cast<std::size_t>(idx), idx * a.p});
    }
    const double log_g0 = -lambda * (1.0 - q0);
    if (log_g0 < -700.0) {
        throw NumericalError("compound Poisson: P(W = 0) underflows; Panjer recursion unavailable");
    }
    std::vector<double> g{std::exp(log_g0)};
    double cumulative = g[0];
    const double mean_index = lambda * jump.moment(1) / span;
    const std::size_t reach = terms.empty() ? 1 : terms.back().index;
    for (std::size_t n = 1;; ++n) {
        double s = 0.0;
        for (const Term& t : terms) {
            if (t.index > n) break;
            s += t.weight * g[n - t.index];
        }
        const double gn = lambda * s / static_cast<double>(n);
        g.push_back(gn);
        cumulative += gn;
        // The recursion can leave gaps (jumps on even indices only), so
        // judge the tail on the last `reach` values.
        double recent = 0.0;
        for (std::size_t k = n >= reach ? n - reach + 1 : 0; k <= n; ++k) recent += g[k];
        const double x = std::max(1.0, span * static_cast<double>(n));
        if (static_cast<double>(n) > mean_index && 1.0 - cumulative <= kTailMass && recent * x * x * x * x < 1e-17)
            break;
        if (n > kMaxAtoms) throw NumericalError("Panjer recursion exceeds size cap");
    }
    std::vector<Atom> out;
    out.reserve(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) out.push_back({span * static_cast<double>(n), g[n]});
    return AtomTable(std::move(out));
}

bool on_lattice(const AtomTable& t) {
    double span = 0.0;
    for (const Atom& a : t.atoms()) {
        if (a.x > 0.0 && (span == 0.0 || a.x < span)) span = a.x;
    }
    if (span == 0.0) return true;
    for (const Atom& a : t.atoms()) {
        const double ratio = a.x / span;
        if (std::fabs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) return false;
        if (ratio > 5e7) return false;
    }
    return true;
}

void flatten(const DistPtr& d, std::vector<DistPtr>& out) {
    if (const auto* c = d->as<family::Convolution>()) {
        for (const DistPtr& p : c->parts) flatten(p, out);
    } else {
        out.push_back(d);
    }
}

std::unique_ptr<Resolved> resolve_convolution(const family::Convolution& conv) {
    std::vector<DistPtr> parts;
    for (const DistPtr& p : conv.parts) flatten(p, parts);

    std::map<double, double> gamma_by_rate;  // rate -> total shape
    AtomTable discrete({{0.0, 1.0}});
    std::vector<DistPtr> continuous;
    for (const DistPtr& p : parts) {
        if (const auto* g = p->as<family::Gamma>()) {
            gamma_by_rate[g->alpha] += g->r;
        } else if (const auto* e = p->as<family::Exponential>()) {
            gamma_by_rate[e->alpha] += 1.0;
        } else if (atom_mass(*p) >= kDiscreteMass) {
            discrete = convolve(discrete, AtomTable(atoms(*p)));
        } else {
            continuous.push_back(p);
        }
    }
    for (const auto& [rate, shape] : gamma_by_rate) continuous.push_back(make_gamma(shape, rate));

    auto out = std::make_unique<Resolved>();
    if (continuous.empty()) {
        out->form = Resolved::Form::atoms;
        out->table = std::move(discrete);
        return out;
    }
    DistPtr smooth = continuous.front();
    if (continuous.size() > 1) {
        auto grid = std::make_shared<const NumericLaw>(convolution_law(continuous));
        smooth = make_dist(family::Numeric{grid});
        if (discrete.size() == 1 && discrete.atoms()[0].x == 0.0) {
            out->form = Resolved::Form::grid;
            out->grid = std::move(grid);
            return out;
        }
    }
    out->form = Resolved::Form::shift_mix;
    out->table = std::move(discrete);
    out->continuous = std::move(smooth);
    return out;
}

std::unique_ptr<Resolved> resolve_compound(const family::CompoundPoisson& cp) {
    auto out = std::make_unique<Resolved>();
    if (atom_mass(*cp.jump) >= kDiscreteMass) {
        AtomTable jump(atoms(*cp.jump));
        if (on_lattice(jump)) {
            out->form = Resolved::Form::atoms;
            out->table = panjer(cp.lambda, jump);
            return out;
        }
    }
    out->form = Resolved::Form::grid;
    out->grid = std::make_shared<const NumericLaw>(compound_poisson_law(cp.lambda, *cp.jump));
    return out;
}

}  // namespace

AtomTable family_atoms(const Dist& d) {
    if (const auto* p = d.as<family::Poisson>()) {
        const double lam = p->lambda;
        return integer_atoms(
            [lam](std::size_t k) {
                const double kk = static_cast<double>(k);
                return std::exp(kk * std::log(lam) - lam - special::log_gamma(kk + 1.0));
            },
            0, lam);
    }
    if (const auto* g = d.as<family::Geometric>()) {
        const double q = g->p;
        return integer_atoms(
            [q](std::size_t k) { return q * std::exp(static_cast<double>(k) * std::log1p(-q)); }, 0,
            (1.0 - q) / q);
    }
    if (const auto* nb = d.as<family::NegativeBinomial>()) {
        const double kappa = nb->kappa;
        const double q = nb->p;
        const double log_q = std::log(q);
        const double log_1q = std::log1p(-q);
        const double lg_kappa = special::log_gamma(kappa);
        return integer_atoms(
            [=](std::size_t i) {
                const double ii = static_cast<double>(i);
                return std::exp(special::log_gamma(kappa + ii) - lg_kappa - special::log_gamma(ii + 1.0) +
                                kappa * log_q + ii * log_1q);
            },
            0, kappa * (1.0 - q) / q);
    }
    if (const auto* l = d.as<family::Logarithmic>()) {
        const double q = l->p;
        const double scale = -1.0 / std::log(q);
        const double log_1q = std::log1p(-q);
        return integer_atoms(
            [=](std::size_t i) {
                const double ii = static_cast<double>(i);
                return scale * std::exp(ii * log_1q) / ii;
            },
            1, 1.0);
    }
    if (const auto* dd = d.as<family::Discrete>()) {
        std::vector<Atom> out;
        for (std::size_t i = 0; i < dd->x.size(); ++i) out.push_back({dd->x[i], dd->p[i]});
        return AtomTable(std::move(out));
    }
    if (const auto* e = d.as<family::Empirical>()) {
        std::vector<Atom> out;
        const double w = 1.0 / static_cast<double>(e->samples.size());
        for (double s : e->samples) out.push_back({s, w});
        return AtomTable(std::move(out));
    }
    throw DomainError("not a discrete family");
}

std::unique_ptr<const Resolved> resolve(const Dist& d) {
    auto out = std::make_unique<Resolved>();
    const auto& v = d.variant();
    if (std::holds_alternative<family::Poisson>(v) || std::holds_alternative<family::Geometric>(v) ||
        std::holds_alternative<family::NegativeBinomial>(v) ||
        std::holds_alternative<family::Logarithmic>(v) || std::holds_alternative<family::Discrete>(v) ||
        std::holds_alternative<family::Empirical>(v)) {
        out->form = Resolved::Form::atoms;
        out->table = family_atoms(d);
        return out;
    }
    if (const auto* n = d.as<family::Numeric>()) {
        out->form = Resolved::Form::grid;
        out->grid = n->law;
        return out;
    }
    if (const auto* c = d.as<family::Convolution>()) return resolve_convolution(*c);
    if (const auto* cp = d.as<family::CompoundPoisson>()) return resolve_compound(*cp);
    return out;
}

}  // namespace steinlab::detail
