#include "steinlab/dist.hpp"

#include <cmath>
#include <string>

#include "resolve.hpp"
#include "steinlab/error.hpp"

namespace steinlab {

std::string_view to_string(BiasKind kind) noexcept {
    switch (kind) {
        case BiasKind::size: return "size";
        case BiasKind::zero: return "zero";
        case BiasKind::equilibrium: return "equilibrium";
    }
    return "size";
}

BiasKind parse_bias_kind(std::string_view text) {
    if (text == "size") return BiasKind::size;
    if (text == "zero") return BiasKind::zero;
    if (text == "equilibrium") return BiasKind::equilibrium;
    throw DomainError("bias kind must be one of size|zero|equilibrium, got '" + std::string(text) + "'");
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(what);
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool unit_open(double v) { return v > 0.0 && v < 1.0; }

struct Validator {
    void operator()(const family::Gamma& g) const {
        require(positive(g.r), "gamma: shape must be > 0");
        require(positive(g.alpha), "gamma: rate must be > 0");
    }
    void operator()(const family::Exponential& e) const {
        require(positive(e.alpha), "exponential: rate must be > 0");
    }
    void operator()(const family::Uniform& u) const {
        require(std::isfinite(u.a) && std::isfinite(u.b), "uniform: endpoints must be finite");
        require(u.a >= 0.0, "uniform: lower endpoint must be >= 0");
        require(u.b > u.a, "uniform: upper endpoint must exceed lower endpoint");
    }
    void operator()(const family::Discrete& d) const {
        require(!d.x.empty(), "discrete: needs at least one atom");
        require(d.x.size() == d.p.size(), "discrete: locations and masses must have equal length");
        double total = 0.0;
        for (std::size_t i = 0; i < d.x.size(); ++i) {
            require(std::isfinite(d.x[i]) && d.x[i] >= 0.0, "discrete: locations must be finite and >= 0");
            require(d.p[i] >= 0.0 && std::isfinite(d.p[i]), "discrete: masses must be >= 0");
            total += d.p[i];
        }
        require(std::fabs(total - 1.0) <= 1e-12, "discrete: masses must sum to 1");
    }
    void operator()(const family::Poisson& p) const {
        require(positive(p.lambda), "poisson: rate must be > 0");
    }
    void operator()(const family::Geometric& g) const {
        require(unit_open(g.p), "geometric: p must lie in (0, 1)");
    }
    void operator()(const family::NegativeBinomial& nb) const {
        require(positive(nb.kappa), "nb: kappa must be > 0");
        require(unit_open(nb.p), "nb: p must lie in (0, 1)");
    }
    void operator()(const family::Logarithmic& l) const {
        require(unit_open(l.p), "logarithmic: p must lie in (0, 1)");
    }
    void operator()(const family::GammaLevyJump& j) const {
        require(positive(j.delta), "levyjump: delta must be > 0");
    }
    void operator()(const family::Scaled& s) const {
        require(positive(s.c), "scaled: factor must be > 0");
        require(s.inner != nullptr, "scaled: inner law missing");
    }
    void operator()(const family::Convolution& c) const {
        require(!c.parts.empty(), "conv: needs at least one part");
        for (const DistPtr& p : c.parts) require(p != nullptr, "conv: part missing");
    }
    void operator()(const family::CompoundPoisson& cp) const {
        require(positive(cp.lambda), "cp: rate must be > 0");
        require(cp.jump != nullptr, "cp: jump law missing");
    }
    void operator()(const family::Empirical& e) const {
        require(!e.samples.empty(), "empirical: needs at least one sample");
        for (std::size_t i = 0; i < e.samples.size(); ++i) {
            require(std::isfinite(e.samples[i]) && e.samples[i] >= 0.0,
                    "empirical: samples must be finite and >= 0");
            require(i == 0 || e.samples[i - 1] <= e.samples[i], "empirical: samples must be sorted");
        }
    }
    void operator()(const family::Numeric& n) const {
        require(n.law != nullptr, "numeric: table missing");
    }
    void operator()(const family::Biased& b) const {
        require(b.inner != nullptr, "bias: inner law missing");
    }
};

struct FamilyName {
    std::string_view operator()(const family::Gamma&) const { return "gamma"; }
    std::string_view operator()(const family::Exponential&) const { return "exponential"; }
    std::string_view operator()(const family::Uniform&) const { return "uniform"; }
    std::string_view operator()(const family::Discrete&) const { return "discrete"; }
    std::string_view operator()(const family::Poisson&) const { return "poisson"; }
    std::string_view operator()(const family::Geometric&) const { return "geometric"; }
    std::string_view operator()(const family::NegativeBinomial&) const { return "nb"; }
    std::string_view operator()(const family::Logarithmic&) const { return "logarithmic"; }
    std::string_view operator()(const family::GammaLevyJump&) const { return "levyjump"; }
    std::string_view operator()(const family::Scaled&) const { return "scaled"; }
    std::string_view operator()(const family::Convolution&) const { return "conv"; }
    std::string_view operator()(const family::CompoundPoisson&) const { return "cp"; }
    std::string_view operator()(const family::Empirical&) const { return "empirical"; }
    std::string_view operator()(const family::Numeric&) const { return "numeric"; }
    std::string_view operator()(const family::Biased&) const { return "bias"; }
};

}  // namespace

Dist::Dist(DistVariant v) : v_(std::move(v)) { std::visit(Validator{}, v_); }

Dist::~Dist() = default;

std::string_view Dist::family_name() const noexcept { return std::visit(FamilyName{}, v_); }

const detail::Resolved& Dist::resolved() const {
    std::call_once(once_, [this] { resolved_ = detail::resolve(*this); });
    return *resolved_;
}

DistPtr make_dist(DistVariant v) { return std::make_shared<const Dist>(std::move(v)); }

DistPtr make_gamma(double r, double alpha) { return make_dist(family::Gamma{r, alpha}); }
DistPtr make_exponential(double alpha) { return make_dist(family::Exponential{alpha}); }
DistPtr make_uniform(double a, double b) { return make_dist(family::Uniform{a, b}); }
DistPtr make_point(double c) { return make_dist(family::Discrete{{c}, {1.0}}); }
DistPtr make_discrete(std::vector<double> x, std::vector<double> p) {
    return make_dist(family::Discrete{std::move(x), std::move(p)});
}
DistPtr make_poisson(double lambda) { return make_dist(family::Poisson{lambda}); }
DistPtr make_geometric(double p) { return make_dist(family::Geometric{p}); }
DistPtr make_negative_binomial(double kappa, double p) {
    return make_dist(family::NegativeBinomial{kappa, p});
}
DistPtr make_logarithmic(double p) { return make_dist(family::Logarithmic{p}); }
DistPtr make_gamma_levy_jump(double delta) { return make_dist(family::GammaLevyJump{delta}); }
DistPtr make_scaled(double c, DistPtr inner) { return make_dist(family::Scaled{c, std::move(inner)}); }
DistPtr make_convolution(std::vector<DistPtr> parts) {
    return make_dist(family::Convolution{std::move(parts)});
}
DistPtr make_compound_poisson(double lambda, DistPtr jump) {
    return make_dist(family::CompoundPoisson{lambda, std::move(jump)});
}
DistPtr make_empirical(std::vector<double> samples) {
    return make_dist(family::Empirical{std::move(samples)});
}
DistPtr make_numeric(NumericLaw law) {
    return make_dist(family::Numeric{std::make_shared<const NumericLaw>(std::move(law))});
}
DistPtr make_biased(BiasKind kind, DistPtr inner) {
    return make_dist(family::Biased{kind, std::move(inner)});
}

}  // namespace steinlab
