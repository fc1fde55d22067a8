#pragma once

#include <memory>
#include <mutex>
#include <string_view>
#include <variant>
#include <vector>

#include "steinlab/atoms.hpp"
#include "steinlab/numeric_law.hpp"

namespace steinlab {

class Dist;
using DistPtr = std::shared_ptr<const Dist>;

enum class BiasKind { size, zero, equilibrium };

std::string_view to_string(BiasKind kind) noexcept;
BiasKind parse_bias_kind(std::string_view text);

namespace family {

/// Gamma(r, alpha): density alpha^r x^{r-1} e^{-alpha x} / Gamma(r).
struct Gamma {
    double r;
    double alpha;
};
struct Exponential {
    double alpha;
};
struct Uniform {
    double a;
    double b;
};
/// Finite list of point masses (a point mass is the one-atom case).
struct Discrete {
    std::vector<double> x;
    std::vector<double> p;
};
struct Poisson {
    double lambda;
};
/// Mass p (1-p)^k on k = 0, 1, ...
struct Geometric {
    double p;
};
/// Mass Gamma(kappa+i) / (Gamma(kappa) i!) p^kappa (1-p)^i on i = 0, 1, ...
struct NegativeBinomial {
    double kappa;
    double p;
};
/// Mass -(1-p)^i / (i ln p) on i = 1, 2, ...
struct Logarithmic {
    double p;
};
/// Density e^{-x} / (lambda_delta x) on [delta, inf), lambda_delta = E1(delta):
/// the normalized Levy measure of the gamma process cut below delta.
struct GammaLevyJump {
    double delta;
};
struct Scaled {
    double c;
    DistPtr inner;
};
/// Independent sum.
struct Convolution {
    std::vector<DistPtr> parts;
};
struct CompoundPoisson {
    double lambda;
    DistPtr jump;
};
struct Empirical {
    std::vector<double> samples;
};
struct Numeric {
    std::shared_ptr<const NumericLaw> law;
};
/// Transform result without a closed form: evaluated through the partial
/// moments of `inner`.
struct Biased {
    BiasKind kind;
    DistPtr inner;
};

}  // namespace family

using DistVariant =
    std::variant<family::Gamma, family::Exponential, family::Uniform, family::Discrete,
                 family::Poisson, family::Geometric, family::NegativeBinomial,
                 family::Logarithmic, family::GammaLevyJump, family::Scaled,
                 family::Convolution, family::CompoundPoisson, family::Empirical,
                 family::Numeric, family::Biased>;

namespace detail {
struct Resolved;
}

/// Immutable descriptor of a univariate law on [0, inf).
///
/// Always held through DistPtr. Laws that need tables for evaluation
/// (atom lists, convolution grids) build them once, on first use, in a
/// thread-safe way; every other member is const.
class Dist {
public:
    explicit Dist(DistVariant v);
    Dist(const Dist&) = delete;
    Dist& operator=(const Dist&) = delete;
    ~Dist();

    const DistVariant& variant() const noexcept { return v_; }

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&v_);
    }

    std::string_view family_name() const noexcept;

    const detail::Resolved& resolved() const;

private:
    DistVariant v_;
    mutable std::once_flag once_;
    mutable std::unique_ptr<const detail::Resolved> resolved_;
};

/// Validates and wraps. Throws DomainError naming the violated constraint.
DistPtr make_dist(DistVariant v);

DistPtr make_gamma(double r, double alpha);
DistPtr make_exponential(double alpha);
DistPtr make_uniform(double a, double b);
DistPtr make_point(double c);
DistPtr make_discrete(std::vector<double> x, std::vector<double> p);
DistPtr make_poisson(double lambda);
DistPtr make_geometric(double p);
DistPtr make_negative_binomial(double kappa, double p);
DistPtr make_logarithmic(double p);
DistPtr make_gamma_levy_jump(double delta);
DistPtr make_scaled(double c, DistPtr inner);
DistPtr make_convolution(std::vector<DistPtr> parts);
DistPtr make_compound_poisson(double lambda, DistPtr jump);
DistPtr make_empirical(std::vector<double> samples);
DistPtr make_numeric(NumericLaw law);
DistPtr make_biased(BiasKind kind, DistPtr inner);

}  // namespace steinlab
