#pragma once

#include <memory>

#include "steinlab/atoms.hpp"
#include "steinlab/dist.hpp"
#include "steinlab/numeric_law.hpp"

namespace steinlab::detail {

/// Evaluation form of laws that need tables.
///   atoms:     the law is `table`
///   shift_mix: the law is sum_a p_a * (a + continuous)
///   grid:      the law is `grid`
///   direct:    evaluated by formula from the variant itself
struct Resolved {
    enum class Form { direct, atoms, shift_mix, grid };
    Form form = Form::direct;
    AtomTable table;
    DistPtr continuous;
    std::shared_ptr<const NumericLaw> grid;
};

std::unique_ptr<const Resolved> resolve(const Dist& d);

/// Atom list of a discrete parametric family, truncated at cumulative mass
/// 1 - 1e-12.
AtomTable family_atoms(const Dist& d);

}  // namespace steinlab::detail
