#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "steinlab/dist.hpp"

namespace steinlab {

/// Parses the text form `family:key=value,...`.
///
///   gamma:r=2,alpha=1              exponential:alpha=1
///   uniform:a=0,b=1                point:c=1
///   discrete:x=[0;2],p=[0.5;0.5]   poisson:lambda=1
///   geometric:p=0.5                nb:kappa=2,p=0.1
///   logarithmic:p=0.5              levyjump:delta=0.01
///   scaled:c=0.1,inner=(nb:kappa=2,p=0.1)
///   conv:parts=[gamma:r=1,alpha=1;(uniform:a=0,b=1)]
///   cp:lambda=2,jump=(point:c=1)   empirical:samples=[0.1;0.5;2]
///   bias:kind=zero,inner=(uniform:a=0,b=1)
///
/// Whitespace is not allowed. Throws SpecSyntaxError (with the byte offset)
/// on malformed text and DomainError on parameter-domain violations.
DistPtr parse_dist(std::string_view text);

/// Inverse of parse_dist: parse_dist(format_dist(d)) describes the same
/// law and formats to the same string. Numbers are written with 17
/// significant digits. Numeric laws have no text form (DomainError).
std::string format_dist(const Dist& d);

nlohmann::json to_json(const Dist& d);
DistPtr dist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NumericLaw& law);
NumericLaw numeric_law_from_json(const nlohmann::json& j);

}  // namespace steinlab
