#pragma once

#include <string_view>

#include "polarsphere/set_model.hpp"

namespace polarsphere {

/// Parses the set mini-format (see docs/set_spec.md):
///   cap:<t1,...>:<radius>   hemi[:<t1,...>]   union(...)   inter(...)   compl(...)
/// Angles are radians; t1 is the polar angle from the north pole. A bare `hemi`
/// is centered at polar angle default_alpha. Throws UsageError on bad input.
SetExpr parse_set_spec(std::string_view text, Dimension d, double default_alpha = 0.2);

}  // namespace polarsphere
