#pragma once

// Extended-precision harmonics for building the coupling tables; the public
// API stays in double.

#include <array>
#include <vector>

namespace irrepcore::sh::detail {

/// Same values and layout as eval_solid_sh, in long double.
std::vector<long double> solid_values_extended(const std::array<long double, 3>& r, int max_degree);

}  // namespace irrepcore::sh::detail
