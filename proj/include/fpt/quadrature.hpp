#pragma once

#include <utility>
#include <vector>

namespace fpt {

/// Gauss-Legendre nodes and weights on [lo, hi]. Computed by Newton
/// iteration on the Legendre recurrence and cached per order.
std::vector<std::pair<double, double>> gauss_legendre_nodes(int n, double lo, double hi);

}  // namespace fpt
