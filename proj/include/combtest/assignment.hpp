#pragma once

#include <span>
#include <vector>

namespace combtest {

// Maximum-weight perfect matching of K_{m,m} by the shortest augmenting
// path (Hungarian) method with potentials, O(m^3).
//
// `weights` is row-major m x m. Returns column[r] (0-based) matched to each
// row r.
std::vector<int> max_weight_assignment(std::span<const double> weights, int m);

}  // namespace combtest
