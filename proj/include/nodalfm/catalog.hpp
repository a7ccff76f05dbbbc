#pragma once

#include <vector>

#include "nodalfm/sheaf_desc.hpp"

namespace nodalfm {

// Every band-shape d = (1,0^(n1-1),-1,0^(m1-1),...) with 2 <= |d| <= max_n,
// non-periodic, in the orientation starting with 1.
std::vector<std::vector<int>> band_shapes(int max_n);
// Every string-shape d = (0^n1,-1,0^m1,1,...,-1,0^mN) with |d| <= max_n.
std::vector<std::vector<int>> string_shapes(int max_n);

}  // namespace nodalfm
