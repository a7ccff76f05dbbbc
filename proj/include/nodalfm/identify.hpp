#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nodalfm/labels.hpp"
#include "nodalfm/poly.hpp"

namespace nodalfm {

struct IdentifyResult {
  bool identified = false;
  std::vector<IndecLabel> labels;  // canonical multiset, sorted
  std::vector<std::string> diagnostics;
  // Transfer-map characteristic polynomials that were not a power of a
  // rational linear factor (band parameter outside Q).
  std::vector<UPoly> transfer_charpolys;
};

// Decomposes M into indecomposables and names each one. The answer is only
// returned as identified after is_isomorphic certifies the direct sum of
// the named modules against M.
IdentifyResult identify(const FiniteLengthModule& m, uint64_t seed = 0);

// Pieces exposed for testing.

// Splits M into blocks, each either indecomposable or (as far as the
// endomorphism ring can tell) a power A^k of one indecomposable.
struct Block {
  FiniteLengthModule module;
  int multiplicity = 1;    // k, from dim End/rad = k^2
  int semisimple_dim = 1;  // dim End/rad
};
std::vector<Block> split_module(const FiniteLengthModule& m, uint64_t seed);

// Dimension of the radical of the algebra spanned by basis (trace form).
int radical_dim(const std::vector<Mat>& basis);

// Peak counts p(a,b) (x-leg a, y-leg b) and valley counts v(α,β) (depths),
// keyed by pair.
struct PeakValleyData {
  std::vector<std::pair<std::pair<int, int>, int>> peaks, valleys;
};
PeakValleyData peaks_and_valleys(const FiniteLengthModule& m);

// Characteristic polynomial of the transfer map of the band word q on M,
// restricted to its regular part; empty when the regular part is zero.
UPoly transfer_charpoly(const FiniteLengthModule& m, const Pairs& q, int* regular_dim = nullptr);

}  // namespace nodalfm
