#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nodalfm/linalg.hpp"

namespace nodalfm {

// A finite-length module over k[[x,y]]/(xy): a vector space with the actions
// of x and y as matrices (column convention, X e_j = column j).
struct FiniteLengthModule {
  int dim = 0;
  Mat X, Y;

  FiniteLengthModule() : X(0, 0), Y(0, 0) {}
  FiniteLengthModule(Mat x, Mat y);

  // Throws std::invalid_argument unless XY = YX = 0 and both are nilpotent.
  void validate() const;
  bool operator==(const FiniteLengthModule& o) const { return X == o.X && Y == o.Y; }
};

FiniteLengthModule zero_module();
FiniteLengthModule direct_sum(const FiniteLengthModule& a, const FiniteLengthModule& b);
FiniteLengthModule direct_sum(const std::vector<FiniteLengthModule>& ms);

// Smallest k with A^k = 0 (A nilpotent), capped at dim.
int nilpotency_index(const Mat& a);

// For 0 <= a,b <= dim, in row-major (a,b) order, the eight numbers
// dim im X^a, dim im Y^b, dim ker X^a ∩ ker Y^b, dim im X^a + im Y^b,
// dim X^a(ker Y^b), dim Y^b(ker X^a), dim im X^a ∩ ker Y^b, dim im Y^b ∩ ker X^a.
std::vector<int> rank_profile(const FiniteLengthModule& m);

enum class IsoOutcome { Isomorphic, NotIsomorphic, Undecided };

struct IsoResult {
  IsoOutcome outcome = IsoOutcome::Undecided;
  std::string reason;
  int hom_ab = -1, hom_ba = -1;
  bool isomorphic() const { return outcome == IsoOutcome::Isomorphic; }
};

IsoResult is_isomorphic(const FiniteLengthModule& a, const FiniteLengthModule& b, uint64_t seed = 0,
                        const RandomConfig& cfg = {});

std::vector<Mat> hom_space(const FiniteLengthModule& a, const FiniteLengthModule& b);
std::vector<Mat> end_space(const FiniteLengthModule& a);

FiniteLengthModule matlis_dual(const FiniteLengthModule& m);
FiniteLengthModule involution_pullback(const FiniteLengthModule& m);
FiniteLengthModule twisted_matlis(const FiniteLengthModule& m);

// Change of basis: columns of p form the new basis, returns p^{-1} A p.
FiniteLengthModule conjugate(const FiniteLengthModule& m, const Mat& p);

// Restriction to an invariant subspace spanned by the columns of b.
FiniteLengthModule restrict_to(const FiniteLengthModule& m, const Mat& b);

}  // namespace nodalfm
