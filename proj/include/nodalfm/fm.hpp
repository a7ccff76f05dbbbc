#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodalfm/identify.hpp"
#include "nodalfm/sheaf_desc.hpp"

namespace nodalfm {

struct NotSemistable : std::domain_error {
  using std::domain_error::domain_error;
};

// The dictionary between semistable degree-zero sheaves and torsion sheaves.
TorsionDesc fm_forward(const SheafDesc& e);
SheafDesc fm_inverse(const TorsionDesc& t);

// Module at the node of a singular torsion descriptor.
FiniteLengthModule module_of(const TorsionDesc& t);

// Charges: A = T_O, B = T_k(p0), T = [1], acting on (rank, degree) columns.
using IMat2 = std::array<std::array<long long, 2>, 2>;
struct TwistLetter {
  char gen;  // 'A', 'B' or 'T'
  int exp;   // +1 or -1
};
// Letters A, B, T, each optionally followed by ^-1; spaces ignored.
// Throws std::invalid_argument with the byte offset of the bad character.
std::vector<TwistLetter> parse_twist_word(const std::string& w);
IMat2 sl2_matrix(const std::vector<TwistLetter>& w);
IMat2 sl2_matrix(const std::string& w);
std::string to_string(const IMat2& m);

struct RelationResult {
  std::string name;
  bool pass = false;
};
std::vector<RelationResult> check_relations();

enum class Topology { Cycle, Chain };

// Line bundle data on the cycle or chain of n lines: degree d_ν on line ν,
// rank-m gluing by the identity at s_1..s_{n-1} and by `glue` at s_n (cycle).
struct GlueSpec {
  std::vector<int> d;
  Mat glue = Mat::identity(1);
  Topology topology = Topology::Cycle;

  int n() const { return static_cast<int>(d.size()); }
  int m() const { return glue.rows(); }
};

struct Cohomology {
  long long h0 = 0, h1 = 0;
};
// h0 = dim ker of the gluing map; h1 from its cokernel plus the h^1 of the
// line pieces. h0 - h1 = χ is then a check, not a definition.
Cohomology cohomology(const GlueSpec& g);
long long euler_characteristic(const GlueSpec& g);  // m Σd (cycle), m (Σd + 1) (chain)
// Basis of H^0 as columns over the coordinates (ν, a, j): coefficient of
// z0^a z1^(d_ν - a) in component j of f_ν, ν-major.
Mat h0_basis(const GlueSpec& g);

// GlueSpec of E(p0) for a band or string descriptor.
GlueSpec glue_spec_of_twist(const SheafDesc& e);

// Completed evaluation map at the node, H^0(E(p0)) ⊗ R -> E(p0)^_s.
// Uses the explicit section tables when d is in theorem orientation and
// the H^0 kernel basis otherwise. Throws NotSemistable / invalid_argument.
PolyPresentation build_eval_presentation(const SheafDesc& e);
// Always uses the kernel basis (cross-check).
PolyPresentation build_eval_presentation_generic(const SheafDesc& e);

struct VerifyReport {
  bool pass = false;
  std::string desc, expected;
  std::vector<std::string> identified;
  int length = 0;
  long long rank = 0;
  int order = 0;  // truncation order used
  std::vector<std::string> diagnostics;
};
VerifyReport verify_fm(const SheafDesc& e, uint64_t seed = 0, std::optional<int> trunc = std::nullopt);

struct DualCheckReport {
  bool pass = false;
  std::string desc, dual, image, dual_image;
  // singular images: descriptor side vs twisted Matlis of the image module,
  // and the same on the evaluation cokernels themselves
  bool label_side = false, eval_side = false;
  std::vector<std::string> diagnostics;
};
DualCheckReport fm_dual_check(const SheafDesc& e, uint64_t seed = 0);

}  // namespace nodalfm
