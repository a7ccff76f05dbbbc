#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "nodalfm/fm.hpp"

namespace nodalfm {

struct ParseError : std::invalid_argument {
  enum class Kind { Syntax, Semantic };
  ParseError(Kind k, std::size_t off, const std::string& msg);
  Kind kind;
  std::size_t offset;  // byte offset into the input
};

// Either a sheaf descriptor (B[..], S[..]) or a torsion one (Mq[..], Nq[..], P[..]).
struct ParsedDesc {
  bool is_sheaf = true;
  SheafDesc sheaf;
  TorsionDesc torsion;
};

ParsedDesc parse_desc(const std::string& text);
SheafDesc parse_sheaf(const std::string& text);
TorsionDesc parse_torsion(const std::string& text);

// Modules as {"field": "Q", "dim": n, "X": [[..],..], "Y": [[..],..]},
// entries as strings "p/q" (integers may be JSON numbers). Flat row-major
// arrays of length dim^2 are accepted on input.
nlohmann::json module_to_json(const FiniteLengthModule& m);
FiniteLengthModule module_from_json(const nlohmann::json& j);  // validates; throws std::invalid_argument

// Band or string diagram in Graphviz DOT.
std::string emit_dot(const TorsionDesc& t);

nlohmann::json to_json(const VerifyReport& r);
nlohmann::json to_json(const DualCheckReport& r);
nlohmann::json to_json(const IdentifyResult& r);

}  // namespace nodalfm
