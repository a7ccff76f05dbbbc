#include <random>
#include <regex>

#include "doctest.h"
#include "nodalfm/catalog.hpp"
#include "nodalfm/cli_io.hpp"

using namespace nodalfm;

namespace {

int count(const std::string& s, const std::string& re) {
  std::regex r(re);
  return static_cast<int>(std::distance(std::sregex_iterator(s.begin(), s.end(), r), std::sregex_iterator()));
}

ParseError::Kind error_kind(const std::string& s) {
  try {
    parse_desc(s);
  } catch (const ParseError& e) {
    return e.kind;
  }
  FAIL("no error for " << s);
  return ParseError::Kind::Syntax;
}

std::size_t error_offset(const std::string& s) {
  try {
    parse_desc(s);
  } catch (const ParseError& e) {
    return e.offset;
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("descriptor grammar") {
  auto p = parse_desc("S[d=(-1)]");
  REQUIRE(p.is_sheaf);
  CHECK(p.sheaf == SheafDesc(StringSheafDesc::make({-1})));

  p = parse_desc(" Mq[ (1, 1) ; m = 1 ; l = -5 ] ");
  REQUIRE(!p.is_sheaf);
  CHECK(p.torsion == TorsionDesc::of(BandLabel::make({{1, 1}}, 1, Rational(-5))));

  CHECK(parse_torsion("Nq[2(3,2)1]") == TorsionDesc::of(StringLabel::make(2, {{3, 2}}, 1)));
  CHECK(parse_torsion("Nq[0()0]") == TorsionDesc::of(StringLabel::make(0, {}, 0)));
  CHECK(parse_torsion("P[l=1/3;len=2]") == TorsionDesc::smooth_point(Rational(1, 3), 2));
  CHECK(parse_sheaf("B[d=(1,0,-1);m=2;l=+3/6]") == SheafDesc(BandSheafDesc::make({1, 0, -1}, 2, Rational(1, 2))));
}

TEST_CASE("descriptor grammar errors") {
  CHECK(error_kind("B[d=(1,1);m=1;l=0]") == ParseError::Kind::Semantic);
  CHECK(error_offset("B[d=(1,1);m=1;l=0]") == 16);
  CHECK(error_kind("B[d=(1,-1,1,-1);m=1;l=2]") == ParseError::Kind::Semantic);
  CHECK(error_kind("B[d=(1,-1);m=0;l=2]") == ParseError::Kind::Semantic);
  CHECK(error_kind("P[l=2;len=0]") == ParseError::Kind::Semantic);
  CHECK(error_kind("Mq[(0,1);m=1;l=2]") == ParseError::Kind::Semantic);
  CHECK(error_kind("Mq[(1,1)(1,1);m=1;l=2]") == ParseError::Kind::Semantic);
  CHECK(error_kind("B[d=(1,-1);m=1;l=1/0]") == ParseError::Kind::Semantic);

  CHECK(error_kind("B[d=(1,-1);m=1]") == ParseError::Kind::Syntax);
  CHECK(error_offset("B[d=(1,-1);m=1]") == 14);
  CHECK(error_kind("S[d=()]") == ParseError::Kind::Syntax);
  CHECK(error_kind("Q[d=(1)]") == ParseError::Kind::Syntax);
  CHECK(error_offset("S[d=(1)] x") == 9);
  CHECK(error_kind("Nq[2(3,2]") == ParseError::Kind::Syntax);
  CHECK(error_kind("P[l=a;len=1]") == ParseError::Kind::Syntax);
  CHECK_THROWS_AS(parse_sheaf("P[l=1;len=1]"), ParseError);
  CHECK_THROWS_AS(parse_torsion("S[d=(0)]"), ParseError);
}

TEST_CASE("parse of print is the identity") {
  for (auto& d : band_shapes(6))
    for (int m : {1, 3})
      for (Rational l : {Rational(2), Rational(-1), Rational(1, 3)}) {
        SheafDesc s = BandSheafDesc::make(d, m, l);
        CHECK(parse_sheaf(to_string(s)) == s);
        TorsionDesc t = fm_forward(s);
        CHECK(parse_torsion(to_string(t)) == t);
      }
  for (auto& d : string_shapes(6)) {
    SheafDesc s = StringSheafDesc::make(d);
    CHECK(parse_sheaf(to_string(s)) == s);
    TorsionDesc t = fm_forward(s);
    CHECK(parse_torsion(to_string(t)) == t);
  }
  TorsionDesc p = TorsionDesc::smooth_point(Rational(-7, 2), 4);
  CHECK(parse_torsion(to_string(p)) == p);
}

TEST_CASE("module JSON") {
  FiniteLengthModule m = band_module(BandLabel::make({{2, 1}, {1, 3}}, 2, Rational(-2, 3)));
  auto j = module_to_json(m);
  CHECK(j["field"] == "Q");
  CHECK(module_from_json(nlohmann::json::parse(j.dump())) == m);

  auto flat = nlohmann::json::parse(R"({"dim":2,"X":[0,0,1,0],"Y":["0","0","0","0"]})");
  FiniteLengthModule f = module_from_json(flat);
  CHECK(f.X(1, 0) == Rational(1));

  auto nested = nlohmann::json::parse(R"({"field":"Q","dim":2,"X":[["0","0"],["1/2","0"]],"Y":[[0,0],[0,0]]})");
  CHECK(module_from_json(nested).X(1, 0) == Rational(1, 2));

  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"field":"Fp:7","dim":1,"X":[[0]],"Y":[[0]]})")));
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":1,"X":[[1]],"Y":[[0]]})")));  // not nilpotent
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":2,"X":[[0,1],[0,0]],"Y":[[0,0],[1,0]]})")));
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":2,"X":[[0,0]],"Y":[[0,0],[0,0]]})")));
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":1,"X":[["x"]],"Y":[[0]]})")));
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":1,"X":[["1/0"]],"Y":[[0]]})")));
  CHECK_THROWS(module_from_json(nlohmann::json::parse(R"({"dim":1,"X":[[0.5]],"Y":[[0]]})")));
}

TEST_CASE("diagram DOT output") {
  std::string s = emit_dot(parse_torsion("Nq[2(3,2)1]"));
  CHECK(count(s, R"(\n  v\d+ \[)") == 9);
  CHECK(count(s, "->") == 8);

  std::string b = emit_dot(parse_torsion("Mq[(2,2)(3,4)(1,3);m=1;l=2]"));
  CHECK(count(b, R"(\n  v\d+ \[)") == 15);
  CHECK(count(b, "->") == 15);
  CHECK(count(b, "J_1") == 1);

  CHECK_THROWS(emit_dot(TorsionDesc::smooth_point(Rational(1), 1)));

  // node count is the dimension and the graph is a path or a cycle
  for (auto& d : string_shapes(7)) {
    TorsionDesc t = fm_forward(StringSheafDesc::make(d));
    std::string g = emit_dot(t);
    int n = t.str.dim();
    CHECK(count(g, R"(\n  v\d+ \[)") == n);
    CHECK(count(g, "->") == n - 1);
  }
  for (auto& d : band_shapes(7)) {
    TorsionDesc t = fm_forward(BandSheafDesc::make(d, 2, Rational(3)));
    std::string g = emit_dot(t);
    int n = t.band.dim() / 2;
    CHECK(count(g, R"(\n  v\d+ \[)") == n);
    CHECK(count(g, "->") == n);
    CHECK(count(g, "J_2") == 1);
  }
}
