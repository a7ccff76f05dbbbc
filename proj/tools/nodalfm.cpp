// Command-line front end: dictionary, duals, identification, verification.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nodalfm/cli_io.hpp"
#include "nodalfm/fm.hpp"

using namespace nodalfm;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kMathFail = 1, kUsage = 2;

bool g_json = false;

int emit(const json& j, const std::string& text, int code = kOk) {
  if (g_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
  return code;
}

int emit_error(const std::string& kind, const std::string& msg, int code) {
  if (g_json)
    std::cout << json{{"error", kind}, {"message", msg}}.dump(2) << "\n";
  else
    std::cerr << kind << ": " << msg << "\n";
  return code;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string labels_text(const IdentifyResult& r) {
  std::vector<std::string> ls;
  for (auto& l : r.labels) ls.push_back(l.to_string());
  return ls.empty() ? "0" : join(ls, " + ");
}

// Matlis duals at the descriptor level go through the modules; a smooth
// point is its own Matlis dual and the involution inverts its parameter.
int run_matlis(const std::string& text, bool twisted) {
  TorsionDesc t = parse_torsion(text);
  if (!t.is_singular()) {
    TorsionDesc d = twisted ? TorsionDesc::smooth_point(Rational(1) / t.lambda, t.len) : t;
    return emit({{"input", to_string(t)}, {"result", to_string(d)}}, to_string(d));
  }
  FiniteLengthModule m = module_of(t);
  IdentifyResult r = identify(twisted ? twisted_matlis(m) : matlis_dual(m));
  if (!r.identified) return emit({{"input", to_string(t)}, {"identify", to_json(r)}}, "undecided", kMathFail);
  std::string res = labels_text(r);
  return emit({{"input", to_string(t)}, {"result", res}}, res);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(ParseError::Kind::Syntax, 0, "bad integer \"" + tok + "\" in --d");
    }
    if (tok.find_first_not_of(" \t", used) != std::string::npos)
      throw ParseError(ParseError::Kind::Syntax, 0, "bad integer \"" + tok + "\" in --d");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(ParseError::Kind::Syntax, 0, "--d is empty");
  return out;
}

Rational parse_lambda(const std::string& s) {
  TorsionDesc p = parse_torsion("P[l=" + s + ";len=1]");
  return p.lambda;
}

json matrix_json(const IMat2& m) { return json{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Mukai dictionary on the nodal cubic"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");

  std::string desc, tdesc, path, topology = "cycle", dlist, lambda = "1", word;
  uint64_t seed = 0;
  int trunc = 0, mrank = 1;
  bool dot = false;

  auto* fm = app.add_subcommand("fm", "torsion descriptor of a sheaf descriptor");
  fm->add_option("desc", desc)->required();
  auto* fmi = app.add_subcommand("fm-inverse", "sheaf descriptor of a torsion descriptor");
  fmi->add_option("tdesc", tdesc)->required();
  auto* dual = app.add_subcommand("dual", "dual sheaf descriptor");
  dual->add_option("desc", desc)->required();
  auto* mat = app.add_subcommand("matlis", "Matlis dual of a torsion descriptor");
  mat->add_option("tdesc", tdesc)->required();
  auto* tmat = app.add_subcommand("twisted-matlis", "twisted Matlis dual of a torsion descriptor");
  tmat->add_option("tdesc", tdesc)->required();
  auto* ident = app.add_subcommand("identify", "decompose a module given as JSON");
  ident->add_option("module", path, "JSON file, or - for stdin")->required();
  ident->add_option("--seed", seed);
  auto* ver = app.add_subcommand("verify", "check the dictionary against the evaluation cokernel");
  ver->add_option("desc", desc)->required();
  auto* trunc_opt = ver->add_option("--trunc", trunc, "truncation order")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed);
  auto* dchk = app.add_subcommand("dual-check", "check that duality commutes with the dictionary");
  dchk->add_option("desc", desc)->required();
  dchk->add_option("--seed", seed);
  auto* coh = app.add_subcommand("cohomology", "h0 and h1 of a glued line bundle");
  coh->add_option("--topology", topology)->check(CLI::IsMember({"cycle", "chain"}));
  coh->add_option("--d", dlist, "comma-separated degrees")->required();
  coh->add_option("--lambda", lambda, "gluing parameter (cycle)");
  coh->add_option("--m", mrank, "rank")->check(CLI::PositiveNumber);
  auto* chg = app.add_subcommand("charge", "SL(2,Z) matrix of a twist word");
  chg->add_option("word", word)->required();
  auto* rel = app.add_subcommand("relations", "check the SL(2,Z) relations");
  auto* dia = app.add_subcommand("diagram", "diagram of a torsion descriptor");
  dia->add_option("tdesc", tdesc)->required();
  dia->add_flag("--dot", dot, "Graphviz output (the only format)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*fm) {
      SheafDesc e = parse_sheaf(desc);
      TorsionDesc t = fm_forward(e);
      return emit({{"input", to_string(e)}, {"result", to_string(t)}}, to_string(t));
    }
    if (*fmi) {
      TorsionDesc t = parse_torsion(tdesc);
      SheafDesc e = fm_inverse(t);
      return emit({{"input", to_string(t)}, {"result", to_string(e)}}, to_string(e));
    }
    if (*dual) {
      SheafDesc e = parse_sheaf(desc);
      SheafDesc d = dual_desc(e);
      return emit({{"input", to_string(e)}, {"result", to_string(d)}}, to_string(d));
    }
    if (*mat) return run_matlis(tdesc, false);
    if (*tmat) return run_matlis(tdesc, true);
    if (*ident) {
      json j;
      try {
        if (path == "-") {
          j = json::parse(std::cin);
        } else {
          std::ifstream in(path);
          if (!in) return emit_error("usage error", "cannot open " + path, kUsage);
          j = json::parse(in);
        }
      } catch (const json::parse_error& e) {
        return emit_error("parse error", e.what(), kUsage);
      }
      IdentifyResult r = identify(module_from_json(j), seed);
      std::string text = r.identified ? labels_text(r) : "undecided\n" + join(r.diagnostics, "\n");
      return emit(to_json(r), text, r.identified ? kOk : kMathFail);
    }
    if (*ver) {
      SheafDesc e = parse_sheaf(desc);
      VerifyReport r = verify_fm(e, seed, trunc_opt->count() ? std::optional<int>(trunc) : std::nullopt);
      std::string text = std::string(r.pass ? "pass" : "FAIL") + "  expected " + r.expected + "  identified " +
                         join(r.identified, " + ") + "  length " + std::to_string(r.length) + "  rank " +
                         std::to_string(r.rank) + "  order " + std::to_string(r.order);
      if (!r.pass) text += "\n" + join(r.diagnostics, "\n");
      return emit(to_json(r), text, r.pass ? kOk : kMathFail);
    }
    if (*dchk) {
      DualCheckReport r = fm_dual_check(parse_sheaf(desc), seed);
      std::string text = std::string(r.pass ? "pass" : "FAIL") + "  dual " + r.dual + "  image " + r.image +
                         "  dual image " + r.dual_image;
      if (!r.pass) text += "\n" + join(r.diagnostics, "\n");
      return emit(to_json(r), text, r.pass ? kOk : kMathFail);
    }
    if (*coh) {
      GlueSpec g;
      g.d = parse_int_list(dlist);
      g.topology = topology == "chain" ? Topology::Chain : Topology::Cycle;
      Rational l = parse_lambda(lambda);
      g.glue = g.topology == Topology::Cycle ? jordan_block(mrank, l) : Mat::identity(mrank);
      Cohomology c = cohomology(g);
      long long chi = euler_characteristic(g);
      return emit({{"h0", c.h0}, {"h1", c.h1}, {"chi", chi}},
                  "h0 = " + std::to_string(c.h0) + "  h1 = " + std::to_string(c.h1) + "  chi = " + std::to_string(chi));
    }
    if (*chg) {
      IMat2 m = sl2_matrix(word);
      return emit({{"word", word}, {"matrix", matrix_json(m)}}, to_string(m));
    }
    if (*rel) {
      bool all = true;
      json arr = json::array();
      std::string text;
      for (auto& r : check_relations()) {
        all = all && r.pass;
        arr.push_back({{"relation", r.name}, {"pass", r.pass}});
        text += std::string(r.pass ? "pass  " : "FAIL  ") + r.name + "\n";
      }
      text.pop_back();
      return emit({{"relations", arr}, {"pass", all}}, text, all ? kOk : kMathFail);
    }
    if (*dia) {
      TorsionDesc t = parse_torsion(tdesc);
      std::string d = emit_dot(t);
      if (g_json) return emit({{"input", to_string(t)}, {"dot", d}}, d);
      std::cout << d;
      return kOk;
    }
  } catch (const ParseError& e) {
    return emit_error("parse error", e.what(), kUsage);
  } catch (const NotSemistable& e) {
    return emit_error("not semistable", e.what(), kMathFail);
  } catch (const std::domain_error& e) {
    return emit_error("mathematical failure", e.what(), kMathFail);
  } catch (const std::invalid_argument& e) {
    return emit_error("invalid input", e.what(), kUsage);
  }
  return kUsage;
}
