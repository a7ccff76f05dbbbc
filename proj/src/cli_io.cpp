#include "nodalfm/cli_io.hpp"

#include <cctype>
#include <algorithm>
#include <charconv>
#include <regex>
#include <sstream>

namespace nodalfm {

ParseError::ParseError(Kind k, std::size_t off, const std::string& msg)
    : std::invalid_argument(std::string(k == Kind::Syntax ? "syntax error" : "semantic error") + " at byte " +
                            std::to_string(off) + ": " + msg),
      kind(k),
      offset(off) {}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  ParsedDesc run() {
    skip();
    ParsedDesc out;
    std::size_t start = pos_;
    if (eat_word("Mq")) {
      out.is_sheaf = false;
      out.torsion = band_label(start);
    } else if (eat_word("Nq")) {
      out.is_sheaf = false;
      out.torsion = string_label(start);
    } else if (eat_word("B")) {
      out.sheaf = band_sheaf(start);
    } else if (eat_word("S")) {
      out.sheaf = string_sheaf();
    } else if (eat_word("P")) {
      out.is_sheaf = false;
      out.torsion = smooth_point(start);
    } else {
      fail("expected one of B[, S[, Mq[, Nq[, P[");
    }
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(ParseError::Kind::Syntax, pos_, msg); }
  [[noreturn]] static void semantic(std::size_t at, const std::string& msg) {
    throw ParseError(ParseError::Kind::Semantic, at, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat_word(const char* w) {
    std::string_view v(w);
    if (s_.compare(pos_, v.size(), v) != 0) return false;
    pos_ += v.size();
    return true;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void key(const char* k) {
    skip();
    if (!eat_word(k)) fail(std::string("expected '") + k + "'");
    expect('=');
  }

  long long integer() {
    skip();
    std::size_t st = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t dig = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == dig) {
      pos_ = st;
      fail("expected an integer");
    }
    long long v = 0;
    const char* b = s_.data() + (s_[st] == '+' ? st + 1 : st);
    auto [p, ec] = std::from_chars(b, s_.data() + pos_, v);
    if (ec != std::errc()) semantic(st, "integer out of range");
    return v;
  }
  int small_int() {
    std::size_t st = pos_;
    long long v = integer();
    if (v < -1000000 || v > 1000000) semantic(st, "integer out of range");
    return static_cast<int>(v);
  }

  Rational scalar() {
    skip();
    std::size_t st = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    auto digits = [&] {
      std::size_t d = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == d) fail("expected digits");
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      digits();
    }
    std::string tok = s_.substr(st, pos_ - st);
    if (tok[0] == '+') tok.erase(0, 1);
    auto slash = tok.find('/');
    if (slash != std::string::npos && tok.find_first_not_of('0', slash + 1) == std::string::npos)
      semantic(st, "zero denominator");
    return Rational::parse(tok);
  }
  Rational lambda() {
    std::size_t st = pos_;
    Rational l = scalar();
    if (l.is_zero()) semantic(st, "lambda must be nonzero");
    return l;
  }
  int positive(const char* what) {
    std::size_t st = pos_;
    int v = small_int();
    if (v < 1) semantic(st, std::string(what) + " must be >= 1");
    return v;
  }

  std::vector<int> int_tuple() {
    expect('(');
    std::vector<int> d{small_int()};
    while (peek(',')) {
      ++pos_;
      d.push_back(small_int());
    }
    expect(')');
    return d;
  }

  SheafDesc band_sheaf(std::size_t start) {
    expect('[');
    key("d");
    std::size_t dpos = pos_;
    auto d = int_tuple();
    expect(';');
    key("m");
    int m = positive("m");
    expect(';');
    key("l");
    Rational l = lambda();
    expect(']');
    // periodic d is rejected: the cover would not be the minimal one
    for (int p = 1; p < static_cast<int>(d.size()); ++p) {
      if (d.size() % p) continue;
      bool rep = true;
      for (std::size_t i = p; i < d.size() && rep; ++i) rep = d[i] == d[i - p];
      if (rep) semantic(dpos, "d is periodic");
    }
    (void)start;
    return BandSheafDesc::make(std::move(d), m, std::move(l));
  }

  SheafDesc string_sheaf() {
    expect('[');
    key("d");
    auto d = int_tuple();
    expect(']');
    return StringSheafDesc::make(std::move(d));
  }

  std::pair<int, int> pair() {
    expect('(');
    int a = small_int();
    expect(',');
    int b = small_int();
    expect(')');
    return {a, b};
  }

  TorsionDesc band_label(std::size_t start) {
    expect('[');
    Pairs q{pair()};
    while (peek('(')) q.push_back(pair());
    expect(';');
    key("m");
    int m = positive("m");
    expect(';');
    key("l");
    Rational l = lambda();
    expect(']');
    try {
      return TorsionDesc::of(BandLabel::make(q, m, l));
    } catch (const std::invalid_argument& e) {
      semantic(start, e.what());
    }
  }

  TorsionDesc string_label(std::size_t start) {
    expect('[');
    int n0 = small_int();
    Pairs q;
    expect('(');
    if (peek(')')) {
      ++pos_;
    } else {
      --pos_;
      while (peek('(')) q.push_back(pair());
    }
    int ml = small_int();
    expect(']');
    try {
      return TorsionDesc::of(StringLabel::make(n0, q, ml));
    } catch (const std::invalid_argument& e) {
      semantic(start, e.what());
    }
  }

  TorsionDesc smooth_point(std::size_t) {
    expect('[');
    key("l");
    Rational l = lambda();
    expect(';');
    key("len");
    int len = positive("len");
    expect(']');
    return TorsionDesc::smooth_point(l, len);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedDesc parse_desc(const std::string& text) { return Parser(text).run(); }

SheafDesc parse_sheaf(const std::string& text) {
  ParsedDesc p = parse_desc(text);
  if (!p.is_sheaf) throw ParseError(ParseError::Kind::Semantic, 0, "expected a sheaf descriptor B[..] or S[..]");
  return p.sheaf;
}

TorsionDesc parse_torsion(const std::string& text) {
  ParsedDesc p = parse_desc(text);
  if (p.is_sheaf) throw ParseError(ParseError::Kind::Semantic, 0, "expected a torsion descriptor Mq[..], Nq[..] or P[..]");
  return p.torsion;
}

// ---- JSON ----

namespace {

nlohmann::json matrix_json(const Mat& a) {
  auto rows = nlohmann::json::array();
  for (int i = 0; i < a.rows(); ++i) {
    auto r = nlohmann::json::array();
    for (int j = 0; j < a.cols(); ++j) r.push_back(a(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

Rational scalar_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    static const std::regex re(R"(\s*[+-]?[0-9]+(/0*[1-9][0-9]*)?\s*)");
    if (!std::regex_match(s, re)) throw std::invalid_argument("bad scalar \"" + s + "\"");
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) || c == '+'; }), s.end());
    return Rational::parse(s);
  }
  throw std::invalid_argument("scalars must be strings \"p/q\" or integers");
}

Mat matrix_from_json(const nlohmann::json& j, int n, const char* name) {
  Mat a(n, n);
  if (!j.is_array()) throw std::invalid_argument(std::string(name) + " must be an array");
  bool flat = j.size() == static_cast<std::size_t>(n) * n && (n == 0 || !j[0].is_array());
  if (flat) {
    for (int k = 0; k < n * n; ++k) a(k / n, k % n) = scalar_json(j[k]);
    return a;
  }
  if (j.size() != static_cast<std::size_t>(n)) throw std::invalid_argument(std::string(name) + " has the wrong number of rows");
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != static_cast<std::size_t>(n))
      throw std::invalid_argument(std::string(name) + " row " + std::to_string(i) + " has the wrong length");
    for (int k = 0; k < n; ++k) a(i, k) = scalar_json(j[i][k]);
  }
  return a;
}

}  // namespace

nlohmann::json module_to_json(const FiniteLengthModule& m) {
  return {{"field", "Q"}, {"dim", m.dim}, {"X", matrix_json(m.X)}, {"Y", matrix_json(m.Y)}};
}

FiniteLengthModule module_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("module JSON must be an object");
  std::string field = j.value("field", "Q");
  if (field.rfind("Fp:", 0) == 0) throw std::invalid_argument("field " + field + " is not supported; modules are over Q");
  if (field != "Q") throw std::invalid_argument("unknown field tag " + field);
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 0)
    throw std::invalid_argument("dim must be a nonnegative integer");
  int n = j["dim"].get<int>();
  if (!j.contains("X") || !j.contains("Y")) throw std::invalid_argument("X and Y are required");
  FiniteLengthModule m(matrix_from_json(j["X"], n, "X"), matrix_from_json(j["Y"], n, "Y"));
  m.validate();
  return m;
}

nlohmann::json to_json(const VerifyReport& r) {
  return {{"desc", r.desc},     {"pass", r.pass}, {"expected", r.expected}, {"identified", r.identified},
          {"length", r.length}, {"rank", r.rank}, {"order", r.order},       {"diagnostics", r.diagnostics}};
}

nlohmann::json to_json(const DualCheckReport& r) {
  return {{"desc", r.desc},
          {"dual", r.dual},
          {"image", r.image},
          {"dual_image", r.dual_image},
          {"label_side", r.label_side},
          {"eval_side", r.eval_side},
          {"pass", r.pass},
          {"diagnostics", r.diagnostics}};
}

nlohmann::json to_json(const IdentifyResult& r) {
  nlohmann::json j{{"identified", r.identified}, {"diagnostics", r.diagnostics}};
  auto ls = nlohmann::json::array();
  for (auto& l : r.labels) ls.push_back(l.to_string());
  j["labels"] = ls;
  auto cps = nlohmann::json::array();
  for (auto& c : r.transfer_charpolys) cps.push_back(upoly_to_string(c));
  j["transfer_charpolys"] = cps;
  return j;
}

// ---- DOT ----

namespace {

std::string mono(const char* v, int k, int peak) {
  std::string s = k == 0 ? "" : (k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k));
  return (s.empty() ? "" : s + " ") + "e" + std::to_string(peak + 1);
}

struct Dot {
  std::vector<std::string> nodes;
  std::vector<std::tuple<int, int, std::string>> edges;
  int node(std::string label) {
    nodes.push_back(std::move(label));
    return static_cast<int>(nodes.size()) - 1;
  }
  std::string str(const std::string& name, const std::string& title) const {
    std::ostringstream o;
    o << "digraph " << name << " {\n  label=\"" << title << "\";\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) o << "  v" << i << " [label=\"" << nodes[i] << "\"];\n";
    for (auto& [a, b, l] : edges) o << "  v" << a << " -> v" << b << " [label=\"" << l << "\"];\n";
    o << "}\n";
    return o.str();
  }
};

}  // namespace

std::string emit_dot(const TorsionDesc& t) {
  if (!t.is_singular()) throw std::domain_error("a smooth point has no diagram");
  Dot g;
  if (t.kind == TorsionDesc::Kind::SingularBand) {
    // peak i: e_i, x-chain x e_i .. x^(n_i-1) e_i, y-chain y e_i .. y^(m_i) e_i;
    // y^(m_i) e_i is also x^(n_{i+1}) e_{i+1}
    const BandLabel& b = t.band;
    int N = static_cast<int>(b.q.size());
    std::string I = "I_" + std::to_string(b.m);
    std::string J = "J_" + std::to_string(b.m) + "(" + b.lambda.to_string() + ")";
    std::vector<int> top(N), xlast(N), valley(N);
    for (int i = 0; i < N; ++i) {
      auto [ni, mi] = b.q[i];
      top[i] = g.node(mono("", 0, i));
      int prev = top[i];
      for (int a = 1; a < ni; ++a) {
        int v = g.node(mono("x", a, i));
        g.edges.emplace_back(prev, v, "x " + I);
        prev = v;
      }
      xlast[i] = prev;
      prev = top[i];
      for (int c = 1; c <= mi; ++c) {
        int v = g.node(mono("y", c, i));
        g.edges.emplace_back(prev, v, "y " + I);
        prev = v;
      }
      valley[i] = prev;
    }
    // close each valley with the last x-edge of the next peak; J sits on the
    // one that wraps around
    for (int i = 0; i < N; ++i) {
      int nx = (i + 1) % N;
      g.edges.emplace_back(xlast[nx], valley[i], nx == 0 ? "x " + J : "x " + I);
    }
    return g.str("band", b.to_string());
  }
  // string: walk the peaks left to right
  Pairs peaks = t.str.peaks();
  int left_end = -1;  // valley shared with the previous peak
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    auto [a, bb] = peaks[i];
    int p = static_cast<int>(i);
    int topv = g.node(mono("", 0, p));
    int prev = topv;
    for (int k = 1; k <= a; ++k) {
      bool shared = k == a && left_end >= 0;
      int v = shared ? left_end : g.node(mono("x", k, p));
      g.edges.emplace_back(prev, v, "x");
      prev = v;
    }
    prev = topv;
    left_end = -1;
    for (int k = 1; k <= bb; ++k) {
      int v = g.node(mono("y", k, p));
      g.edges.emplace_back(prev, v, "y");
      prev = v;
    }
    if (bb > 0) left_end = prev;
  }
  return g.str("string", t.str.to_string());
}

}  // namespace nodalfm
