#pragma once

// Text descriptions of objects.
//
//   expr  := "0" | "O(" int ")" | "T(" point "," int ")" | "S(" index "," int ")"
//          | "iota(" expr ")" | "shift^" int "(" expr ")" | "twist(" point "," expr ")"
//          | "sum(" expr { "," expr } ")" | "cyc[" expr { "," expr } ";" map { "," map } "]"
//   map   := "[" rows of entries separated by "," and ";" "]"     (level 0)
//          | "{" map { "," map } "}"                               (level >= 1)
//   entry := polynomial in X, Y (line bundle targets) or in t (torsion targets)
//
// Atoms are lifted to the requested level. S(i, j) is the simple S_j at the
// i-th weighted point (1-based). Printing is to_string, whose output parses
// back to an equal object.

#include "wpl/cyclecat.hpp"
#include "wpl/functors.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wpl {

class DslError : public std::invalid_argument {
 public:
  std::size_t pos;
  std::optional<int> composite;  // failing arrow or composite index of a cycle
  DslError(const std::string& what, std::size_t p, std::optional<int> c = std::nullopt)
      : std::invalid_argument("offset " + std::to_string(p) + ": " + what), pos(p), composite(c) {}
};

namespace dsl_detail {

class Parser {
 public:
  Parser(std::string_view s, const WeightData& wd) : s_(s), wd_(wd) {}

  ObjPtr parse_top(int level) {
    if (level < 0 || level > wd_.levels()) throw DslError("level " + std::to_string(level) + " outside the tower", 0);
    ObjPtr e = object(level);
    ws();
    if (i_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const { throw DslError(m, i_); }

  void ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(std::string_view t) {
    ws();
    return s_.substr(i_, t.size()) == t;
  }
  bool accept(std::string_view t) {
    if (!peek(t)) return false;
    i_ += t.size();
    return true;
  }
  void expect(std::string_view t) {
    if (!accept(t)) fail("expected '" + std::string(t) + "'");
  }

  std::string token(const char* stop) {
    ws();
    const std::size_t b = i_;
    while (i_ < s_.size() && !std::strchr(stop, s_[i_]) && !std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == b) fail("expected a value");
    return std::string(s_.substr(b, i_ - b));
  }
  long integer() {
    ws();
    const std::size_t b = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == b || !std::isdigit(static_cast<unsigned char>(s_[i_ - 1]))) {
      i_ = b;
      fail("expected an integer");
    }
    return std::stol(std::string(s_.substr(b, i_ - b)));
  }
  Point point() {
    const std::size_t b = i_;
    auto t = token(",)");
    try {
      return Point::parse(t);
    } catch (const std::invalid_argument&) {
      i_ = b;
      fail("bad point '" + t + "'");
    }
  }

  ObjPtr object(int level) {
    ws();
    const std::size_t start = i_;
    if (accept("cyc[")) return cycle(level, start);
    if (accept("iota(")) {
      if (level == 0) fail("iota needs level at least 1");
      ObjPtr e = object(level - 1);
      expect(")");
      return iota(e, wd_.points[static_cast<std::size_t>(level - 1)], wd_.weights[static_cast<std::size_t>(level - 1)]);
    }
    if (accept("shift^")) {
      const long k = integer();
      expect("(");
      if (level == 0) fail("shift needs level at least 1");
      ObjPtr e = object(level);
      expect(")");
      return sigma_bar(e, static_cast<int>(k));
    }
    if (accept("twist(")) {
      Point y = point();
      expect(",");
      ObjPtr e = object(level);
      expect(")");
      return twist(y, e);
    }
    if (accept("sum(")) {
      std::vector<ObjPtr> parts{object(level)};
      while (accept(",")) parts.push_back(object(level));
      expect(")");
      return sum(parts);
    }
    if (accept("O(")) {
      const long n = integer();
      expect(")");
      return lift(wd_, make_base({p1::Summand::O(static_cast<int>(n))}), level);
    }
    if (accept("T(")) {
      Point y = point();
      expect(",");
      const long l = integer();
      if (l < 1) fail("torsion length must be positive");
      expect(")");
      return lift(wd_, make_base({p1::Summand::T(y, static_cast<int>(l))}), level);
    }
    if (accept("S(")) {
      const long pt = integer();
      expect(",");
      const long j = integer();
      expect(")");
      if (pt < 1 || pt > level) {
        i_ = start;
        fail("S(" + std::to_string(pt) + ", _) needs a weighted point at or below level " + std::to_string(level));
      }
      return simple_object(wd_, level, static_cast<int>(pt), j);
    }
    if (accept("0")) return zero_object(wd_, level);
    fail("expected an object");
  }

  static ObjPtr sum(const std::vector<ObjPtr>& parts) {
    if (parts.size() == 1) return parts[0];
    if (parts[0]->level == 0) {
      p1::BaseObject b;
      for (auto& x : parts) b.insert(b.end(), x->base.begin(), x->base.end());
      return make_base(std::move(b));
    }
    return direct_sum(parts).obj;
  }

  ObjPtr cycle(int level, std::size_t start) {
    if (level == 0) fail("cyc needs level at least 1");
    const int p = wd_.weights[static_cast<std::size_t>(level - 1)];
    const Point& x = wd_.points[static_cast<std::size_t>(level - 1)];
    std::vector<ObjPtr> comps{object(level - 1)};
    while (accept(",")) comps.push_back(object(level - 1));
    if (static_cast<int>(comps.size()) != p)
      fail("arity: " + std::to_string(comps.size()) + " components for weight " + std::to_string(p));
    expect(";");
    std::vector<Morphism> arrows;
    for (int j = 0; j < p; ++j) {
      if (j > 0 && !accept(","))
        fail("arity: " + std::to_string(j) + " arrows for weight " + std::to_string(p));
      ObjPtr dst = j + 1 < p ? comps[static_cast<std::size_t>(j + 1)] : twist(x, comps[0]);
      ws();
      if (peek("]")) fail("arity: " + std::to_string(j) + " arrows for weight " + std::to_string(p));
      arrows.push_back(morphism(comps[static_cast<std::size_t>(j)], dst));
    }
    if (peek(",")) fail("arity: more than " + std::to_string(p) + " arrows");
    expect("]");
    try {
      return make_cycle(x, std::move(comps), std::move(arrows), true);
    } catch (const CycleError& e) {
      throw DslError(e.what(), start, e.index);
    }
  }

  Morphism morphism(const ObjPtr& src, const ObjPtr& dst) {
    if (src->level == 0) {
      p1::BaseMorphism m = p1::zero_morphism(src->base, dst->base);
      expect("[");
      for (std::size_t r = 0; r < dst->base.size(); ++r) {
        if (r > 0) expect(";");
        for (std::size_t c = 0; c < src->base.size(); ++c) {
          if (c > 0) expect(",");
          m.blocks[r][c] = entry(src->base[c], dst->base[r]);
        }
      }
      expect("]");
      return make_base_morphism(std::move(m), src, dst);
    }
    Morphism f;
    f.src = src;
    f.dst = dst;
    expect("{");
    for (std::size_t j = 0; j < src->comps.size(); ++j) {
      if (j > 0) expect(",");
      f.comps.push_back(morphism(src->comps[j], dst->comps[j]));
    }
    expect("}");
    return f;
  }

  // One block: a binary form of degree size-1 or a jet of length size.
  Poly entry(const p1::Summand& from, const p1::Summand& to) {
    const std::size_t size = p1::block_size(from, to);
    Poly b(size);
    bool first = true;
    while (true) {
      ws();
      const std::size_t tb = i_;
      Scalar sign(1);
      if (accept("-")) sign = Scalar(-1);
      else if (!first && !accept("+")) break;
      first = false;
      ws();
      Scalar c(1);
      bool coeff = false;
      if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        const std::size_t b0 = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/')) ++i_;
        c = Scalar::parse(s_.substr(b0, i_ - b0));
        coeff = true;
      }
      std::size_t ex = 0, ey = 0, et = 0;
      bool mono = false;
      while (true) {
        if (coeff || mono) {
          if (!accept("*")) break;
        }
        ws();
        if (i_ >= s_.size() || !std::strchr("XYt", s_[i_])) {
          if (coeff && !mono) break;
          fail("expected X, Y or t");
        }
        const char v = s_[i_++];
        std::size_t e = 1;
        if (accept("^")) e = static_cast<std::size_t>(integer());
        (v == 'X' ? ex : v == 'Y' ? ey : et) += e;
        mono = true;
      }
      if (!coeff && !mono) {
        i_ = tb;
        fail("expected a term");
      }
      std::size_t k;
      if (to.line) {
        if (et) fail("jet variable t in a form entry");
        if (size == 0 || ex + ey != size - 1) {
          if (c.is_zero() && !mono) continue;
          fail("term of the wrong degree for the entry");
        }
        k = ey;
      } else {
        if (ex || ey) fail("form variables in a jet entry");
        k = et;
        if (k >= size) {
          if (c.is_zero() && !mono) continue;
          fail("jet term beyond the entry length");
        }
      }
      b[k] += sign * c;
    }
    return b;
  }

  std::string_view s_;
  const WeightData& wd_;
  std::size_t i_ = 0;
};

}  // namespace dsl_detail

inline ObjPtr parse_object(std::string_view text, const WeightData& wd, int level) {
  wd.validate();
  return dsl_detail::Parser(text, wd).parse_top(level);
}

inline std::string print_object(const ObjPtr& e) { return to_string(*e); }

namespace dsl_detail {
inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string x;
  while (std::getline(ss, x, sep)) out.push_back(trim(x));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}
}  // namespace dsl_detail

/// "2,3" and "inf,0" into weight data; validated.
inline WeightData parse_weight_data(const std::string& weights, const std::string& points) {
  WeightData wd;
  for (auto& w : dsl_detail::split(weights, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(w, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (w.empty() || used != w.size()) throw std::invalid_argument("bad weight '" + w + "'");
    wd.weights.push_back(v);
  }
  for (auto& p : dsl_detail::split(points, ',')) {
    if (p.empty()) throw std::invalid_argument("empty point");
    wd.points.push_back(Point::parse(p));
  }
  wd.validate();
  return wd;
}

/// Default points inf, 0, 1, 2, ... for the given number of weights.
inline std::string default_points(std::size_t n) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += (k ? "," : "") + (k == 0 ? std::string("inf") : std::to_string(k - 1));
  return s;
}

/// "1,2" into an index sequence; the empty string is the empty sequence.
inline IndexSeq parse_index_seq(const std::string& text) {
  IndexSeq q;
  if (dsl_detail::trim(text).empty()) return q;
  for (auto& x : dsl_detail::split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(x, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (x.empty() || used != x.size()) throw std::invalid_argument("bad index '" + x + "'");
    q.push_back(v);
  }
  return q;
}

/// "0;1" into one sequence per weighted point; missing trailing points get the
/// empty sequence.
inline SeqTuple parse_seq_tuple(const std::string& text, const WeightData& wd) {
  SeqTuple qq;
  for (auto& s : dsl_detail::split(text, ';')) qq.push_back(parse_index_seq(s));
  if (qq.size() > static_cast<std::size_t>(wd.levels()))
    throw std::invalid_argument("q has " + std::to_string(qq.size()) + " entries for " + std::to_string(wd.levels()) + " weighted points");
  qq.resize(static_cast<std::size_t>(wd.levels()));
  validate_tuple(wd, qq);
  return qq;
}

struct DslCase {
  WeightData wd;
  int level = 0;
  std::string text;
  int line = 0;
};

/// Lines "weights | points | level | expression"; '#' starts a comment line.
inline std::vector<DslCase> load_dsl_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<DslCase> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    line = dsl_detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto f = dsl_detail::split(line, '|');
    if (f.size() != 4) throw std::runtime_error(path + ":" + std::to_string(n) + ": expected four fields");
    out.push_back({parse_weight_data(f[0], f[1]), std::stoi(f[2]), f[3], n});
  }
  return out;
}

}  // namespace wpl
