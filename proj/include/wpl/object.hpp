#pragma once

// Objects and morphisms of the iterated cycle categories.
//
// A level-0 object is a split sheaf on the projective line. A level-k object
// (k >= 1) is a p-cycle E_0 -> E_1 -> ... -> E_{p-1} -> E_0(x) of level-(k-1)
// objects, where x is the point at which the weight was inserted.

#include "wpl/projline.hpp"

#include <memory>

namespace wpl {

using p1::Point;

struct Object;
using ObjPtr = std::shared_ptr<const Object>;

struct Morphism {
  ObjPtr src, dst;
  p1::BaseMorphism base;         // level 0
  std::vector<Morphism> comps;   // level >= 1, one per component
};

struct Object {
  int level = 0;
  p1::BaseObject base;           // level 0
  Point pt;                      // level >= 1
  std::vector<ObjPtr> comps;     // level >= 1
  std::vector<Morphism> arrows;  // arrows[j] : comps[j] -> comps[j+1], last one into comps[0](pt)

  int p() const { return static_cast<int>(comps.size()); }
};

/// Weight data: level i (1-based) inserts weight weights[i-1] at points[i-1].
struct WeightData {
  std::vector<int> weights;
  std::vector<Point> points;

  int levels() const { return static_cast<int>(weights.size()); }
  void validate() const {
    if (weights.size() != points.size()) throw std::invalid_argument("weights and points differ in length");
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 1) throw std::invalid_argument("weights must be positive");
      for (std::size_t j = 0; j < i; ++j)
        if (points[i] == points[j]) throw std::invalid_argument("repeated parameter point " + points[i].str());
    }
  }
  /// Weight data of the first `level` levels.
  WeightData prefix(int level) const {
    return WeightData{{weights.begin(), weights.begin() + level}, {points.begin(), points.begin() + level}};
  }
};

inline ObjPtr make_base(p1::BaseObject b) {
  auto o = std::make_shared<Object>();
  o->level = 0;
  std::sort(b.begin(), b.end(), p1::canonical_less);
  o->base = std::move(b);
  return o;
}
inline Morphism make_base_morphism(p1::BaseMorphism m) {
  Morphism f;
  f.src = make_base(m.src);
  f.dst = make_base(m.dst);
  f.base = std::move(m);
  return f;
}
inline Morphism make_base_morphism(p1::BaseMorphism m, ObjPtr src, ObjPtr dst) {
  Morphism f;
  f.src = std::move(src);
  f.dst = std::move(dst);
  f.base = std::move(m);
  return f;
}

// ---- structural equality -------------------------------------------------------

inline bool same_data(const Morphism& a, const Morphism& b);

inline bool operator==(const Object& a, const Object& b) {
  if (a.level != b.level) return false;
  if (a.level == 0) return a.base == b.base;
  if (a.pt != b.pt || a.comps.size() != b.comps.size()) return false;
  for (std::size_t j = 0; j < a.comps.size(); ++j)
    if (a.comps[j] != b.comps[j] && !(*a.comps[j] == *b.comps[j])) return false;
  for (std::size_t j = 0; j < a.arrows.size(); ++j)
    if (!same_data(a.arrows[j], b.arrows[j])) return false;
  return true;
}
inline bool operator!=(const Object& a, const Object& b) { return !(a == b); }

/// Equality of the coefficient data (objects are assumed to agree).
inline bool same_data(const Morphism& a, const Morphism& b) {
  if (a.comps.size() != b.comps.size()) return false;
  if (a.comps.empty()) return a.base.blocks == b.base.blocks && a.base.src == b.base.src && a.base.dst == b.base.dst;
  for (std::size_t j = 0; j < a.comps.size(); ++j)
    if (!same_data(a.comps[j], b.comps[j])) return false;
  return true;
}
inline bool operator==(const Morphism& a, const Morphism& b) {
  return (a.src == b.src || *a.src == *b.src) && (a.dst == b.dst || *a.dst == *b.dst) && same_data(a, b);
}

// ---- rendering -------------------------------------------------------------------

namespace render_detail {

inline std::string coeff_term(const Scalar& c, const std::string& mono, bool first) {
  std::string s;
  Scalar a = c;
  bool neg = false;
  if (Scalar::rational_mode() && sgn(c.value()) < 0) {
    neg = true;
    a = -c;
  }
  if (first) s += neg ? "-" : "";
  else s += neg ? " - " : " + ";
  if (mono.empty()) s += a.str();
  else if (a.is_one()) s += mono;
  else s += a.str() + "*" + mono;
  return s;
}

inline std::string power(const char* var, std::size_t e) {
  if (e == 0) return "";
  if (e == 1) return var;
  return std::string(var) + "^" + std::to_string(e);
}

}  // namespace render_detail

/// Binary form of degree size-1, e.g. "X^2 - 3*X*Y + Y^2".
inline std::string render_form(const Poly& f) {
  std::string s;
  const std::size_t d = f.size() - 1;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].is_zero()) continue;
    std::string mono = render_detail::power("X", d - k);
    const std::string y = render_detail::power("Y", k);
    if (!y.empty()) mono += (mono.empty() ? "" : "*") + y;
    s += render_detail::coeff_term(f[k], mono, s.empty());
  }
  return s.empty() ? "0" : s;
}
/// Jet in the local parameter t, e.g. "1 + 2*t^2".
inline std::string render_jet(const Poly& f) {
  std::string s;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k].is_zero()) continue;
    s += render_detail::coeff_term(f[k], render_detail::power("t", k), s.empty());
  }
  return s.empty() ? "0" : s;
}

inline bool is_zero_object(const Object& e) {
  if (e.level == 0) return e.base.empty();
  for (auto& c : e.comps)
    if (!is_zero_object(*c)) return false;
  return true;
}

inline std::string to_string(const Morphism& f);

inline std::string to_string(const Object& e) {
  if (is_zero_object(e)) return "0";
  if (e.level == 0) return p1::str(e.base);
  std::string s = "cyc[";
  for (std::size_t j = 0; j < e.comps.size(); ++j) s += (j ? ", " : "") + to_string(*e.comps[j]);
  s += "; ";
  for (std::size_t j = 0; j < e.arrows.size(); ++j) s += (j ? ", " : "") + to_string(e.arrows[j]);
  return s + "]";
}

inline std::string to_string(const Morphism& f) {
  if (f.comps.empty()) {
    const auto& m = f.base;
    std::string s = "[";
    for (std::size_t i = 0; i < m.dst.size(); ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < m.src.size(); ++j) {
        s += j ? ", " : "";
        const Poly& b = m.blocks[i][j];
        if (b.empty()) s += "0";
        else if (m.dst[i].line) s += render_form(b);
        else s += render_jet(b);
      }
    }
    return s + "]";
  }
  std::string s = "{";
  for (std::size_t j = 0; j < f.comps.size(); ++j) s += (j ? ", " : "") + to_string(f.comps[j]);
  return s + "}";
}

}  // namespace wpl
