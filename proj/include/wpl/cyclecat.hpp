#pragma once

// The p-cycle construction: morphism calculus, shifts, twists, Hom/Ext,
// kernels, cokernels, sums, decomposition, simples and line bundles.

#include "wpl/idempotent.hpp"
#include "wpl/object.hpp"

#include <functional>
#include <map>

namespace wpl {

// ---- morphism algebra ---------------------------------------------------------------

inline ObjPtr zero_like(const ObjPtr& e);
inline Morphism zero_morphism(const ObjPtr& src, const ObjPtr& dst);
inline ObjPtr twist(const Point& y, const ObjPtr& e, int k = 1);
inline Morphism twist(const Point& y, const Morphism& f, int k, const ObjPtr& src2, const ObjPtr& dst2);

inline ObjPtr zero_object(const WeightData& wd, int level) {
  if (level == 0) return make_base({});
  auto lower = zero_object(wd, level - 1);
  auto o = std::make_shared<Object>();
  o->level = level;
  o->pt = wd.points.at(static_cast<std::size_t>(level - 1));
  const int p = wd.weights.at(static_cast<std::size_t>(level - 1));
  for (int j = 0; j < p; ++j) o->comps.push_back(lower);
  for (int j = 0; j < p; ++j) o->arrows.push_back(zero_morphism(lower, lower));
  return o;
}

inline ObjPtr zero_like(const ObjPtr& e) {
  if (e->level == 0) return make_base({});
  auto lower = zero_like(e->comps[0]);
  auto o = std::make_shared<Object>();
  o->level = e->level;
  o->pt = e->pt;
  for (int j = 0; j < e->p(); ++j) o->comps.push_back(lower);
  for (int j = 0; j < e->p(); ++j) o->arrows.push_back(zero_morphism(lower, lower));
  return o;
}

inline Morphism zero_morphism(const ObjPtr& src, const ObjPtr& dst) {
  Morphism f;
  f.src = src;
  f.dst = dst;
  if (src->level == 0) {
    f.base = p1::zero_morphism(src->base, dst->base);
    return f;
  }
  for (int j = 0; j < src->p(); ++j) f.comps.push_back(zero_morphism(src->comps[j], dst->comps[j]));
  return f;
}

inline Morphism identity(const ObjPtr& e) {
  Morphism f;
  f.src = f.dst = e;
  if (e->level == 0) {
    f.base = p1::identity(e->base);
    return f;
  }
  for (auto& c : e->comps) f.comps.push_back(identity(c));
  return f;
}

/// g after f.
inline Morphism compose(const Morphism& g, const Morphism& f) {
  Morphism h;
  h.src = f.src;
  h.dst = g.dst;
  if (f.comps.empty()) {
    h.base = p1::compose(g.base, f.base);
    return h;
  }
  if (g.comps.size() != f.comps.size()) throw std::invalid_argument("compose: cycle lengths differ");
  for (std::size_t j = 0; j < f.comps.size(); ++j) h.comps.push_back(compose(g.comps[j], f.comps[j]));
  return h;
}

inline Morphism add(const Morphism& a, const Morphism& b) {
  Morphism c = a;
  if (a.comps.empty()) {
    c.base = p1::add(a.base, b.base);
    return c;
  }
  for (std::size_t j = 0; j < a.comps.size(); ++j) c.comps[j] = add(a.comps[j], b.comps[j]);
  return c;
}
inline Morphism sub(const Morphism& a, const Morphism& b) { return add(a, [&] {
  Morphism m = b;
  std::function<void(Morphism&)> neg = [&](Morphism& x) {
    if (x.comps.empty()) x.base = p1::scale(x.base, Scalar(-1));
    else for (auto& c : x.comps) neg(c);
  };
  neg(m);
  return m;
}()); }
inline Morphism scale(const Morphism& a, const Scalar& s) {
  Morphism c = a;
  if (a.comps.empty()) {
    c.base = p1::scale(a.base, s);
    return c;
  }
  for (auto& x : c.comps) x = scale(x, s);
  return c;
}
inline bool is_zero(const Morphism& f) {
  if (f.comps.empty()) return f.base.is_zero();
  for (auto& c : f.comps)
    if (!is_zero(c)) return false;
  return true;
}

inline std::size_t coord_dim(const Object& e, const Object& f) {
  if (e.level == 0) return p1::coord_dim(e.base, f.base);
  std::size_t n = 0;
  for (std::size_t j = 0; j < e.comps.size(); ++j) n += coord_dim(*e.comps[j], *f.comps[j]);
  return n;
}
inline void flatten_into(const Morphism& f, Vec& out) {
  if (f.comps.empty()) {
    for (auto& row : f.base.blocks)
      for (auto& b : row) out.insert(out.end(), b.begin(), b.end());
    return;
  }
  for (auto& c : f.comps) flatten_into(c, out);
}
inline Vec flatten(const Morphism& f) {
  Vec v;
  flatten_into(f, v);
  return v;
}
inline Morphism unflatten_at(const ObjPtr& src, const ObjPtr& dst, const Vec& v, std::size_t& pos) {
  Morphism f;
  f.src = src;
  f.dst = dst;
  if (src->level == 0) {
    f.base = p1::zero_morphism(src->base, dst->base);
    for (auto& row : f.base.blocks)
      for (auto& b : row)
        for (auto& x : b) x = v.at(pos++);
    return f;
  }
  for (int j = 0; j < src->p(); ++j) f.comps.push_back(unflatten_at(src->comps[j], dst->comps[j], v, pos));
  return f;
}
inline Morphism unflatten(const ObjPtr& src, const ObjPtr& dst, const Vec& v) {
  std::size_t pos = 0;
  return unflatten_at(src, dst, v, pos);
}
inline Morphism combine(const ObjPtr& src, const ObjPtr& dst, const std::vector<Morphism>& basis, const Vec& c) {
  Vec acc(coord_dim(*src, *dst));
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (c[b].is_zero()) continue;
    Vec fb = flatten(basis[b]);
    for (std::size_t e = 0; e < acc.size(); ++e)
      if (!fb[e].is_zero()) acc[e] += c[b] * fb[e];
  }
  return unflatten(src, dst, acc);
}

inline Morphism rebind(Morphism f, ObjPtr src, ObjPtr dst) {
  f.src = std::move(src);
  f.dst = std::move(dst);
  return f;
}

// ---- pointwise functors ---------------------------------------------------------

using ObjFn = std::function<ObjPtr(const ObjPtr&)>;
using MorFn = std::function<Morphism(const Morphism&, const ObjPtr&, const ObjPtr&)>;

/// Applies a functor of the level below to every component and arrow.
inline ObjPtr map_pointwise(const ObjPtr& e, const ObjFn& fo, const MorFn& fm) {
  auto o = std::make_shared<Object>();
  o->level = e->level;
  o->pt = e->pt;
  for (auto& c : e->comps) o->comps.push_back(fo(c));
  const int p = e->p();
  for (int j = 0; j < p; ++j) {
    ObjPtr dst = j + 1 < p ? o->comps[static_cast<std::size_t>(j + 1)] : twist(e->pt, o->comps[0]);
    o->arrows.push_back(fm(e->arrows[static_cast<std::size_t>(j)], o->comps[static_cast<std::size_t>(j)], dst));
  }
  return o;
}
inline Morphism map_pointwise(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2, const MorFn& fm) {
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  for (std::size_t j = 0; j < f.comps.size(); ++j) g.comps.push_back(fm(f.comps[j], src2->comps[j], dst2->comps[j]));
  return g;
}

// ---- twists at arbitrary points (pointwise down to the base) ---------------------------

inline ObjPtr twist(const Point& y, const ObjPtr& e, int k) {
  if (k == 0) return e;
  if (e->level == 0) return make_base(p1::twist(y, e->base, k));
  return map_pointwise(
      e, [&](const ObjPtr& c) { return twist(y, c, k); },
      [&](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return twist(y, m, k, s, d); });
}
inline Morphism twist(const Point& y, const Morphism& f, int k, const ObjPtr& src2, const ObjPtr& dst2) {
  if (f.comps.empty()) return make_base_morphism(p1::twist(y, f.base, k), src2, dst2);
  return map_pointwise(f, src2, dst2, [&](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return twist(y, m, k, s, d); });
}
inline Morphism twist(const Point& y, const Morphism& f, int k = 1) {
  if (k == 0) return f;
  return twist(y, f, k, twist(y, f.src, k), twist(y, f.dst, k));
}

/// The natural map x_E : E -> E(y).
inline Morphism twist_map(const Point& y, const ObjPtr& e) {
  if (e->level == 0) return make_base_morphism(p1::twist_map(y, e->base), e, twist(y, e));
  ObjPtr t = twist(y, e);
  Morphism m;
  m.src = e;
  m.dst = t;
  for (int j = 0; j < e->p(); ++j)
    m.comps.push_back(rebind(twist_map(y, e->comps[static_cast<std::size_t>(j)]), e->comps[static_cast<std::size_t>(j)],
                             t->comps[static_cast<std::size_t>(j)]));
  return m;
}

// ---- cycles ----------------------------------------------------------------------

/// Index of the first failing periodicity condition, if any.
inline std::optional<int> periodicity_failure(const Object& e) {
  const int p = e.p();
  for (int n = 0; n < p; ++n) {
    const ObjPtr& en = e.comps[static_cast<std::size_t>(n)];
    Morphism acc = identity(en);
    for (int s = n; s < n + p; ++s) {
      const Morphism& x = e.arrows[static_cast<std::size_t>(s % p)];
      if (s < p) acc = compose(x, acc);
      else acc = compose(twist(e.pt, x), acc);
    }
    if (!same_data(acc, twist_map(e.pt, en))) return n;
  }
  return std::nullopt;
}

/// Index of the first failing commuting square of a morphism of cycles.
inline std::optional<int> square_failure(const Morphism& f) {
  if (f.comps.empty()) return std::nullopt;
  const Object& e = *f.src;
  const Object& g = *f.dst;
  const int p = e.p();
  for (int j = 0; j < p; ++j) {
    const Morphism& uj = f.comps[static_cast<std::size_t>(j)];
    Morphism next = j + 1 < p ? f.comps[static_cast<std::size_t>(j + 1)] : twist(e.pt, f.comps[0]);
    if (!same_data(compose(next, e.arrows[static_cast<std::size_t>(j)]), compose(g.arrows[static_cast<std::size_t>(j)], uj)))
      return j;
  }
  return std::nullopt;
}

struct CycleError : std::invalid_argument {
  int index;
  CycleError(const std::string& what, int i) : std::invalid_argument(what), index(i) {}
};

inline ObjPtr make_cycle(const Point& x, std::vector<ObjPtr> comps, std::vector<Morphism> arrows, bool validate = true) {
  if (comps.empty() || comps.size() != arrows.size())
    throw std::invalid_argument("cycle needs equally many components and arrows (at least one)");
  auto o = std::make_shared<Object>();
  o->level = comps[0]->level + 1;
  o->pt = x;
  o->comps = std::move(comps);
  const std::size_t p = o->comps.size();
  for (auto& c : o->comps)
    if (c->level + 1 != o->level) throw std::invalid_argument("cycle components live on different levels");
  ObjPtr last = twist(x, o->comps[0]);
  for (std::size_t j = 0; j < p; ++j) {
    ObjPtr dst = j + 1 < p ? o->comps[j + 1] : last;
    if (validate) {
      if (!(*arrows[j].src == *o->comps[j]) || !(*arrows[j].dst == *dst))
        throw CycleError("arrow " + std::to_string(j) + " has the wrong source or target", static_cast<int>(j));
      if (auto bad = square_failure(arrows[j]))
        throw CycleError("arrow " + std::to_string(j) + " is not a morphism (square " + std::to_string(*bad) + ")",
                         static_cast<int>(j));
    }
    o->arrows.push_back(rebind(std::move(arrows[j]), o->comps[j], dst));
  }
  if (validate)
    if (auto bad = periodicity_failure(*o))
      throw CycleError("periodicity fails for the composite starting at position " + std::to_string(*bad), *bad);
  return o;
}

inline ObjPtr iota(const ObjPtr& e, const Point& x, int p) {
  std::vector<ObjPtr> comps(static_cast<std::size_t>(p), e);
  std::vector<Morphism> arrows;
  for (int j = 0; j + 1 < p; ++j) arrows.push_back(identity(e));
  arrows.push_back(twist_map(x, e));
  return make_cycle(x, std::move(comps), std::move(arrows), false);
}
inline Morphism iota(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2) {
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  for (int j = 0; j < src2->p(); ++j) g.comps.push_back(rebind(f, src2->comps[static_cast<std::size_t>(j)], dst2->comps[static_cast<std::size_t>(j)]));
  return g;
}
inline Morphism iota(const Morphism& f, const Point& x, int p) {
  return iota(f, iota(f.src, x, p), iota(f.dst, x, p));
}

// ---- the shift automorphism ----------------------------------------------------------

inline ObjPtr shift_once(const ObjPtr& e) {
  const std::size_t p = e->comps.size();
  std::vector<ObjPtr> comps(e->comps.begin() + 1, e->comps.end());
  comps.push_back(e->arrows.back().dst);
  std::vector<Morphism> arrows(e->arrows.begin() + 1, e->arrows.end());
  ObjPtr last = twist(e->pt, comps[0]);
  arrows.push_back(twist(e->pt, e->arrows[0], 1, comps[p - 1], last));
  (void)p;
  return make_cycle(e->pt, std::move(comps), std::move(arrows), false);
}
inline ObjPtr unshift_once(const ObjPtr& e) {
  const std::size_t p = e->comps.size();
  ObjPtr first = twist(e->pt, e->comps[p - 1], -1);
  std::vector<ObjPtr> comps{first};
  comps.insert(comps.end(), e->comps.begin(), e->comps.end() - 1);
  std::vector<Morphism> arrows{twist(e->pt, e->arrows[p - 1], -1, first, p > 1 ? e->comps[0] : e->comps[0])};
  arrows.insert(arrows.end(), e->arrows.begin(), e->arrows.end() - 1);
  if (p == 1) arrows[0] = twist(e->pt, e->arrows[0], -1, first, e->comps[0]);
  return make_cycle(e->pt, std::move(comps), std::move(arrows), false);
}

inline ObjPtr sigma_bar(const ObjPtr& e, int k) {
  if (e->level == 0) throw std::invalid_argument("sigma_bar needs a cycle object");
  ObjPtr r = e;
  for (int i = 0; i < k; ++i) r = shift_once(r);
  for (int i = 0; i > k; --i) r = unshift_once(r);
  return r;
}

inline Morphism shift_once(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2) {
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  const std::size_t p = f.comps.size();
  for (std::size_t j = 1; j < p; ++j) g.comps.push_back(rebind(f.comps[j], src2->comps[j - 1], dst2->comps[j - 1]));
  g.comps.push_back(twist(f.src->pt, f.comps[0], 1, src2->comps[p - 1], dst2->comps[p - 1]));
  return g;
}
inline Morphism unshift_once(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2) {
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  const std::size_t p = f.comps.size();
  g.comps.push_back(twist(f.src->pt, f.comps[p - 1], -1, src2->comps[0], dst2->comps[0]));
  for (std::size_t j = 0; j + 1 < p; ++j) g.comps.push_back(rebind(f.comps[j], src2->comps[j + 1], dst2->comps[j + 1]));
  return g;
}
inline Morphism sigma_bar(const Morphism& f, int k) {
  Morphism r = f;
  for (int i = 0; i < k; ++i) r = shift_once(r, shift_once(r.src), shift_once(r.dst));
  for (int i = 0; i > k; --i) r = unshift_once(r, unshift_once(r.src), unshift_once(r.dst));
  return r;
}

/// The natural map E -> shift(E) given by the arrows of E.
inline Morphism sigma_bar_map(const ObjPtr& e) {
  ObjPtr s = shift_once(e);
  Morphism m;
  m.src = e;
  m.dst = s;
  for (std::size_t j = 0; j < e->comps.size(); ++j) m.comps.push_back(rebind(e->arrows[j], e->comps[j], s->comps[j]));
  return m;
}

// ---- Auslander-Reiten translation ------------------------------------------------------

inline ObjPtr tau(const ObjPtr& e);
inline Morphism tau(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2);

inline ObjPtr tau(const ObjPtr& e) {
  if (e->level == 0) return make_base(p1::tau(e->base));
  ObjPtr u = sigma_bar(e, -1);
  ObjPtr t = map_pointwise(
      u, [](const ObjPtr& c) { return tau(c); },
      [](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return tau(m, s, d); });
  return twist(e->pt, t);
}
inline Morphism tau(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2) {
  if (f.comps.empty()) return make_base_morphism(p1::tau(f.base), src2, dst2);
  const Point& x = f.src->pt;
  Morphism u = sigma_bar(f, -1);
  // src2 = twist(x, tau_pw(u.src)); undo the outer twist to get the intermediate objects
  ObjPtr s1 = twist(x, src2, -1), d1 = twist(x, dst2, -1);
  Morphism t = map_pointwise(u, s1, d1, [](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return tau(m, s, d); });
  return twist(x, t, 1, src2, dst2);
}
inline Morphism tau(const Morphism& f) { return tau(f, tau(f.src), tau(f.dst)); }

inline ObjPtr tau_inverse(const ObjPtr& e);
inline Morphism tau_inverse(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2);

inline ObjPtr tau_inverse(const ObjPtr& e) {
  if (e->level == 0) return make_base(p1::tau_inverse(e->base));
  ObjPtr u = twist(e->pt, e, -1);
  ObjPtr t = map_pointwise(
      u, [](const ObjPtr& c) { return tau_inverse(c); },
      [](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return tau_inverse(m, s, d); });
  return sigma_bar(t, 1);
}
inline Morphism tau_inverse(const Morphism& f, const ObjPtr& src2, const ObjPtr& dst2) {
  if (f.comps.empty()) return make_base_morphism(p1::tau_inverse(f.base), src2, dst2);
  const Point& x = f.src->pt;
  Morphism u = twist(x, f, -1);
  ObjPtr s1 = sigma_bar(src2, -1), d1 = sigma_bar(dst2, -1);
  Morphism t = map_pointwise(u, s1, d1, [](const Morphism& m, const ObjPtr& s, const ObjPtr& d) { return tau_inverse(m, s, d); });
  return shift_once(t, src2, dst2);
}

// ---- Hom and Ext ---------------------------------------------------------------------

inline std::vector<Morphism> hom_basis_uncached(const ObjPtr& e, const ObjPtr& f);
inline std::vector<Morphism> hom_basis(const ObjPtr& e, const ObjPtr& f);
inline std::size_t hom_dim(const ObjPtr& e, const ObjPtr& f);

namespace hom_detail {

using Key = std::pair<const Object*, const Object*>;

// Components are shared between cycles (lifts, shifts), so sub-results are
// memoised by object identity for the duration of the outermost call.
struct Memo {
  std::map<Key, std::vector<Morphism>> bases;
  int depth = 0;
};
inline Memo& memo() {
  thread_local Memo m;
  return m;
}
struct Scope {
  Scope() { ++memo().depth; }
  ~Scope() {
    if (--memo().depth == 0) memo().bases.clear();
  }
};

// Hom between cycles as the null space of the commutativity constraints on
// tuples of component maps.
struct System {
  std::vector<std::vector<Morphism>> bases;
  std::size_t unknowns = 0;
  std::size_t rows = 0;
  std::vector<Vec> cols;
};

inline System system(const ObjPtr& e, const ObjPtr& f) {
  if (e->p() != f->p() || e->pt != f->pt) throw std::invalid_argument("hom_basis: cycles of different shape");
  const std::size_t p = e->comps.size();
  System s;
  s.bases.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    s.bases[j] = hom_basis(e->comps[j], f->comps[j]);
    s.unknowns += s.bases[j].size();
  }
  if (s.unknowns == 0) return s;
  std::vector<std::size_t> eq_off(p + 1, 0);
  for (std::size_t j = 0; j < p; ++j) eq_off[j + 1] = eq_off[j] + coord_dim(*e->arrows[j].src, *f->arrows[j].dst);
  s.rows = eq_off[p];
  if (s.rows == 0) return s;
  for (std::size_t j = 0; j < p; ++j)
    for (auto& b : s.bases[j]) {
      Vec col(s.rows);
      // constraint j: u_{j+1} x^E_j - x^F_j u_j
      Vec v = flatten(compose(f->arrows[j], b));
      for (std::size_t k = 0; k < v.size(); ++k) col[eq_off[j] + k] -= v[k];
      const std::size_t prev = j == 0 ? p - 1 : j - 1;
      Morphism lead = j == 0 ? twist(e->pt, b, 1, e->arrows[p - 1].dst, f->arrows[p - 1].dst) : b;
      Vec w = flatten(compose(lead, e->arrows[prev]));
      for (std::size_t k = 0; k < w.size(); ++k) col[eq_off[prev] + k] += w[k];
      s.cols.push_back(std::move(col));
    }
  return s;
}

}  // namespace hom_detail

inline std::vector<Morphism> hom_basis(const ObjPtr& e, const ObjPtr& f) {
  if (e->level == 0) return hom_basis_uncached(e, f);
  auto& m = hom_detail::memo();
  const hom_detail::Key key{e.get(), f.get()};
  if (m.depth > 0) {
    auto it = m.bases.find(key);
    if (it != m.bases.end()) return it->second;
  }
  hom_detail::Scope scope;
  auto out = hom_basis_uncached(e, f);
  if (m.depth > 1) m.bases.emplace(key, out);
  return out;
}

inline std::vector<Morphism> hom_basis_uncached(const ObjPtr& e, const ObjPtr& f) {
  if (e->level != f->level) throw std::invalid_argument("hom_basis: objects on different levels");
  std::vector<Morphism> out;
  if (e->level == 0) {
    for (auto& b : p1::hom_basis(e->base, f->base)) out.push_back(make_base_morphism(std::move(b), e, f));
    return out;
  }
  auto sys = hom_detail::system(e, f);
  if (sys.unknowns == 0) return out;
  std::vector<Vec> sols;
  if (sys.rows == 0) {
    for (std::size_t c = 0; c < sys.unknowns; ++c) {
      Vec v(sys.unknowns);
      v[c] = 1;
      sols.push_back(std::move(v));
    }
  } else {
    sols = kernel_basis(Matrix::from_columns(sys.cols, sys.rows));
  }
  const std::size_t p = e->comps.size();
  std::vector<std::vector<Vec>> flat(p);
  for (std::size_t j = 0; j < p; ++j)
    for (auto& b : sys.bases[j]) flat[j].push_back(flatten(b));
  for (auto& s : sols) {
    Morphism m;
    m.src = e;
    m.dst = f;
    std::size_t off = 0;
    for (std::size_t j = 0; j < p; ++j) {
      Vec acc(coord_dim(*e->comps[j], *f->comps[j]));
      for (std::size_t b = 0; b < flat[j].size(); ++b) {
        const Scalar& c = s[off + b];
        if (c.is_zero()) continue;
        for (std::size_t k = 0; k < acc.size(); ++k)
          if (!flat[j][b][k].is_zero()) acc[k] += c * flat[j][b][k];
      }
      m.comps.push_back(unflatten(e->comps[j], f->comps[j], acc));
      off += flat[j].size();
    }
    out.push_back(std::move(m));
  }
  return out;
}

inline std::size_t hom_dim(const ObjPtr& e, const ObjPtr& f) {
  if (e->level != f->level) throw std::invalid_argument("hom_dim: objects on different levels");
  if (e->level == 0) return p1::hom_dim(e->base, f->base);
  hom_detail::Scope scope;
  auto sys = hom_detail::system(e, f);
  if (sys.unknowns == 0 || sys.rows == 0) return sys.unknowns;
  return sys.unknowns - rank(Matrix::from_columns(sys.cols, sys.rows));
}

/// dim Ext^1(E, F), through Serre duality as dim Hom(F, tau E).
inline std::size_t ext1_dim(const ObjPtr& e, const ObjPtr& f) { return hom_dim(f, tau(e)); }

// ---- solving for factorisations -------------------------------------------------------------

/// Some k with m o k = h (h and m share their target).
inline std::optional<Morphism> factor_through(const Morphism& m, const Morphism& h) {
  auto basis = hom_basis(h.src, m.src);
  const Vec target = flatten(h);
  if (basis.empty()) {
    if (is_zero(target)) return zero_morphism(h.src, m.src);
    return std::nullopt;
  }
  std::vector<Vec> cols;
  for (auto& b : basis) cols.push_back(flatten(compose(m, b)));
  if (target.empty()) return zero_morphism(h.src, m.src);
  auto c = solve(Matrix::from_columns(cols, target.size()), target);
  if (!c) return std::nullopt;
  return combine(h.src, m.src, basis, *c);
}
/// Some k with k o e = h (h and e share their source).
inline std::optional<Morphism> factor_from(const Morphism& e, const Morphism& h) {
  auto basis = hom_basis(e.dst, h.dst);
  const Vec target = flatten(h);
  if (basis.empty()) {
    if (is_zero(target)) return zero_morphism(e.dst, h.dst);
    return std::nullopt;
  }
  std::vector<Vec> cols;
  for (auto& b : basis) cols.push_back(flatten(compose(b, e)));
  if (target.empty()) return zero_morphism(e.dst, h.dst);
  auto c = solve(Matrix::from_columns(cols, target.size()), target);
  if (!c) return std::nullopt;
  return combine(e.dst, h.dst, basis, *c);
}

// ---- kernels and cokernels -----------------------------------------------------------------

struct KernelResult {
  ObjPtr obj;
  Morphism map;
};

inline KernelResult kernel(const Morphism& f) {
  if (f.comps.empty()) {
    auto k = p1::kernel(f.base);
    ObjPtr o = make_base(k.obj);
    return {o, make_base_morphism(std::move(k.map), o, f.src)};
  }
  const Object& e = *f.src;
  const std::size_t p = f.comps.size();
  std::vector<KernelResult> parts;
  for (auto& u : f.comps) parts.push_back(kernel(u));
  std::vector<ObjPtr> comps;
  for (auto& k : parts) comps.push_back(k.obj);
  ObjPtr k0x = twist(e.pt, comps[0]);
  Morphism emb0x = twist(e.pt, parts[0].map, 1, k0x, e.arrows[p - 1].dst);
  std::vector<Morphism> arrows;
  for (std::size_t j = 0; j < p; ++j) {
    const Morphism& next = j + 1 < p ? parts[j + 1].map : emb0x;
    auto a = factor_through(next, compose(e.arrows[j], parts[j].map));
    if (!a) throw std::logic_error("kernel: induced arrow does not exist");
    arrows.push_back(std::move(*a));
  }
  ObjPtr k = make_cycle(e.pt, std::move(comps), std::move(arrows), false);
  Morphism m;
  m.src = k;
  m.dst = f.src;
  for (std::size_t j = 0; j < p; ++j) m.comps.push_back(rebind(parts[j].map, k->comps[j], e.comps[j]));
  return {k, m};
}

inline KernelResult cokernel(const Morphism& f) {
  if (f.comps.empty()) {
    auto c = p1::cokernel(f.base);
    ObjPtr o = make_base(c.obj);
    return {o, make_base_morphism(std::move(c.map), f.dst, o)};
  }
  const Object& g = *f.dst;
  const std::size_t p = f.comps.size();
  std::vector<KernelResult> parts;
  for (auto& u : f.comps) parts.push_back(cokernel(u));
  std::vector<ObjPtr> comps;
  for (auto& c : parts) comps.push_back(c.obj);
  ObjPtr c0x = twist(g.pt, comps[0]);
  Morphism proj0x = twist(g.pt, parts[0].map, 1, g.arrows[p - 1].dst, c0x);
  std::vector<Morphism> arrows;
  for (std::size_t j = 0; j < p; ++j) {
    const Morphism& next = j + 1 < p ? parts[j + 1].map : proj0x;
    auto a = factor_from(parts[j].map, compose(next, g.arrows[j]));
    if (!a) throw std::logic_error("cokernel: induced arrow does not exist");
    arrows.push_back(std::move(*a));
  }
  ObjPtr c = make_cycle(g.pt, std::move(comps), std::move(arrows), false);
  Morphism m;
  m.src = f.dst;
  m.dst = c;
  for (std::size_t j = 0; j < p; ++j) m.comps.push_back(rebind(parts[j].map, g.comps[j], c->comps[j]));
  return {c, m};
}

/// Image factorisation: the object and the maps src ->> im >-> dst.
struct ImageResult {
  ObjPtr obj;
  Morphism epi, mono;
};
inline ImageResult image(const Morphism& f) {
  auto c = cokernel(f);
  auto k = kernel(c.map);
  auto e = factor_through(k.map, f);
  if (!e) throw std::logic_error("image: factorisation failed");
  return {k.obj, *e, k.map};
}

// ---- direct sums -------------------------------------------------------------------------

struct SumResult {
  ObjPtr obj;
  std::vector<Morphism> inj, proj;
};

inline SumResult direct_sum(const std::vector<ObjPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum of an empty family needs an explicit zero object");
  SumResult r;
  if (parts[0]->level == 0) {
    std::vector<p1::BaseObject> b;
    for (auto& x : parts) b.push_back(x->base);
    auto s = p1::direct_sum(b);
    r.obj = make_base(s.obj);
    for (std::size_t a = 0; a < parts.size(); ++a) {
      r.inj.push_back(make_base_morphism(std::move(s.inj[a]), parts[a], r.obj));
      r.proj.push_back(make_base_morphism(std::move(s.proj[a]), r.obj, parts[a]));
    }
    return r;
  }
  const std::size_t p = parts[0]->comps.size();
  const Point x = parts[0]->pt;
  std::vector<SumResult> cs;
  std::vector<ObjPtr> comps;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<ObjPtr> cj;
    for (auto& a : parts) cj.push_back(a->comps.at(j));
    cs.push_back(direct_sum(cj));
    comps.push_back(cs.back().obj);
  }
  ObjPtr s0x = twist(x, comps[0]);
  std::vector<Morphism> arrows;
  for (std::size_t j = 0; j < p; ++j) {
    ObjPtr dst = j + 1 < p ? comps[j + 1] : s0x;
    Morphism acc = zero_morphism(comps[j], dst);
    for (std::size_t a = 0; a < parts.size(); ++a) {
      Morphism in = j + 1 < p ? cs[j + 1].inj[a] : twist(x, cs[0].inj[a], 1, parts[a]->arrows[p - 1].dst, s0x);
      acc = add(acc, compose(in, compose(parts[a]->arrows[j], cs[j].proj[a])));
    }
    arrows.push_back(std::move(acc));
  }
  r.obj = make_cycle(x, std::move(comps), std::move(arrows), false);
  for (std::size_t a = 0; a < parts.size(); ++a) {
    Morphism in, pr;
    in.src = parts[a];
    in.dst = r.obj;
    pr.src = r.obj;
    pr.dst = parts[a];
    for (std::size_t j = 0; j < p; ++j) {
      in.comps.push_back(rebind(cs[j].inj[a], parts[a]->comps[j], r.obj->comps[j]));
      pr.comps.push_back(rebind(cs[j].proj[a], r.obj->comps[j], parts[a]->comps[j]));
    }
    r.inj.push_back(std::move(in));
    r.proj.push_back(std::move(pr));
  }
  return r;
}

// ---- isomorphisms and decomposition ---------------------------------------------------------

inline std::optional<Morphism> inverse(const Morphism& f) {
  if (f.comps.empty()) {
    auto basis = p1::hom_basis(f.base.dst, f.base.src);
    const Vec target = p1::flatten(p1::identity(f.base.dst));
    if (p1::rank(f.base.src) != p1::rank(f.base.dst) || p1::degree(f.base.src) != p1::degree(f.base.dst))
      return std::nullopt;
    if (basis.empty()) {
      if (f.base.src.empty() && f.base.dst.empty()) return make_base_morphism(p1::identity(f.base.src), f.dst, f.src);
      return std::nullopt;
    }
    std::vector<Vec> cols;
    for (auto& b : basis) cols.push_back(p1::flatten(p1::compose(f.base, b)));
    auto c = solve(Matrix::from_columns(cols, target.size()), target);
    if (!c) return std::nullopt;
    p1::BaseMorphism g = p1::zero_morphism(f.base.dst, f.base.src);
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (!(*c)[k].is_zero()) g = p1::add(g, p1::scale(basis[k], (*c)[k]));
    if (!(p1::compose(g, f.base) == p1::identity(f.base.src))) return std::nullopt;
    return make_base_morphism(std::move(g), f.dst, f.src);
  }
  Morphism g;
  g.src = f.dst;
  g.dst = f.src;
  for (auto& u : f.comps) {
    auto v = inverse(u);
    if (!v) return std::nullopt;
    g.comps.push_back(std::move(*v));
  }
  return g;
}
inline bool is_iso(const Morphism& f) { return inverse(f).has_value(); }

inline int rank(const Object& e) { return e.level == 0 ? p1::rank(e.base) : rank(*e.comps[0]); }
inline bool is_vector_bundle(const Object& e) {
  if (e.level == 0) return p1::is_torsion_free(e.base);
  for (auto& c : e.comps)
    if (!is_vector_bundle(*c)) return false;
  return true;
}

/// Coordinates with respect to a basis of morphisms, via a fixed left inverse.
class Coordinates {
 public:
  explicit Coordinates(const std::vector<Morphism>& basis) : n_(basis.size()) {
    if (basis.empty()) return;
    std::vector<Vec> cols;
    for (auto& b : basis) cols.push_back(flatten(b));
    const std::size_t dim = cols[0].size();
    Matrix m = Matrix::from_columns(cols, dim);
    Matrix mt(n_, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < n_; ++j) mt(j, i) = m(i, j);
    Matrix red = mt;
    rows_ = rref(red);
    Matrix sq(n_, n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) sq(a, b) = m(rows_[a], b);
    inv_ = *wpl::inverse(sq);
  }
  Vec operator()(const Morphism& f) const {
    Vec v = flatten(f);
    Vec w(n_);
    for (std::size_t a = 0; a < n_; ++a) w[a] = v[rows_[a]];
    return inv_.apply(w);
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> rows_;
  Matrix inv_;
};

struct Summands {
  std::vector<ObjPtr> parts;
  std::vector<Morphism> inj, proj;  // proj[a] o inj[a] = id, sum inj[a] o proj[a] = id
  bool local = false;
};

/// Endomorphism algebra of e in its left regular representation.
inline std::vector<Matrix> regular_representation(const std::vector<Morphism>& basis) {
  Coordinates coords(basis);
  const std::size_t d = basis.size();
  std::vector<Matrix> reps;
  for (std::size_t i = 0; i < d; ++i) {
    Matrix l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      Vec c = coords(compose(basis[i], basis[j]));
      for (std::size_t r = 0; r < d; ++r) l(r, j) = c[r];
    }
    reps.push_back(std::move(l));
  }
  return reps;
}

inline Summands normalize(const ObjPtr& e) {
  Summands s;
  if (is_zero_object(*e)) return s;
  if (e->level == 0) {
    if (e->base.size() == 1) {
      s.parts.push_back(e);
      s.inj.push_back(identity(e));
      s.proj.push_back(identity(e));
      s.local = true;
      return s;
    }
    for (std::size_t i = 0; i < e->base.size(); ++i) {
      ObjPtr part = make_base({e->base[i]});
      p1::BaseMorphism in = p1::zero_morphism(part->base, e->base);
      p1::BaseMorphism pr = p1::zero_morphism(e->base, part->base);
      in.blocks[i][0] = p1::identity_block(e->base[i]);
      pr.blocks[0][i] = p1::identity_block(e->base[i]);
      s.parts.push_back(part);
      s.inj.push_back(make_base_morphism(std::move(in), part, e));
      s.proj.push_back(make_base_morphism(std::move(pr), e, part));
    }
    return s;
  }
  auto basis = hom_basis(e, e);
  auto split = idempotent_split(regular_representation(basis));
  if (split.idempotents.size() <= 1) {
    s.parts.push_back(e);
    s.inj.push_back(identity(e));
    s.proj.push_back(identity(e));
    s.local = true;
    return s;
  }
  const Morphism id = identity(e);
  struct Piece {
    std::string key;
    ObjPtr obj;
    Morphism in, pr;
  };
  std::vector<Piece> pieces;
  for (auto& c : split.coords) {
    Morphism idem = combine(e, e, basis, c);
    auto k = kernel(sub(id, idem));
    auto pr = factor_through(k.map, idem);
    if (!pr) throw std::logic_error("normalize: idempotent does not factor through its image");
    pieces.push_back({to_string(*k.obj), k.obj, k.map, *pr});
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.key < b.key; });
  for (auto& p : pieces) {
    s.parts.push_back(p.obj);
    s.inj.push_back(p.in);
    s.proj.push_back(p.pr);
  }
  return s;
}

/// Isomorphism test for indecomposable objects.
inline bool isomorphic_indecomposable(const ObjPtr& a, const ObjPtr& b) {
  if (a->level != b->level) return false;
  if (rank(*a) != rank(*b)) return false;
  auto h = hom_basis(a, b);
  if (h.empty()) return false;
  auto g = hom_basis(b, a);
  for (auto& x : h)
    for (auto& y : g)
      if (is_iso(compose(y, x))) return true;
  return false;
}

inline bool isomorphic(const ObjPtr& a, const ObjPtr& b) {
  if (a->level != b->level) return false;
  if (is_zero_object(*a) || is_zero_object(*b)) return is_zero_object(*a) && is_zero_object(*b);
  if (*a == *b) return true;
  if (rank(*a) != rank(*b)) return false;
  auto na = normalize(a), nb = normalize(b);
  if (na.parts.size() != nb.parts.size()) return false;
  std::vector<bool> used(nb.parts.size(), false);
  for (auto& x : na.parts) {
    bool found = false;
    for (std::size_t j = 0; j < nb.parts.size() && !found; ++j)
      if (!used[j] && isomorphic_indecomposable(x, nb.parts[j])) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

// ---- simples, lifts and line bundles ---------------------------------------------------------

/// Applies iota for levels from+1 .. to of the weight data.
inline ObjPtr lift(const WeightData& wd, const ObjPtr& e, int to) {
  ObjPtr r = e;
  for (int l = e->level + 1; l <= to; ++l)
    r = iota(r, wd.points[static_cast<std::size_t>(l - 1)], wd.weights[static_cast<std::size_t>(l - 1)]);
  return r;
}
inline Morphism lift(const WeightData& wd, const Morphism& f, int to) {
  Morphism r = f;
  for (int l = f.src->level + 1; l <= to; ++l)
    r = iota(r, wd.points[static_cast<std::size_t>(l - 1)], wd.weights[static_cast<std::size_t>(l - 1)]);
  return r;
}

inline int positive_mod(long a, long m) { return static_cast<int>(((a % m) + m) % m); }

/// Simple object S_j concentrated at y at the given level. At a point weighted
/// with weight p (at or below this level) j is read modulo p, with S_p at
/// position 0 of the cycle; at other points j is ignored.
inline ObjPtr simple_at(const WeightData& wd, int level, const Point& y, long j) {
  int wl = 0;
  for (int l = 1; l <= level; ++l)
    if (wd.points[static_cast<std::size_t>(l - 1)] == y) wl = l;
  if (wl == 0) return lift(wd, make_base({p1::Summand::T(y, 1)}), level);
  ObjPtr s = lift(wd, make_base({p1::Summand::T(y, 1)}), wl - 1);
  const int p = wd.weights[static_cast<std::size_t>(wl - 1)];
  const int pos = positive_mod(p - j, p);
  ObjPtr z = zero_like(s);
  std::vector<ObjPtr> comps(static_cast<std::size_t>(p), z);
  comps[static_cast<std::size_t>(pos)] = s;
  ObjPtr last = twist(y, comps[0]);
  std::vector<Morphism> arrows;
  for (int k = 0; k < p; ++k)
    arrows.push_back(zero_morphism(comps[static_cast<std::size_t>(k)], k + 1 < p ? comps[static_cast<std::size_t>(k + 1)] : last));
  ObjPtr c = make_cycle(y, std::move(comps), std::move(arrows), false);
  return lift(wd, c, level);
}

/// Simple S_j at the i-th weighted point (1-based).
inline ObjPtr simple_object(const WeightData& wd, int level, int point_index, long j) {
  if (point_index < 1 || point_index > wd.levels())
    throw std::out_of_range("unknown point index " + std::to_string(point_index));
  return simple_at(wd, level, wd.points[static_cast<std::size_t>(point_index - 1)], j);
}

struct LineBundleForm {
  ObjPtr lower;
  int shift = 0;
};

/// (L, i) with E isomorphic to shift^i(iota L), or nullopt for objects that are
/// not line bundles.
inline std::optional<LineBundleForm> line_bundle_form(const ObjPtr& e) {
  if (e->level == 0) return std::nullopt;
  if (!is_vector_bundle(*e) || rank(*e) != 1) return std::nullopt;
  const int p = e->p();
  int bad = -1, count = 0;
  for (int k = 0; k < p; ++k)
    if (!is_iso(e->arrows[static_cast<std::size_t>(k)])) {
      bad = k;
      ++count;
    }
  if (count != 1) return std::nullopt;
  LineBundleForm form{e->comps[0], p - 1 - bad};
  if (!isomorphic(e, sigma_bar(iota(form.lower, e->pt, p), form.shift))) return std::nullopt;
  return form;
}

}  // namespace wpl
