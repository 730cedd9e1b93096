#pragma once

// Reduction and insertion functors psi^i, psi_i between weights p and p-1 at
// one weighted point, their composites, adjunction transposes and
// (co)units.
//
// Indices follow psi^{np+i} = shift'^{-n} psi^i and psi_{np+i} = psi_i shift'^n
// with 0 <= i < p, where p is the larger weight and shift' the shift on the
// smaller one. A weighted point carrying weight 1 is a 1-cycle.

#include "wpl/cyclecat.hpp"

namespace wpl {

struct PsiIndex {
  long n = 0;
  int i = 0;
};
inline PsiIndex split_index(long m, int p) {
  long i = ((m % p) + p) % p;
  return {(m - i) / p, static_cast<int>(i)};
}

/// Weight data read off the nesting structure of an object.
inline WeightData shape(const Object& e) {
  WeightData wd;
  const Object* cur = &e;
  while (cur->level > 0) {
    wd.weights.insert(wd.weights.begin(), cur->p());
    wd.points.insert(wd.points.begin(), cur->pt);
    cur = cur->comps[0].get();
  }
  return wd;
}

// ---- basic functors at the outermost level, 0 <= i < p -----------------------------------

inline ObjPtr reduce_basic(const ObjPtr& e, int i) {
  const int p = e->p();
  if (p < 2) throw std::invalid_argument("psi_reduce: weight 1 cannot be reduced");
  if (i == 0) return reduce_basic(sigma_bar(e, 1), p - 1);
  std::vector<ObjPtr> comps;
  std::vector<Morphism> arrows;
  for (int j = 0; j < p; ++j) {
    if (j == i) continue;
    comps.push_back(e->comps[static_cast<std::size_t>(j)]);
    if (j == i - 1) arrows.push_back(compose(e->arrows[static_cast<std::size_t>(i)], e->arrows[static_cast<std::size_t>(i - 1)]));
    else arrows.push_back(e->arrows[static_cast<std::size_t>(j)]);
  }
  return make_cycle(e->pt, std::move(comps), std::move(arrows), false);
}
inline Morphism reduce_basic(const Morphism& f, int i, const ObjPtr& src2, const ObjPtr& dst2) {
  const int p = static_cast<int>(f.comps.size());
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  if (i == 0) {
    for (int j = 1; j < p; ++j) g.comps.push_back(f.comps[static_cast<std::size_t>(j)]);
  } else {
    for (int j = 0; j < p; ++j)
      if (j != i) g.comps.push_back(f.comps[static_cast<std::size_t>(j)]);
  }
  for (std::size_t j = 0; j < g.comps.size(); ++j) g.comps[j] = rebind(g.comps[j], src2->comps[j], dst2->comps[j]);
  return g;
}

inline ObjPtr insert_basic(const ObjPtr& e, int i) {
  const int q = e->p();  // result has weight q + 1
  if (i < 0 || i > q) throw std::invalid_argument("psi_insert: position out of range");
  std::vector<ObjPtr> comps;
  std::vector<Morphism> arrows;
  for (int j = 0; j < q; ++j) {
    const auto& c = e->comps[static_cast<std::size_t>(j)];
    comps.push_back(c);
    if (j == i) {
      comps.push_back(c);
      arrows.push_back(identity(c));
    }
    arrows.push_back(e->arrows[static_cast<std::size_t>(j)]);
  }
  if (i == q) {
    ObjPtr t = e->arrows.back().dst;
    comps.push_back(t);
    arrows.push_back(identity(t));
  }
  return make_cycle(e->pt, std::move(comps), std::move(arrows), false);
}
inline Morphism insert_basic(const Morphism& f, int i, const ObjPtr& src2, const ObjPtr& dst2) {
  const int q = static_cast<int>(f.comps.size());
  Morphism g;
  g.src = src2;
  g.dst = dst2;
  for (int j = 0; j < q; ++j) {
    g.comps.push_back(f.comps[static_cast<std::size_t>(j)]);
    if (j == i) g.comps.push_back(f.comps[static_cast<std::size_t>(j)]);
  }
  if (i == q) g.comps.push_back(twist(f.src->pt, f.comps[0]));
  for (std::size_t j = 0; j < g.comps.size(); ++j) g.comps[j] = rebind(g.comps[j], src2->comps[j], dst2->comps[j]);
  return g;
}

// ---- general indices -------------------------------------------------------------------------

inline ObjPtr psi_reduce(const ObjPtr& e, long m) {
  if (e->level == 0) throw std::invalid_argument("psi_reduce needs a cycle object");
  auto [n, i] = split_index(m, e->p());
  return sigma_bar(reduce_basic(e, i), static_cast<int>(-n));
}
inline Morphism psi_reduce(const Morphism& f, long m) {
  auto [n, i] = split_index(m, f.src->p());
  Morphism g = reduce_basic(f, i, reduce_basic(f.src, i), reduce_basic(f.dst, i));
  return sigma_bar(g, static_cast<int>(-n));
}

/// psi_m from weight q to weight q+1.
inline ObjPtr psi_insert(const ObjPtr& e, long m) {
  if (e->level == 0) throw std::invalid_argument("psi_insert needs a cycle object (use iota with weight 1)");
  auto [n, i] = split_index(m, e->p() + 1);
  return insert_basic(sigma_bar(e, static_cast<int>(n)), i);
}
inline Morphism psi_insert(const Morphism& f, long m) {
  auto [n, i] = split_index(m, f.src->p() + 1);
  Morphism s = sigma_bar(f, static_cast<int>(n));
  return insert_basic(s, i, insert_basic(s.src, i), insert_basic(s.dst, i));
}

// ---- functors at an inner weighted point, applied pointwise above it ------------------------

inline ObjPtr psi_reduce_at(int level, const ObjPtr& e, long m);
inline Morphism psi_reduce_at(int level, const Morphism& f, long m, const ObjPtr& src2, const ObjPtr& dst2);

inline ObjPtr psi_reduce_at(int level, const ObjPtr& e, long m) {
  if (e->level < level) throw std::invalid_argument("psi_reduce: object lives below the requested point");
  if (e->level == level) return psi_reduce(e, m);
  return map_pointwise(
      e, [&](const ObjPtr& c) { return psi_reduce_at(level, c, m); },
      [&](const Morphism& u, const ObjPtr& s, const ObjPtr& d) { return psi_reduce_at(level, u, m, s, d); });
}
inline Morphism psi_reduce_at(int level, const Morphism& f, long m, const ObjPtr& src2, const ObjPtr& dst2) {
  if (f.src->level == level) return rebind(psi_reduce(f, m), src2, dst2);
  return map_pointwise(f, src2, dst2, [&](const Morphism& u, const ObjPtr& s, const ObjPtr& d) {
    return psi_reduce_at(level, u, m, s, d);
  });
}
inline Morphism psi_reduce_at(int level, const Morphism& f, long m) {
  return psi_reduce_at(level, f, m, psi_reduce_at(level, f.src, m), psi_reduce_at(level, f.dst, m));
}

inline ObjPtr psi_insert_at(int level, const ObjPtr& e, long m);
inline Morphism psi_insert_at(int level, const Morphism& f, long m, const ObjPtr& src2, const ObjPtr& dst2);

inline ObjPtr psi_insert_at(int level, const ObjPtr& e, long m) {
  if (e->level < level) throw std::invalid_argument("psi_insert: object lives below the requested point");
  if (e->level == level) return psi_insert(e, m);
  return map_pointwise(
      e, [&](const ObjPtr& c) { return psi_insert_at(level, c, m); },
      [&](const Morphism& u, const ObjPtr& s, const ObjPtr& d) { return psi_insert_at(level, u, m, s, d); });
}
inline Morphism psi_insert_at(int level, const Morphism& f, long m, const ObjPtr& src2, const ObjPtr& dst2) {
  if (f.src->level == level) return rebind(psi_insert(f, m), src2, dst2);
  return map_pointwise(f, src2, dst2, [&](const Morphism& u, const ObjPtr& s, const ObjPtr& d) {
    return psi_insert_at(level, u, m, s, d);
  });
}
inline Morphism psi_insert_at(int level, const Morphism& f, long m) {
  return psi_insert_at(level, f, m, psi_insert_at(level, f.src, m), psi_insert_at(level, f.dst, m));
}

// ---- adjunction transposes (outermost level) -----------------------------------------------------

/// (psi^m -| psi_m): f : psi^m E -> F  gives  E -> psi_m F.
inline Morphism transpose_right(long m, const ObjPtr& e, const ObjPtr& f2, const Morphism& f) {
  const int p = e->p();
  auto [n, i] = split_index(m, p);
  Morphism s = sigma_bar(f, static_cast<int>(n));  // psi^i E -> shift'^n F
  const Object& en = *e;
  Morphism g;
  g.src = e;
  g.dst = psi_insert(f2, m);
  for (int k = 0; k < p; ++k) {
    if (k < i) g.comps.push_back(s.comps[static_cast<std::size_t>(k)]);
    else if (k == i) {
      const Morphism next = i < p - 1 ? s.comps[static_cast<std::size_t>(i)] : twist(en.pt, s.comps[0]);
      g.comps.push_back(compose(next, en.arrows[static_cast<std::size_t>(i)]));
    } else g.comps.push_back(s.comps[static_cast<std::size_t>(k - 1)]);
  }
  for (std::size_t k = 0; k < g.comps.size(); ++k) g.comps[k] = rebind(g.comps[k], g.src->comps[k], g.dst->comps[k]);
  return g;
}
/// Inverse of transpose_right: g : E -> psi_m F gives psi^m E -> F.
inline Morphism untranspose_right(long m, const Morphism& g) { return psi_reduce(g, m); }

/// (psi_{m-1} -| psi^m): h : psi_{m-1} F -> E gives F -> psi^m E.
inline Morphism transpose_left(long m, const Morphism& h) { return psi_reduce(h, m); }

/// Inverse of transpose_left: w : F -> psi^m E gives psi_{m-1} F -> E.
inline Morphism untranspose_left(long m, const ObjPtr& f2, const ObjPtr& e, const Morphism& w) {
  const int p = e->p();
  auto [n, i] = split_index(m, p);
  Morphism s = sigma_bar(w, static_cast<int>(n));  // shift'^n F -> psi^i E
  Morphism h;
  h.src = psi_insert(f2, m - 1);
  h.dst = e;
  if (i == 0) {
    // psi_{-1} F' = (shift^{-1} F'_{p-2}, F'_0, ..., F'_{p-2})
    h.comps.push_back(twist(e->pt, compose(e->arrows[static_cast<std::size_t>(p - 1)], s.comps[static_cast<std::size_t>(p - 2)]), -1));
    for (int k = 1; k < p; ++k) h.comps.push_back(s.comps[static_cast<std::size_t>(k - 1)]);
  } else {
    for (int k = 0; k < p; ++k) {
      if (k < i) h.comps.push_back(s.comps[static_cast<std::size_t>(k)]);
      else if (k == i) h.comps.push_back(compose(e->arrows[static_cast<std::size_t>(i - 1)], s.comps[static_cast<std::size_t>(i - 1)]));
      else h.comps.push_back(s.comps[static_cast<std::size_t>(k - 1)]);
    }
  }
  for (std::size_t k = 0; k < h.comps.size(); ++k) h.comps[k] = rebind(h.comps[k], h.src->comps[k], h.dst->comps[k]);
  return h;
}

/// Unit E -> psi_m psi^m E of (psi^m -| psi_m).
inline Morphism unit_right(long m, const ObjPtr& e) {
  ObjPtr r = psi_reduce(e, m);
  return transpose_right(m, e, r, identity(r));
}
/// Counit psi^m psi_m F -> F of (psi^m -| psi_m); the identity.
inline Morphism counit_right(long m, const ObjPtr& f) { return rebind(identity(f), psi_reduce(psi_insert(f, m), m), f); }
/// Unit F -> psi^m psi_{m-1} F of (psi_{m-1} -| psi^m); the identity.
inline Morphism unit_left(long m, const ObjPtr& f) { return rebind(identity(f), f, psi_reduce(psi_insert(f, m - 1), m)); }
/// Counit psi_{m-1} psi^m E -> E of (psi_{m-1} -| psi^m).
inline Morphism counit_left(long m, const ObjPtr& e) {
  ObjPtr r = psi_reduce(e, m);
  return untranspose_left(m, r, e, identity(r));
}

// ---- index sequences ---------------------------------------------------------------------------------

using IndexSeq = std::vector<int>;
using SeqTuple = std::vector<IndexSeq>;

inline void validate_seq(const IndexSeq& q, int p) {
  if (static_cast<int>(q.size()) >= p && !q.empty())
    throw std::invalid_argument("index sequence of length " + std::to_string(q.size()) + " too long for weight " + std::to_string(p));
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] < 0 || q[k] >= p) throw std::invalid_argument("index " + std::to_string(q[k]) + " outside [0, " + std::to_string(p) + ")");
    if (k && q[k] <= q[k - 1]) throw std::invalid_argument("index sequence must be strictly increasing");
  }
}

/// psi^{i_1} ... psi^{i_q} (psi^{i_q} applied first) at the given weighted point.
inline ObjPtr psi_reduce_seq(int level, const ObjPtr& e, const IndexSeq& q) {
  ObjPtr r = e;
  for (auto it = q.rbegin(); it != q.rend(); ++it) r = psi_reduce_at(level, r, *it);
  return r;
}
inline Morphism psi_reduce_seq(int level, const Morphism& f, const IndexSeq& q) {
  Morphism r = f;
  for (auto it = q.rbegin(); it != q.rend(); ++it) r = psi_reduce_at(level, r, *it);
  return r;
}
/// psi_{i_q} ... psi_{i_1} (psi_{i_1} applied first); shift adds a constant to every index.
inline ObjPtr psi_insert_seq(int level, const ObjPtr& e, const IndexSeq& q, int shift = 0) {
  ObjPtr r = e;
  for (int i : q) r = psi_insert_at(level, r, i + shift);
  return r;
}
inline Morphism psi_insert_seq(int level, const Morphism& f, const IndexSeq& q, int shift = 0) {
  Morphism r = f;
  for (int i : q) r = psi_insert_at(level, r, i + shift);
  return r;
}

/// Composite over all weighted points: reduces at the last point first.
inline ObjPtr psi_reduce_tower(const ObjPtr& e, const SeqTuple& qq) {
  ObjPtr r = e;
  for (int l = static_cast<int>(qq.size()); l >= 1; --l) r = psi_reduce_seq(l, r, qq[static_cast<std::size_t>(l - 1)]);
  return r;
}
inline Morphism psi_reduce_tower(const Morphism& f, const SeqTuple& qq) {
  Morphism r = f;
  for (int l = static_cast<int>(qq.size()); l >= 1; --l) r = psi_reduce_seq(l, r, qq[static_cast<std::size_t>(l - 1)]);
  return r;
}
/// Composite insertion over all weighted points: inserts at the first point first.
inline ObjPtr psi_insert_tower(const ObjPtr& e, const SeqTuple& qq, int shift = 0) {
  ObjPtr r = e;
  for (int l = 1; l <= static_cast<int>(qq.size()); ++l) r = psi_insert_seq(l, r, qq[static_cast<std::size_t>(l - 1)], shift);
  return r;
}
inline Morphism psi_insert_tower(const Morphism& f, const SeqTuple& qq, int shift = 0) {
  Morphism r = f;
  for (int l = 1; l <= static_cast<int>(qq.size()); ++l) r = psi_insert_seq(l, r, qq[static_cast<std::size_t>(l - 1)], shift);
  return r;
}

/// Weight data after reducing by qq.
inline WeightData reduced_weights(const WeightData& wd, const SeqTuple& qq) {
  WeightData r = wd;
  for (std::size_t l = 0; l < qq.size(); ++l) r.weights[l] -= static_cast<int>(qq[l].size());
  return r;
}
inline void validate_tuple(const WeightData& wd, const SeqTuple& qq) {
  if (qq.size() != wd.weights.size())
    throw std::invalid_argument("expected one index sequence per weighted point (" + std::to_string(wd.weights.size()) + ")");
  for (std::size_t l = 0; l < qq.size(); ++l) validate_seq(qq[l], wd.weights[l]);
}

// ---- kernel and image ------------------------------------------------------------------------------

/// Cycle positions (at the given point) of the simples killed by psi^{q}.
inline std::vector<int> kernel_positions(const IndexSeq& q) { return q; }

/// Label j of the simple S_j sitting at cycle position pos for weight p.
inline int simple_label(int pos, int p) { return positive_mod(p - pos, p) == 0 ? p : positive_mod(p - pos, p); }

inline bool ker_membership(int level, const ObjPtr& e, const IndexSeq& q) {
  return is_zero_object(*psi_reduce_seq(level, e, q));
}
inline bool ker_membership(int level, const ObjPtr& e, long m) {
  return is_zero_object(*psi_reduce_at(level, e, m));
}

/// Perpendicularity to the simple killed by psi^m: Hom and Ext^1 vanish.
inline bool im_membership(int level, const ObjPtr& f, long m) {
  const WeightData wd = shape(*f);
  const int p = wd.weights[static_cast<std::size_t>(level - 1)];
  const int pos = positive_mod(m, p);
  ObjPtr s = simple_object(wd, f->level, level, p - pos);
  return hom_dim(s, f) == 0 && ext1_dim(s, f) == 0;
}

/// Explicit witness: F lies in the image of psi_m iff the unit F -> psi_m psi^m F is invertible.
inline bool im_witness(const ObjPtr& f, long m) { return is_iso(unit_right(m, f)); }

}  // namespace wpl
