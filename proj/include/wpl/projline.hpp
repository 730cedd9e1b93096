#pragma once

// Coherent sheaves on the projective line in split form.
//
// Objects are sorted lists of summands O(n) and T(pt, l). A morphism is a grid
// of blocks indexed [target summand][source summand]:
//   O(m) -> O(n)        binary form of degree n-m, coefficients X^d .. Y^d
//   O(m) -> T(mu, l)    jet a_0 + a_1 t + ... + a_{l-1} t^{l-1}
//   T(mu,l) -> T(mu,l') jet of length l', coefficients below l'-l vanish
//   anything else       no coefficients
// Jets use the local coordinate t = X/Y - mu (finite mu, sections trivialised
// by Y^n) or t = Y/X (mu = infinity, trivialised by X^n).

#include "wpl/idempotent.hpp"

#include <limits>
#include <numeric>

namespace wpl::p1 {

struct Point {
  bool inf = false;
  Scalar val;

  static Point at(Scalar v) { return Point{false, std::move(v)}; }
  static Point infinity() { return Point{true, Scalar()}; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.inf == b.inf && (a.inf || a.val == b.val);
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.inf != b.inf) return b.inf;
    return !a.inf && a.val < b.val;
  }
  std::string str() const { return inf ? "inf" : val.str(); }
  static Point parse(std::string_view s) {
    if (s == "inf" || s == "oo" || s == "infinity") return infinity();
    return at(Scalar::parse(s));
  }
};

/// The linear form vanishing at a point: X - lambda Y, or Y at infinity.
inline Poly linear_form(const Point& p) {
  if (p.inf) return Poly{Scalar(0), Scalar(1)};
  return Poly{Scalar(1), -p.val};
}

/// Local expansion of a binary form at mu, truncated to length len.
inline Poly local_jet(const Poly& form, const Point& mu, std::size_t len) {
  if (mu.inf) return truncate(form, len);
  Poly g(form.rbegin(), form.rend());
  return truncate(taylor_shift(g, mu.val), len);
}

struct Summand {
  bool line = true;
  int n = 0;  // twist of a line bundle
  Point pt;   // support of a torsion summand
  int len = 0;

  static Summand O(int n) { return Summand{true, n, {}, 0}; }
  static Summand T(Point p, int l) { return Summand{false, 0, std::move(p), l}; }

  friend bool operator==(const Summand& a, const Summand& b) {
    if (a.line != b.line) return false;
    return a.line ? a.n == b.n : (a.pt == b.pt && a.len == b.len);
  }
  friend bool operator!=(const Summand& a, const Summand& b) { return !(a == b); }
  std::string str() const {
    return line ? "O(" + std::to_string(n) + ")" : "T(" + pt.str() + "," + std::to_string(len) + ")";
  }
};

/// Canonical order: line bundles by descending twist, then torsion by point and
/// descending length.
inline bool canonical_less(const Summand& a, const Summand& b) {
  if (a.line != b.line) return a.line;
  if (a.line) return a.n > b.n;
  if (a.pt != b.pt) return a.pt < b.pt;
  return a.len > b.len;
}

using BaseObject = std::vector<Summand>;

inline bool is_canonical(const BaseObject& x) {
  return std::is_sorted(x.begin(), x.end(), canonical_less);
}
inline int rank(const BaseObject& x) {
  return static_cast<int>(std::count_if(x.begin(), x.end(), [](const Summand& s) { return s.line; }));
}
inline int degree(const BaseObject& x) {
  int d = 0;
  for (auto& s : x) d += s.line ? s.n : s.len;
  return d;
}
inline bool is_torsion_free(const BaseObject& x) { return rank(x) == static_cast<int>(x.size()); }
inline std::string str(const BaseObject& x) {
  if (x.empty()) return "0";
  if (x.size() == 1) return x[0].str();
  std::string s = "sum(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + x[i].str();
  return s + ")";
}

// ---- blocks ----------------------------------------------------------------

inline std::size_t block_size(const Summand& from, const Summand& to) {
  if (from.line && to.line) return to.n >= from.n ? static_cast<std::size_t>(to.n - from.n + 1) : 0;
  if (from.line) return static_cast<std::size_t>(to.len);
  if (to.line || from.pt != to.pt) return 0;
  return static_cast<std::size_t>(to.len);
}
/// Coefficients below this index are forced to vanish.
inline std::size_t block_first_free(const Summand& from, const Summand& to) {
  if (!from.line && !to.line && from.pt == to.pt) return static_cast<std::size_t>(std::max(0, to.len - from.len));
  return 0;
}
inline Poly identity_block(const Summand& s) {
  Poly b(s.line ? 1 : static_cast<std::size_t>(s.len));
  b[0] = 1;
  return b;
}

/// Block of the composite a -> b -> c given g: b -> c and f: a -> b.
inline Poly compose_block(const Summand& a, const Summand& b, const Summand& c, const Poly& g, const Poly& f) {
  const std::size_t sz = block_size(a, c);
  if (sz == 0 || g.empty() || f.empty()) return Poly(sz);
  if (c.line) return form_mul(g, f);  // then a, b are line bundles
  if (b.line) return mul_trunc(local_jet(f, c.pt, sz), g, sz);
  return mul_trunc(f, g, sz);
}

struct BaseMorphism {
  BaseObject src, dst;
  std::vector<std::vector<Poly>> blocks;  // [dst index][src index]

  friend bool operator==(const BaseMorphism& a, const BaseMorphism& b) {
    return a.src == b.src && a.dst == b.dst && a.blocks == b.blocks;
  }
  bool is_zero() const {
    for (auto& row : blocks)
      for (auto& b : row)
        if (!wpl::is_zero(b)) return false;
    return true;
  }
};

inline BaseMorphism zero_morphism(const BaseObject& src, const BaseObject& dst) {
  BaseMorphism m{src, dst, {}};
  m.blocks.resize(dst.size());
  for (std::size_t i = 0; i < dst.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j) m.blocks[i].push_back(Poly(block_size(src[j], dst[i])));
  return m;
}
inline BaseMorphism identity(const BaseObject& x) {
  BaseMorphism m = zero_morphism(x, x);
  for (std::size_t i = 0; i < x.size(); ++i) m.blocks[i][i] = identity_block(x[i]);
  return m;
}

/// g after f.
inline BaseMorphism compose(const BaseMorphism& g, const BaseMorphism& f) {
  if (g.src != f.dst) throw std::invalid_argument("compose: objects do not match");
  BaseMorphism h = zero_morphism(f.src, g.dst);
  for (std::size_t i = 0; i < g.dst.size(); ++i)
    for (std::size_t k = 0; k < f.src.size(); ++k) {
      Poly acc(block_size(f.src[k], g.dst[i]));
      if (acc.empty()) continue;
      for (std::size_t j = 0; j < f.dst.size(); ++j) {
        Poly c = compose_block(f.src[k], f.dst[j], g.dst[i], g.blocks[i][j], f.blocks[j][k]);
        for (std::size_t e = 0; e < acc.size() && e < c.size(); ++e) acc[e] += c[e];
      }
      h.blocks[i][k] = std::move(acc);
    }
  return h;
}

inline BaseMorphism add(const BaseMorphism& a, const BaseMorphism& b) {
  BaseMorphism c = a;
  for (std::size_t i = 0; i < c.blocks.size(); ++i)
    for (std::size_t j = 0; j < c.blocks[i].size(); ++j)
      for (std::size_t e = 0; e < c.blocks[i][j].size(); ++e) c.blocks[i][j][e] += b.blocks[i][j][e];
  return c;
}
inline BaseMorphism scale(BaseMorphism a, const Scalar& s) {
  for (auto& row : a.blocks)
    for (auto& b : row)
      for (auto& x : b) x *= s;
  return a;
}

inline std::size_t coord_dim(const BaseObject& src, const BaseObject& dst) {
  std::size_t n = 0;
  for (auto& t : dst)
    for (auto& s : src) n += block_size(s, t);
  return n;
}
inline Vec flatten(const BaseMorphism& m) {
  Vec v;
  for (auto& row : m.blocks)
    for (auto& b : row) v.insert(v.end(), b.begin(), b.end());
  return v;
}
inline BaseMorphism unflatten(const BaseObject& src, const BaseObject& dst, const Vec& v) {
  BaseMorphism m = zero_morphism(src, dst);
  std::size_t pos = 0;
  for (auto& row : m.blocks)
    for (auto& b : row)
      for (auto& x : b) x = v.at(pos++);
  return m;
}

/// Basis of Hom(src, dst): one unit vector per free block coefficient.
inline std::vector<BaseMorphism> hom_basis(const BaseObject& src, const BaseObject& dst) {
  std::vector<BaseMorphism> out;
  const BaseMorphism zero = zero_morphism(src, dst);
  for (std::size_t i = 0; i < dst.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j)
      for (std::size_t e = block_first_free(src[j], dst[i]); e < block_size(src[j], dst[i]); ++e) {
        BaseMorphism m = zero;
        m.blocks[i][j][e] = 1;
        out.push_back(std::move(m));
      }
  return out;
}
inline std::size_t hom_dim(const BaseObject& src, const BaseObject& dst) {
  std::size_t n = 0;
  for (auto& t : dst)
    for (auto& s : src) n += block_size(s, t) - block_first_free(s, t);
  return n;
}

// ---- sums and reordering -----------------------------------------------------

/// Permutation that sorts x canonically (stable).
inline std::vector<std::size_t> canonical_order(const BaseObject& x) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return canonical_less(x[a], x[b]); });
  return perm;
}
inline BaseMorphism permute_dst(const BaseMorphism& m, const std::vector<std::size_t>& perm) {
  BaseMorphism r{m.src, {}, {}};
  for (auto p : perm) {
    r.dst.push_back(m.dst[p]);
    r.blocks.push_back(m.blocks[p]);
  }
  return r;
}
inline BaseMorphism permute_src(const BaseMorphism& m, const std::vector<std::size_t>& perm) {
  BaseMorphism r{{}, m.dst, {}};
  for (auto p : perm) r.src.push_back(m.src[p]);
  r.blocks.resize(m.blocks.size());
  for (std::size_t i = 0; i < m.blocks.size(); ++i)
    for (auto p : perm) r.blocks[i].push_back(m.blocks[i][p]);
  return r;
}

struct BaseSum {
  BaseObject obj;
  std::vector<BaseMorphism> inj, proj;
};

inline BaseSum direct_sum(const std::vector<BaseObject>& parts) {
  BaseObject raw;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (std::size_t k = 0; k < parts[p].size(); ++k) {
      raw.push_back(parts[p][k]);
      origin.emplace_back(p, k);
    }
  const auto perm = canonical_order(raw);
  BaseSum s;
  for (auto q : perm) s.obj.push_back(raw[q]);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    BaseMorphism in = zero_morphism(parts[p], s.obj);
    BaseMorphism pr = zero_morphism(s.obj, parts[p]);
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      auto [pp, k] = origin[perm[pos]];
      if (pp != p) continue;
      in.blocks[pos][k] = identity_block(parts[p][k]);
      pr.blocks[k][pos] = identity_block(parts[p][k]);
    }
    s.inj.push_back(std::move(in));
    s.proj.push_back(std::move(pr));
  }
  return s;
}

// ---- twist, untwist and translation -------------------------------------------

inline BaseObject twist(const Point& y, BaseObject x, int k = 1) {
  for (auto& s : x)
    if (s.line) s.n += k;
  return x;
}

/// The twist functor on morphisms, k-fold (k may be negative).
inline BaseMorphism twist(const Point& y, const BaseMorphism& f, int k = 1) {
  BaseMorphism g = f;
  g.src = twist(y, f.src, k);
  g.dst = twist(y, f.dst, k);
  if (k == 0) return g;
  for (std::size_t i = 0; i < f.dst.size(); ++i) {
    const Summand& t = f.dst[i];
    if (t.line || t.pt == y) continue;
    const std::size_t len = static_cast<std::size_t>(t.len);
    Poly u = local_jet(linear_form(y), t.pt, len);
    Poly factor{Scalar(1)};
    const Poly step = k > 0 ? series_inverse(u, len) : u;
    for (int r = 0; r < std::abs(k); ++r) factor = mul_trunc(factor, step, len);
    for (std::size_t j = 0; j < f.src.size(); ++j)
      if (f.src[j].line) g.blocks[i][j] = mul_trunc(g.blocks[i][j], factor, len);
  }
  return g;
}

/// The universal-extension map x_X : X -> X(y).
inline BaseMorphism twist_map(const Point& y, const BaseObject& x) {
  BaseMorphism m = zero_morphism(x, twist(y, x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Summand& s = x[i];
    if (s.line) {
      m.blocks[i][i] = linear_form(y);
    } else if (s.pt == y) {
      if (s.len > 1) m.blocks[i][i][1] = 1;
    } else {
      m.blocks[i][i][0] = 1;
    }
  }
  return m;
}

inline BaseObject tau(BaseObject x) {
  for (auto& s : x)
    if (s.line) s.n -= 2;
  return x;
}
inline BaseMorphism tau(const BaseMorphism& f) {
  BaseMorphism g = f;
  g.src = tau(f.src);
  g.dst = tau(f.dst);
  return g;
}
inline BaseObject tau_inverse(BaseObject x) {
  for (auto& s : x)
    if (s.line) s.n += 2;
  return x;
}
inline BaseMorphism tau_inverse(const BaseMorphism& f) {
  BaseMorphism g = f;
  g.src = tau_inverse(f.src);
  g.dst = tau_inverse(f.dst);
  return g;
}

// ---- kernels and cokernels --------------------------------------------------------

namespace detail {

inline Scalar eval_dehomogenized(const Poly& form, const Scalar& s) {
  Scalar r;
  for (const auto& c : form) r = r * s + c;
  return r;
}

struct VbMatrix {
  std::vector<std::size_t> rows, cols;  // indices of line-bundle summands in dst / src
};

inline VbMatrix vb_part(const BaseMorphism& f) {
  VbMatrix v;
  for (std::size_t i = 0; i < f.dst.size(); ++i)
    if (f.dst[i].line) v.rows.push_back(i);
  for (std::size_t j = 0; j < f.src.size(); ++j)
    if (f.src[j].line) v.cols.push_back(j);
  return v;
}

inline Matrix eval_vb(const BaseMorphism& f, const VbMatrix& v, const Scalar& s) {
  Matrix m(v.rows.size(), v.cols.size());
  for (std::size_t a = 0; a < v.rows.size(); ++a)
    for (std::size_t b = 0; b < v.cols.size(); ++b)
      m(a, b) = eval_dehomogenized(f.blocks[v.rows[a]][v.cols[b]], s);
  return m;
}

inline std::size_t vb_degree_bound(const BaseMorphism& f, const VbMatrix& v) {
  std::size_t d = 0;
  for (auto i : v.rows) {
    std::size_t row_max = 0;
    for (auto j : v.cols) row_max = std::max(row_max, f.blocks[i][j].size());
    d += row_max;
  }
  return d;
}

inline Scalar sample_point(std::size_t k) {
  if (!Scalar::rational_mode() && k >= Scalar::prime())
    throw std::runtime_error("prime field too small for generic rank evaluation");
  return Scalar(static_cast<long>(k));
}

struct GenericRank {
  std::size_t rank = 0;
  Scalar at;
};

inline GenericRank generic_rank(const BaseMorphism& f, const VbMatrix& v) {
  GenericRank g;
  if (v.rows.empty() || v.cols.empty()) return g;
  const std::size_t bound = vb_degree_bound(f, v);
  const std::size_t cap = std::min(v.rows.size(), v.cols.size());
  for (std::size_t k = 0; k <= bound; ++k) {
    const Scalar s = sample_point(k);
    const std::size_t r = wpl::rank(eval_vb(f, v, s));
    if (k == 0 || r > g.rank) {
      g.rank = r;
      g.at = s;
    }
    if (g.rank == cap) break;
  }
  return g;
}

/// Points where the line-bundle part of f may drop rank (finite part; infinity
/// is always added by the caller).
inline std::vector<Scalar> rank_drop_candidates(const BaseMorphism& f, const VbMatrix& v, const GenericRank& g) {
  if (g.rank == 0) return {};
  Matrix m0 = eval_vb(f, v, g.at);
  Matrix mc = m0;
  auto colpiv = rref(mc);
  Matrix mt(m0.cols(), m0.rows());
  for (std::size_t i = 0; i < m0.rows(); ++i)
    for (std::size_t j = 0; j < m0.cols(); ++j) mt(j, i) = m0(i, j);
  auto rowpiv = rref(mt);
  colpiv.resize(g.rank);
  rowpiv.resize(g.rank);
  int deg = 0;
  for (auto r : rowpiv) deg += f.dst[v.rows[r]].n;
  for (auto c : colpiv) deg -= f.src[v.cols[c]].n;
  std::vector<Scalar> xs, ys;
  for (int k = 0; k <= deg; ++k) {
    const Scalar s = sample_point(static_cast<std::size_t>(k));
    Matrix sub(g.rank, g.rank);
    Matrix full = eval_vb(f, v, s);
    for (std::size_t a = 0; a < g.rank; ++a)
      for (std::size_t b = 0; b < g.rank; ++b) sub(a, b) = full(rowpiv[a], colpiv[b]);
    xs.push_back(s);
    ys.push_back(determinant(sub));
  }
  return field_roots(interpolate(xs, ys));
}

/// Elements of a torsion part at one point, as coordinate vectors in the
/// basis {t^k e_i}.
struct LocalTorsion {
  std::vector<std::size_t> idx;     // summand indices
  std::vector<std::size_t> offset;  // coordinate offset per summand
  std::size_t dim = 0;
};

inline LocalTorsion local_torsion(const BaseObject& x, const Point& mu) {
  LocalTorsion lt;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].line && x[i].pt == mu) {
      lt.idx.push_back(i);
      lt.offset.push_back(lt.dim);
      lt.dim += static_cast<std::size_t>(x[i].len);
    }
  return lt;
}

inline Vec shift_t(const Vec& v, const BaseObject& x, const LocalTorsion& lt) {
  Vec w(v.size());
  for (std::size_t a = 0; a < lt.idx.size(); ++a) {
    const std::size_t len = static_cast<std::size_t>(x[lt.idx[a]].len);
    for (std::size_t k = 0; k + 1 < len; ++k) w[lt.offset[a] + k + 1] = v[lt.offset[a] + k];
  }
  return w;
}

inline std::vector<Vec> span_basis(const std::vector<Vec>& vs, std::size_t dim) {
  SpanBuilder sb(dim);
  std::vector<Vec> out;
  for (auto& v : vs)
    if (sb.add(v)) out.push_back(v);
  return out;
}

/// Subspace {v in span(basis) : T^k v = 0}.
inline std::vector<Vec> nilpotent_kernel(const std::vector<Vec>& basis, int k, const BaseObject& x,
                                         const LocalTorsion& lt) {
  if (basis.empty()) return {};
  std::vector<Vec> images;
  for (auto v : basis) {
    for (int r = 0; r < k; ++r) v = shift_t(v, x, lt);
    images.push_back(std::move(v));
  }
  Matrix m = Matrix::from_columns(images, lt.dim);
  std::vector<Vec> out;
  for (auto& c : kernel_basis(m)) {
    Vec v(lt.dim);
    for (std::size_t b = 0; b < basis.size(); ++b)
      if (!c[b].is_zero())
        for (std::size_t e = 0; e < lt.dim; ++e) v[e] += c[b] * basis[b][e];
    out.push_back(std::move(v));
  }
  return out;
}

/// Torsion part of ker f at mu: list of (length, element of the local torsion of f.src).
inline std::vector<std::pair<int, Vec>> local_kernel_chains(const BaseMorphism& f, const Point& mu) {
  const LocalTorsion la = local_torsion(f.src, mu);
  const LocalTorsion lb = local_torsion(f.dst, mu);
  if (la.dim == 0) return {};
  Matrix m(lb.dim, la.dim);
  for (std::size_t a = 0; a < la.idx.size(); ++a) {
    const std::size_t la_len = static_cast<std::size_t>(f.src[la.idx[a]].len);
    for (std::size_t b = 0; b < lb.idx.size(); ++b) {
      const Poly& blk = f.blocks[lb.idx[b]][la.idx[a]];
      for (std::size_t k = 0; k < la_len; ++k)
        for (std::size_t e = 0; e + k < blk.size(); ++e) m(lb.offset[b] + e + k, la.offset[a] + k) += blk[e];
    }
  }
  const auto n_basis = kernel_basis(m);
  int max_len = 0;
  for (auto i : la.idx) max_len = std::max(max_len, f.src[i].len);
  std::vector<std::vector<Vec>> nk(static_cast<std::size_t>(max_len) + 2);
  for (int k = 0; k <= max_len + 1; ++k) nk[static_cast<std::size_t>(k)] = nilpotent_kernel(n_basis, k, f.src, la);
  std::vector<std::pair<int, Vec>> chains;
  for (int k = max_len; k >= 1; --k) {
    SpanBuilder w(la.dim);
    for (auto& v : nk[static_cast<std::size_t>(k - 1)]) w.add(v);
    for (auto& v : nk[static_cast<std::size_t>(k + 1)]) w.add(shift_t(v, f.src, la));
    for (auto& v : nk[static_cast<std::size_t>(k)])
      if (w.add(v)) chains.emplace_back(k, v);
  }
  return chains;
}

/// Truncated polynomial arithmetic helpers for the local Smith form.
inline int valuation(const Poly& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) return static_cast<int>(i);
  return -1;
}
inline Poly shift_down(const Poly& a, std::size_t v, std::size_t n) {
  Poly r(n);
  for (std::size_t i = v; i < a.size() && i - v < n; ++i) r[i - v] = a[i];
  return r;
}

/// Torsion summands of coker f at mu with their projections, computed by the
/// Smith form of the local presentation over k[t]/t^n.
inline std::vector<std::pair<int, std::vector<Poly>>> local_cokernel(const BaseMorphism& f, const Point& mu,
                                                                     std::size_t n) {
  std::vector<std::size_t> rows;  // dst summands visible at mu
  for (std::size_t i = 0; i < f.dst.size(); ++i)
    if (f.dst[i].line || f.dst[i].pt == mu) rows.push_back(i);
  if (rows.empty()) return {};
  std::vector<std::vector<Poly>> cols;  // each column: one Poly per row
  for (std::size_t j = 0; j < f.src.size(); ++j) {
    const Summand& s = f.src[j];
    if (!s.line && s.pt != mu) continue;
    std::vector<Poly> col;
    for (auto i : rows) {
      const Summand& t = f.dst[i];
      const Poly& blk = f.blocks[i][j];
      if (t.line) col.push_back(s.line ? local_jet(blk, mu, n) : Poly(n));
      else col.push_back(truncate(blk, n));
    }
    cols.push_back(std::move(col));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Summand& t = f.dst[rows[r]];
    if (t.line) continue;
    std::vector<Poly> col(rows.size(), Poly(n));
    if (static_cast<std::size_t>(t.len) < n) col[r][static_cast<std::size_t>(t.len)] = 1;
    cols.push_back(std::move(col));
  }
  const std::size_t R = rows.size(), C = cols.size();
  // M[r][c] and U (R x R), both with entries in k[t]/t^n
  std::vector<std::vector<Poly>> M(R, std::vector<Poly>(C));
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t r = 0; r < R; ++r) M[r][c] = cols[c][r];
  std::vector<std::vector<Poly>> U(R, std::vector<Poly>(R, Poly(n)));
  for (std::size_t r = 0; r < R; ++r) U[r][r][0] = 1;

  std::vector<int> vals;
  std::size_t top = 0;
  for (std::size_t c0 = 0; top < R && c0 < C; ++c0) {
    int best = -1;
    std::size_t br = 0, bc = 0;
    for (std::size_t r = top; r < R; ++r)
      for (std::size_t c = c0; c < C; ++c) {
        int v = valuation(M[r][c]);
        if (v >= 0 && (best < 0 || v < best)) { best = v; br = r; bc = c; }
      }
    if (best < 0) break;
    std::swap(M[top], M[br]);
    std::swap(U[top], U[br]);
    for (auto& row : M) std::swap(row[c0], row[bc]);
    const std::size_t v = static_cast<std::size_t>(best);
    Poly unit_inv = series_inverse(shift_down(M[top][c0], v, n), n);
    for (auto& e : M[top]) e = mul_trunc(e, unit_inv, n);
    for (auto& e : U[top]) e = mul_trunc(e, unit_inv, n);
    for (std::size_t r = 0; r < R; ++r) {
      if (r == top || valuation(M[r][c0]) < 0) continue;
      Poly q = shift_down(M[r][c0], v, n);
      for (std::size_t c = 0; c < C; ++c) M[r][c] = poly_sub(M[r][c], mul_trunc(q, M[top][c], n));
      for (std::size_t c = 0; c < R; ++c) U[r][c] = poly_sub(U[r][c], mul_trunc(q, U[top][c], n));
    }
    for (std::size_t c = 0; c < C; ++c) {
      if (c == c0 || valuation(M[top][c]) < 0) continue;
      Poly q = shift_down(M[top][c], v, n);
      for (std::size_t r = 0; r < R; ++r) M[r][c] = poly_sub(M[r][c], mul_trunc(q, M[r][c0], n));
    }
    vals.push_back(best);
    ++top;
  }
  std::vector<std::pair<int, std::vector<Poly>>> out;
  for (std::size_t r = 0; r < vals.size(); ++r) {
    const int d = vals[r];
    if (d <= 0) continue;
    std::vector<Poly> row(f.dst.size());
    for (std::size_t a = 0; a < R; ++a) row[rows[a]] = truncate(U[r][a], static_cast<std::size_t>(d));
    out.emplace_back(d, std::move(row));
  }
  return out;
}

}  // namespace detail

struct BaseKernel {
  BaseObject obj;
  BaseMorphism map;  // obj -> source (kernel) or target -> obj (cokernel)
};

/// Kernel of f with its embedding, in canonical split form.
inline BaseKernel kernel(const BaseMorphism& f) {
  const BaseObject& A = f.src;
  std::vector<Summand> parts;
  std::vector<std::vector<Poly>> columns;  // embedding blocks per part, one per A summand

  std::vector<Point> tpoints;
  for (auto& s : A)
    if (!s.line && std::find(tpoints.begin(), tpoints.end(), s.pt) == tpoints.end()) tpoints.push_back(s.pt);
  for (auto& mu : tpoints) {
    const auto la = detail::local_torsion(A, mu);
    for (auto& [k, v] : detail::local_kernel_chains(f, mu)) {
      parts.push_back(Summand::T(mu, k));
      std::vector<Poly> col(A.size());
      for (std::size_t j = 0; j < A.size(); ++j) col[j] = Poly(block_size(parts.back(), A[j]));
      for (std::size_t a = 0; a < la.idx.size(); ++a) {
        const std::size_t len = static_cast<std::size_t>(A[la.idx[a]].len);
        col[la.idx[a]] = Poly(v.begin() + static_cast<long>(la.offset[a]), v.begin() + static_cast<long>(la.offset[a] + len));
      }
      columns.push_back(std::move(col));
    }
  }

  const auto vb = detail::vb_part(f);
  const std::size_t gen_rank = detail::generic_rank(f, vb).rank;
  const std::size_t want = vb.cols.size() - gen_rank;
  if (want > 0) {
    int a = std::numeric_limits<int>::min();
    for (auto j : vb.cols) a = std::max(a, A[j].n);
    const int floor = a - 64 - 4 * static_cast<int>(A.size() + f.dst.size()) - std::abs(degree(f.dst)) - std::abs(degree(A));
    std::size_t found = 0;
    for (; found < want; --a) {
      if (a < floor) throw std::runtime_error("kernel: line-bundle search did not terminate");
      const BaseObject La{Summand::O(a)};
      const auto hb = hom_basis(La, A);
      if (hb.empty()) continue;
      const std::size_t dim = coord_dim(La, A);
      std::vector<Vec> cols;
      for (auto& g : hb) cols.push_back(flatten(compose(f, g)));
      const std::size_t out_dim = coord_dim(La, f.dst);
      std::vector<Vec> sols;
      if (out_dim == 0) {
        for (auto& g : hb) sols.push_back(flatten(g));
      } else {
        for (auto& c : kernel_basis(Matrix::from_columns(cols, out_dim))) {
          Vec v(dim);
          for (std::size_t b = 0; b < hb.size(); ++b)
            if (!c[b].is_zero()) {
              Vec fb = flatten(hb[b]);
              for (std::size_t e = 0; e < dim; ++e) v[e] += c[b] * fb[e];
            }
          sols.push_back(std::move(v));
        }
      }
      if (sols.empty()) continue;
      SpanBuilder span(dim);
      for (std::size_t p = 0; p < parts.size(); ++p) {
        BaseMorphism emb = zero_morphism(BaseObject{parts[p]}, A);
        for (std::size_t j = 0; j < A.size(); ++j) emb.blocks[j][0] = columns[p][j];
        for (auto& h : hom_basis(La, BaseObject{parts[p]})) span.add(flatten(compose(emb, h)));
      }
      for (auto& s : sols) {
        if (!span.add(s)) continue;
        parts.push_back(Summand::O(a));
        BaseMorphism g = unflatten(La, A, s);
        std::vector<Poly> col(A.size());
        for (std::size_t j = 0; j < A.size(); ++j) col[j] = g.blocks[j][0];
        columns.push_back(std::move(col));
        ++found;
      }
    }
  }

  const auto perm = canonical_order(parts);
  BaseKernel k;
  for (auto q : perm) k.obj.push_back(parts[q]);
  k.map = zero_morphism(k.obj, A);
  for (std::size_t pos = 0; pos < perm.size(); ++pos)
    for (std::size_t j = 0; j < A.size(); ++j) k.map.blocks[j][pos] = columns[perm[pos]][j];
  return k;
}

/// Cokernel of f with its projection, in canonical split form. Throws if the
/// cokernel has torsion at a point that is not rational over the base field.
inline BaseKernel cokernel(const BaseMorphism& f) {
  const BaseObject& B = f.dst;
  std::vector<Summand> parts;
  std::vector<std::vector<Poly>> rows;  // projection blocks per part, one per B summand

  const auto vb = detail::vb_part(f);
  const auto gr = detail::generic_rank(f, vb);
  const std::size_t want = vb.rows.size() - gr.rank;
  if (want > 0) {
    int c = std::numeric_limits<int>::max();
    for (auto i : vb.rows) c = std::min(c, B[i].n);
    const int ceiling = c + 64 + 4 * static_cast<int>(B.size() + f.src.size()) + std::abs(degree(B)) + std::abs(degree(f.src));
    std::size_t found = 0;
    std::vector<std::pair<int, BaseMorphism>> chosen;
    for (; found < want; ++c) {
      if (c > ceiling) throw std::runtime_error("cokernel: line-bundle search did not terminate");
      const BaseObject Lc{Summand::O(c)};
      const auto hb = hom_basis(B, Lc);
      if (hb.empty()) continue;
      const std::size_t dim = coord_dim(B, Lc);
      std::vector<Vec> cols;
      for (auto& h : hb) cols.push_back(flatten(compose(h, f)));
      const std::size_t out_dim = coord_dim(f.src, Lc);
      std::vector<Vec> sols;
      if (out_dim == 0) {
        for (auto& h : hb) sols.push_back(flatten(h));
      } else {
        for (auto& co : kernel_basis(Matrix::from_columns(cols, out_dim))) {
          Vec v(dim);
          for (std::size_t b = 0; b < hb.size(); ++b)
            if (!co[b].is_zero()) {
              Vec fb = flatten(hb[b]);
              for (std::size_t e = 0; e < dim; ++e) v[e] += co[b] * fb[e];
            }
          sols.push_back(std::move(v));
        }
      }
      if (sols.empty()) continue;
      SpanBuilder span(dim);
      for (auto& [cc, pr] : chosen)
        for (auto& k : hom_basis(BaseObject{Summand::O(cc)}, Lc)) span.add(flatten(compose(k, pr)));
      for (auto& s : sols) {
        if (!span.add(s)) continue;
        BaseMorphism h = unflatten(B, Lc, s);
        parts.push_back(Summand::O(c));
        rows.push_back(h.blocks[0]);
        chosen.emplace_back(c, h);
        ++found;
      }
    }
  }

  // torsion: total length is forced by degrees
  const BaseKernel ker = kernel(f);
  int torsion_total = degree(B) - degree(f.src) + degree(ker.obj);
  for (auto& s : parts) torsion_total -= s.n;
  if (torsion_total < 0) throw std::logic_error("cokernel: negative torsion degree");
  if (torsion_total > 0) {
    std::vector<Point> cands;
    auto add_point = [&](const Point& p) {
      if (std::find(cands.begin(), cands.end(), p) == cands.end()) cands.push_back(p);
    };
    for (auto& s : B)
      if (!s.line) add_point(s.pt);
    for (auto& r : detail::rank_drop_candidates(f, vb, gr)) add_point(Point::at(r));
    add_point(Point::infinity());
    std::sort(cands.begin(), cands.end());
    int seen = 0;
    const std::size_t n = static_cast<std::size_t>(torsion_total) + 1;
    for (auto& mu : cands)
      for (auto& [d, row] : detail::local_cokernel(f, mu, n)) {
        if (static_cast<std::size_t>(d) >= n) continue;
        Summand t = Summand::T(mu, d);
        std::vector<Poly> r(B.size());
        for (std::size_t j = 0; j < B.size(); ++j) {
          r[j] = row[j].empty() ? Poly(block_size(B[j], t)) : truncate(row[j], block_size(B[j], t));
          for (std::size_t e = 0; e < block_first_free(B[j], t); ++e)
            if (!r[j][e].is_zero()) throw std::logic_error("cokernel: ill-formed local projection");
        }
        parts.push_back(t);
        rows.push_back(std::move(r));
        seen += d;
      }
    if (seen != torsion_total)
      throw std::runtime_error("cokernel: torsion supported at a non-rational point (found length " +
                               std::to_string(seen) + " of " + std::to_string(torsion_total) + ")");
  }

  const auto perm = canonical_order(parts);
  BaseKernel c;
  for (auto q : perm) c.obj.push_back(parts[q]);
  c.map = zero_morphism(B, c.obj);
  for (std::size_t pos = 0; pos < perm.size(); ++pos) c.map.blocks[pos] = rows[perm[pos]];
  return c;
}

}  // namespace wpl::p1
