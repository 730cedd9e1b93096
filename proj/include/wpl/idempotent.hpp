#pragma once

// Splitting of finite-dimensional algebras into local corners.
//
// The algebra is given by a basis of square matrices (any faithful
// representation) whose span is closed under multiplication and contains the
// identity.

#include "wpl/poly.hpp"

#include <random>

namespace wpl {

struct SplitResult {
  std::vector<Matrix> idempotents;  // pairwise orthogonal, summing to 1
  std::vector<Vec> coords;          // the same idempotents in the given basis
  bool local = false;
};

namespace detail {

inline Vec flatten(const Matrix& m) {
  Vec v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

inline Scalar trace(const Matrix& m) {
  Scalar s;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

/// Minimal polynomial of a inside the corner algebra with unit e.
inline Poly corner_minpoly(const Matrix& a, const Matrix& e) {
  std::vector<Vec> powers{flatten(e)};
  Matrix cur = e;
  while (true) {
    cur = cur * a;
    Vec v = flatten(cur);
    Matrix m = Matrix::from_columns(powers, v.size());
    if (auto c = solve(m, v)) {
      Poly f(powers.size() + 1);
      for (std::size_t k = 0; k < powers.size(); ++k) f[k] = -(*c)[k];
      f[powers.size()] = 1;
      return f;
    }
    powers.push_back(std::move(v));
  }
}

inline Matrix eval_in_corner(const Poly& f, const Matrix& a, const Matrix& e) {
  Matrix r(e.rows(), e.cols());
  for (std::size_t k = f.size(); k-- > 0;) {
    r = r * a;
    r = r + f[k] * e;
  }
  return r;
}

/// Nontrivial idempotent of the corner generated by a, if a is not
/// scalar-plus-nilpotent with a rational eigenvalue.
inline std::optional<Matrix> split_by(const Matrix& a, const Matrix& e) {
  const Poly m = corner_minpoly(a, e);
  const auto roots = field_roots(m);
  if (roots.empty()) return std::nullopt;
  Poly lin{-roots.front(), Scalar(1)};
  Poly f{Scalar(1)};
  Poly g = m;
  while (true) {
    auto [q, r] = poly_divmod(g, lin);
    if (degree(r) >= 0) break;
    g = q;
    f = poly_mul(f, lin);
  }
  if (degree(g) <= 0) return std::nullopt;
  auto [d, u, v] = poly_xgcd(f, g);
  (void)v;
  Matrix e1 = eval_in_corner(poly_mul(u, f), a, e);
  if (e1.is_zero() || e1 == e) return std::nullopt;
  return e1;
}

inline std::vector<Matrix> corner_basis(const std::vector<Matrix>& basis, const Matrix& e) {
  const std::size_t n = e.rows();
  SpanBuilder span(n * n);
  std::vector<Matrix> out;
  for (auto& b : basis) {
    Matrix c = e * b * e;
    if (span.add(flatten(c))) out.push_back(std::move(c));
  }
  return out;
}

/// Exact locality certificate in characteristic zero via the trace form.
inline bool corner_is_local_char0(const std::vector<Matrix>& cb) {
  const std::size_t m = cb.size();
  Matrix gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) gram(i, j) = gram(j, i) = trace(cb[i] * cb[j]);
  return rank(gram) <= 1;
}

struct Splitter {
  const std::vector<Matrix>& basis;
  std::mt19937_64 gen;
  std::vector<Matrix> found;
  bool any_split = false;

  void run(const Matrix& e) {
    const auto cb = corner_basis(basis, e);
    if (cb.size() <= 1) {
      found.push_back(e);
      return;
    }
    const bool char0 = Scalar::rational_mode();
    if (char0 && corner_is_local_char0(cb)) {
      found.push_back(e);
      return;
    }
    auto attempt = [&](const Matrix& a) -> bool {
      if (auto e1 = split_by(a, e)) {
        any_split = true;
        Matrix e2 = e - *e1;
        run(*e1);
        run(e2);
        return true;
      }
      return false;
    };
    for (auto& c : cb)
      if (attempt(c)) return;
    for (std::size_t i = 0; i < cb.size(); ++i)
      for (std::size_t j = i + 1; j < cb.size(); ++j)
        if (attempt(cb[i] + cb[j])) return;
    std::uniform_int_distribution<int> coeff(-7, 7);
    const int tries = char0 ? 2000 : 64;
    for (int t = 0; t < tries; ++t) {
      Matrix a(e.rows(), e.cols());
      for (auto& c : cb) a = a + Scalar(coeff(gen)) * c;
      if (attempt(a)) return;
    }
    if (char0) throw std::runtime_error("idempotent_split: no splitting element found in a non-local corner");
    found.push_back(e);
  }
};

}  // namespace detail

/// Complete set of primitive orthogonal idempotents of the algebra spanned by
/// `basis`. Throws std::invalid_argument when the span is not a unital algebra.
inline SplitResult idempotent_split(const std::vector<Matrix>& basis, std::uint64_t seed = 0x5eed) {
  SplitResult res;
  if (basis.empty()) {
    res.local = false;
    return res;
  }
  const std::size_t n = basis.front().rows();
  std::vector<Vec> flat;
  for (auto& b : basis) {
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("idempotent_split: basis matrices must be square of equal size");
    flat.push_back(detail::flatten(b));
  }
  const Matrix coord = Matrix::from_columns(flat, n * n);
  if (rank(coord) != basis.size()) throw std::invalid_argument("idempotent_split: basis is linearly dependent");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!solve(coord, detail::flatten(basis[i] * basis[j])))
        throw std::invalid_argument("idempotent_split: span not closed under multiplication (product " +
                                    std::to_string(i) + "*" + std::to_string(j) + ")");
  const Matrix id = Matrix::identity(n);
  if (!solve(coord, detail::flatten(id))) throw std::invalid_argument("idempotent_split: identity not in span");

  detail::Splitter sp{basis, std::mt19937_64(seed), {}, false};
  sp.run(id);
  res.local = !sp.any_split;
  res.idempotents = std::move(sp.found);
  for (auto& e : res.idempotents) res.coords.push_back(*solve(coord, detail::flatten(e)));
  return res;
}

}  // namespace wpl
