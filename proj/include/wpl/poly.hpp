#pragma once

// Univariate polynomials, truncated power series and binary forms.
// Coefficients are stored lowest degree first, except for binary forms where
// entry k is the coefficient of X^(d-k) Y^k.

#include "wpl/matrix.hpp"

#include <map>
#include <set>

namespace wpl {

using Poly = Vec;

inline void trim(Poly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}
inline Poly trimmed(Poly f) { trim(f); return f; }
inline int degree(const Poly& f) {
  for (std::size_t i = f.size(); i-- > 0;)
    if (!f[i].is_zero()) return static_cast<int>(i);
  return -1;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}
inline Poly poly_sub(const Poly& a, const Poly& b) {
  Poly c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  return c;
}
inline Poly poly_scale(Poly a, const Scalar& s) {
  for (auto& x : a) x *= s;
  return a;
}
inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
  }
  return c;
}
/// Product modulo t^n, always of length n.
inline Poly mul_trunc(const Poly& a, const Poly& b, std::size_t n) {
  Poly c(n);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j)
      if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
  }
  return c;
}
inline Poly truncate(Poly a, std::size_t n) {
  a.resize(n);
  return a;
}
/// Inverse of a unit power series modulo t^n.
inline Poly series_inverse(const Poly& a, std::size_t n) {
  if (a.empty() || a[0].is_zero()) throw std::domain_error("series is not a unit");
  Poly inv(n);
  if (n == 0) return inv;
  const Scalar c0 = a[0].inverse();
  inv[0] = c0;
  for (std::size_t k = 1; k < n; ++k) {
    Scalar s;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j)
      if (!a[j].is_zero()) s += a[j] * inv[k - j];
    inv[k] = -s * c0;
  }
  return inv;
}
/// f(t + mu).
inline Poly taylor_shift(const Poly& f, const Scalar& mu) {
  Poly r(f.size());
  // Horner with (t + mu)
  for (std::size_t i = f.size(); i-- > 0;) {
    Poly next(r.size());
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
      next[k + 1] += r[k];
      next[k] += r[k] * mu;
    }
    if (!r.empty()) next[r.size() - 1] += r.back() * mu;
    next[0] += f[i];
    r = std::move(next);
  }
  return r;
}
inline Scalar poly_eval(const Poly& f, const Scalar& x) {
  Scalar r;
  for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

/// Quotient and remainder; b must be nonzero.
inline std::pair<Poly, Poly> poly_divmod(Poly a, Poly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  const Scalar lead_inv = b.back().inverse();
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Scalar c = a.back() * lead_inv;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    trim(a);
  }
  return {q, a};
}
inline Poly poly_monic(Poly f) {
  trim(f);
  if (f.empty()) return f;
  return poly_scale(f, f.back().inverse());
}
inline Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}
/// Returns (g, u, v) with u a + v b = g monic.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(Poly a, Poly b) {
  Poly u0{1}, u1{}, v0{}, v1{1};
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto [q, r] = poly_divmod(a, b);
    a = std::move(b);
    b = std::move(r);
    auto u2 = trimmed(poly_sub(u0, poly_mul(q, u1)));
    auto v2 = trimmed(poly_sub(v0, poly_mul(q, v1)));
    u0 = std::move(u1); u1 = std::move(u2);
    v0 = std::move(v1); v1 = std::move(v2);
  }
  if (a.empty()) return {a, u0, v0};
  const Scalar s = a.back().inverse();
  return {poly_scale(a, s), trimmed(poly_scale(u0, s)), trimmed(poly_scale(v0, s))};
}
inline Poly poly_powmod(Poly base, mpz_class e, const Poly& m) {
  Poly result{1};
  base = poly_divmod(base, m).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = poly_divmod(poly_mul(result, base), m).second;
    base = poly_divmod(poly_mul(base, base), m).second;
    e >>= 1;
  }
  return result;
}

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, int>> fac;
  for (mpz_class d = 2; d * d <= n && d < 2000000; ++d) {
    int e = 0;
    while (n % d == 0) { n /= d; ++e; }
    if (e) fac.emplace_back(d, e);
  }
  if (n > 1) fac.emplace_back(n, 1);
  std::vector<mpz_class> out{1};
  for (auto& [p, e] : fac) {
    const std::size_t sz = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

inline std::vector<Scalar> rational_roots(Poly f) {
  trim(f);
  std::vector<Scalar> roots;
  if (degree(f) <= 0) return roots;
  std::size_t low = 0;
  while (f[low].is_zero()) ++low;
  if (low > 0) {
    roots.push_back(Scalar(0));
    f.erase(f.begin(), f.begin() + static_cast<long>(low));
  }
  if (degree(f) <= 0) return roots;
  mpz_class lcm_den = 1;
  for (auto& c : f) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.value().get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (auto& c : f) ints.push_back(mpz_class(c.value() * lcm_den));
  const auto ps = divisors(ints.front());
  const auto qs = divisors(ints.back());
  std::set<mpq_class> seen;
  for (auto& p : ps)
    for (auto& q : qs)
      for (int sign : {1, -1}) {
        mpq_class cand(sign * p, q);
        cand.canonicalize();
        if (!seen.insert(cand).second) continue;
        if (poly_eval(f, Scalar(cand)).is_zero()) roots.push_back(Scalar(cand));
      }
  return roots;
}

inline void split_roots_mod_p(const Poly& g, std::vector<Scalar>& out, std::uint32_t p, unsigned seed) {
  const int d = degree(g);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(-g[0] / g[1]);
    return;
  }
  for (unsigned a = seed;; ++a) {
    Poly base{Scalar(static_cast<long>(a % p)), Scalar(1)};
    Poly h = poly_powmod(base, mpz_class((p - 1) / 2), g);
    h = poly_sub(h, Poly{1});
    Poly c = poly_gcd(g, h);
    const int dc = degree(c);
    if (dc > 0 && dc < d) {
      split_roots_mod_p(c, out, p, a + 1);
      split_roots_mod_p(poly_divmod(g, c).first, out, p, a + 1);
      return;
    }
  }
}

}  // namespace detail

/// Distinct roots in the base field, sorted by the canonical scalar order.
inline std::vector<Scalar> field_roots(const Poly& f) {
  std::vector<Scalar> roots;
  if (degree(f) <= 0) return roots;
  if (Scalar::rational_mode()) {
    roots = detail::rational_roots(f);
  } else {
    const std::uint32_t p = Scalar::prime();
    if (p < 4096) {
      for (std::uint32_t x = 0; x < p; ++x)
        if (poly_eval(f, Scalar(static_cast<long>(x))).is_zero()) roots.push_back(Scalar(static_cast<long>(x)));
    } else {
      Poly g = poly_monic(f);
      Poly xp = poly_powmod(Poly{0, 1}, mpz_class(p), g);
      Poly lin = poly_gcd(g, poly_sub(xp, Poly{0, 1}));
      if (p == 2) {
        detail::split_roots_mod_p(lin, roots, p, 0);
      } else {
        if (!poly_eval(lin, Scalar(0)).is_zero()) {
          detail::split_roots_mod_p(lin, roots, p, 1);
        } else {
          roots.push_back(Scalar(0));
          detail::split_roots_mod_p(poly_divmod(lin, Poly{0, 1}).first, roots, p, 1);
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

/// Polynomial of degree < xs.size() through the given values (Newton form).
inline Poly interpolate(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) {
  const std::size_t n = xs.size();
  std::vector<Scalar> coef = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  Poly result{coef[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    result = poly_mul(result, Poly{-xs[k], Scalar(1)});
    result = poly_add(result, Poly{coef[k]});
  }
  trim(result);
  return result;
}

/// Determinant by Gaussian elimination.
inline Scalar determinant(Matrix m) {
  const std::size_t n = m.rows();
  Scalar det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c).is_zero()) ++piv;
    if (piv == n) return Scalar(0);
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    const Scalar inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      const Scalar f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// ---- binary forms ---------------------------------------------------------

/// Product of binary forms (coefficients X^d .. Y^d); a plain convolution.
inline Poly form_mul(const Poly& f, const Poly& g) { return poly_mul(f, g); }

}  // namespace wpl
