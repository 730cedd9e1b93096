#pragma once

// Exact scalars: rationals by default, or a prime field F_p selected once per
// session with Scalar::set_prime().
//
// Rationals whose numerator and denominator fit in 63 bits are stored inline;
// larger values fall back to GMP. F_p elements are always inline.

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wpl {

class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : n_(v) { init_small(); }  // NOLINT(implicit)
  Scalar(int v) : n_(v) { init_small(); }   // NOLINT(implicit)
  explicit Scalar(const mpq_class& q) { assign(q); }

  Scalar(const Scalar& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Scalar(Scalar&&) noexcept = default;
  Scalar& operator=(const Scalar& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Scalar& operator=(Scalar&&) noexcept = default;

  /// 0 selects the rationals; otherwise a prime below 2^31.
  static void set_prime(std::uint32_t p) {
    if (p != 0 && (p < 2 || p >= (1u << 31) || !is_prime(p)))
      throw std::invalid_argument("field characteristic must be 0 or a prime below 2^31");
    prime_ref() = p;
  }
  static std::uint32_t prime() { return prime_ref(); }
  static bool rational_mode() { return prime_ref() == 0; }

  /// Accepts "a", "-a", "a/b".
  static Scalar parse(std::string_view s) {
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0)
      throw std::invalid_argument("bad scalar literal '" + std::string(s) + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return Scalar(q);
  }

  bool is_zero() const { return !big_ && n_ == 0; }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  mpq_class value() const {
    if (big_) return *big_;
    mpq_class q(static_cast<long>(n_), static_cast<unsigned long>(d_));
    q.canonicalize();
    return q;
  }

  Scalar& operator+=(const Scalar& o) {
    if (const std::uint32_t p = prime_ref()) {
      n_ = (n_ + o.n_) % p;
      return *this;
    }
    if (!big_ && !o.big_) {
      if (d_ == 1 && o.d_ == 1) {
        std::int64_t s;
        if (!__builtin_add_overflow(n_, o.n_, &s) && s != INT64_MIN) {
          n_ = s;
          return *this;
        }
      }
      set_fraction(static_cast<i128>(n_) * o.d_ + static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
      return *this;
    }
    assign(value() + o.value());
    return *this;
  }
  Scalar& operator-=(const Scalar& o) { return *this += -o; }
  Scalar& operator*=(const Scalar& o) {
    if (const std::uint32_t p = prime_ref()) {
      n_ = static_cast<std::int64_t>(static_cast<i128>(n_) * o.n_ % p);
      return *this;
    }
    if (!big_ && !o.big_) {
      if (d_ == 1 && o.d_ == 1) {
        std::int64_t m;
        if (!__builtin_mul_overflow(n_, o.n_, &m) && m != INT64_MIN) {
          n_ = m;
          return *this;
        }
      }
      set_fraction(static_cast<i128>(n_) * o.n_, static_cast<i128>(d_) * o.d_);
      return *this;
    }
    assign(value() * o.value());
    return *this;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const {
    Scalar r;
    if (const std::uint32_t p = prime_ref()) {
      r.n_ = n_ == 0 ? 0 : p - n_;
    } else if (big_) {
      r.assign(-*big_);
    } else {
      r.n_ = -n_;
      r.d_ = d_;
    }
    return r;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.big_ || b.big_) return a.big_ && b.big_ && *a.big_ == *b.big_;
    return a.n_ == b.n_ && a.d_ == b.d_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  /// Total order used only for canonical sorting (not field order in F_p).
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.big_ || b.big_) return a.value() < b.value();
    return static_cast<i128>(a.n_) * b.d_ < static_cast<i128>(b.n_) * a.d_;
  }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero scalar");
    Scalar r;
    if (const std::uint32_t p = prime_ref()) {
      r.n_ = inv_mod(n_, p);
    } else if (big_) {
      r.assign(1 / *big_);
    } else {
      r.n_ = n_ < 0 ? -d_ : d_;
      r.d_ = n_ < 0 ? -n_ : n_;
    }
    return r;
  }

  std::string str() const {
    if (big_) return big_->get_str();
    return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
  }

  std::size_t hash() const { return std::hash<std::string>{}(str()); }

 private:
  using i128 = __int128;

  static std::uint32_t& prime_ref() {
    static std::uint32_t p = 0;
    return p;
  }
  static bool is_prime(std::uint32_t n) {
    for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }
  static std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
      const std::int64_t q = r / nr;
      t -= q * nt;
      std::swap(t, nt);
      r -= q * nr;
      std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("element not invertible mod p");
    return t < 0 ? t + p : t;
  }
  static unsigned __int128 gcd(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static bool fits(i128 v) { return v > INT64_MIN && v <= INT64_MAX; }

  void init_small() {
    if (const std::uint32_t p = prime_ref()) {
      n_ %= static_cast<std::int64_t>(p);
      if (n_ < 0) n_ += p;
    } else if (n_ == INT64_MIN) {
      assign(mpq_class(mpz_class(std::to_string(n_))));
    }
  }

  // n / d in lowest terms, d != 0; rational mode only.
  void set_fraction(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const auto g = gcd(static_cast<unsigned __int128>(n < 0 ? -n : n), static_cast<unsigned __int128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    if (n == 0) d = 1;
    if (fits(n) && fits(d)) {
      n_ = static_cast<std::int64_t>(n);
      d_ = static_cast<std::int64_t>(d);
      big_.reset();
      return;
    }
    auto to_mpz = [](i128 v) {
      const bool neg = v < 0;
      auto u = static_cast<unsigned __int128>(neg ? -v : v);
      mpz_class z(static_cast<unsigned long>(u >> 64));
      z <<= 64;
      z += mpz_class(static_cast<unsigned long>(u & ~static_cast<std::uint64_t>(0)));
      return neg ? mpz_class(-z) : z;
    };
    big_ = std::make_unique<mpq_class>(to_mpz(n), to_mpz(d));
  }

  void assign(const mpq_class& q) {
    if (const std::uint32_t p = prime_ref()) {
      mpz_class m(p), num = q.get_num(), den = q.get_den();
      if (den != 1) {
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
          throw std::domain_error("denominator vanishes mod p");
        num *= inv;
      }
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), m.get_mpz_t());
      n_ = static_cast<std::int64_t>(r.get_si());
      d_ = 1;
      big_.reset();
      return;
    }
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() && q.get_num() != LONG_MIN) {
      n_ = q.get_num().get_si();
      d_ = q.get_den().get_si();
      big_.reset();
    } else {
      big_ = std::make_unique<mpq_class>(q);
    }
  }

  std::int64_t n_ = 0, d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace wpl
