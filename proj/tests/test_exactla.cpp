#include "wpl/idempotent.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wpl;

namespace {

Matrix random_rank(std::size_t rows, std::size_t cols, std::size_t r, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<int> d(-4, 4);
  Matrix a(rows, r), b(r, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < r; ++j) a(i, j) = d(gen);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = d(gen);
  return a * b;
}

}  // namespace

TEST(KernelBasis, IdentityHasEmptyKernel) {
  EXPECT_TRUE(kernel_basis(Matrix::identity(2)).empty());
}

TEST(KernelBasis, RowOfOnes) {
  Matrix m(1, 2);
  m(0, 0) = 1;
  m(0, 1) = 1;
  auto k = kernel_basis(m);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (Vec{Scalar(-1), Scalar(1)}));
}

TEST(KernelBasis, RandomRankThreeRemultiply) {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    Matrix m = random_rank(5, 8, 3, seed);
    const std::size_t r = rank(m);
    auto k = kernel_basis(m);
    EXPECT_EQ(k.size(), 8 - r);
    for (auto& v : k) EXPECT_TRUE(is_zero(m.apply(v)));
    SpanBuilder span(8);
    for (auto& v : k) EXPECT_TRUE(span.add(v));
  }
}

TEST(KernelBasis, Deterministic) {
  Matrix m = random_rank(4, 6, 2, 7);
  EXPECT_EQ(kernel_basis(m), kernel_basis(m));
}

TEST(Solve, InconsistentAndConsistent) {
  Matrix m(2, 2);
  m(0, 0) = 1; m(0, 1) = 2; m(1, 0) = 2; m(1, 1) = 4;
  EXPECT_FALSE(solve(m, Vec{Scalar(1), Scalar(1)}).has_value());
  auto x = solve(m, Vec{Scalar(1), Scalar(2)});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(m.apply(*x), (Vec{Scalar(1), Scalar(2)}));
}

TEST(Inverse, RoundTrip) {
  Matrix m = random_rank(4, 4, 4, 3);
  auto inv = inverse(m);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(*inv * m, Matrix::identity(4));
}

TEST(Poly, SeriesInverse) {
  Poly a{Scalar(2), Scalar(3), Scalar(-1)};
  auto inv = series_inverse(a, 6);
  auto prod = mul_trunc(a, inv, 6);
  Poly one(6);
  one[0] = 1;
  EXPECT_EQ(prod, one);
}

TEST(Poly, TaylorShiftMatchesEvaluation) {
  Poly f{Scalar(1), Scalar(-2), Scalar(0), Scalar(5)};
  Poly g = taylor_shift(f, Scalar(3));
  for (int x = -3; x <= 3; ++x) EXPECT_EQ(poly_eval(g, Scalar(x)), poly_eval(f, Scalar(x + 3)));
}

TEST(Poly, RationalRoots) {
  // (t - 1/2)(t + 3) t (t^2 + 1)
  Poly f = poly_mul(poly_mul(Poly{Scalar(mpq_class(-1, 2)), Scalar(1)}, Poly{Scalar(3), Scalar(1)}),
                    poly_mul(Poly{Scalar(0), Scalar(1)}, Poly{Scalar(1), Scalar(0), Scalar(1)}));
  auto r = field_roots(f);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], Scalar(-3));
  EXPECT_EQ(r[1], Scalar(0));
  EXPECT_EQ(r[2], Scalar(mpq_class(1, 2)));
}

TEST(Poly, PrimeFieldRoots) {
  Scalar::set_prime(1000003);
  Poly f = poly_mul(poly_mul(Poly{Scalar(-5), Scalar(1)}, Poly{Scalar(-77), Scalar(1)}), Poly{Scalar(1), Scalar(0), Scalar(1)});
  auto r = field_roots(f);
  for (auto& x : r) EXPECT_TRUE(poly_eval(f, x).is_zero());
  // 1000003 = 3 mod 4 so t^2 + 1 has no roots
  EXPECT_EQ(r.size(), 2u);
  Scalar::set_prime(7);
  r = field_roots(Poly{Scalar(1), Scalar(0), Scalar(1)});
  EXPECT_TRUE(r.empty());
  r = field_roots(Poly{Scalar(-2), Scalar(0), Scalar(1)});
  EXPECT_EQ(r.size(), 2u);  // 3^2 = 4^2 = 2 mod 7
  Scalar::set_prime(0);
}

TEST(Poly, InterpolateAndDeterminant) {
  std::vector<Scalar> xs{0, 1, 2, 3}, ys;
  Poly f{Scalar(4), Scalar(-1), Scalar(0), Scalar(2)};
  for (auto& x : xs) ys.push_back(poly_eval(f, x));
  EXPECT_EQ(interpolate(xs, ys), f);
  Matrix m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = static_cast<int>((i * 5 + j * j * 3 + 1) % 7);
  // Laplace oracle
  auto d = m(0,0)*(m(1,1)*m(2,2)-m(1,2)*m(2,1)) - m(0,1)*(m(1,0)*m(2,2)-m(1,2)*m(2,0)) + m(0,2)*(m(1,0)*m(2,1)-m(1,1)*m(2,0));
  EXPECT_EQ(determinant(m), d);
}

namespace {

Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(n, n);
  m(i, j) = 1;
  return m;
}

void expect_complete_orthogonal(const SplitResult& r, std::size_t n) {
  Matrix sum(n, n);
  for (std::size_t i = 0; i < r.idempotents.size(); ++i) {
    const Matrix& e = r.idempotents[i];
    EXPECT_EQ(e * e, e);
    for (std::size_t j = 0; j < r.idempotents.size(); ++j)
      if (i != j) EXPECT_TRUE((e * r.idempotents[j]).is_zero());
    sum = sum + e;
  }
  EXPECT_EQ(sum, Matrix::identity(n));
}

}  // namespace

TEST(IdempotentSplit, ScalarsAreLocal) {
  auto r = idempotent_split({Matrix::identity(3)});
  EXPECT_TRUE(r.local);
  ASSERT_EQ(r.idempotents.size(), 1u);
  EXPECT_EQ(r.idempotents[0], Matrix::identity(3));
}

TEST(IdempotentSplit, DiagonalAlgebra) {
  auto r = idempotent_split({unit(2, 0, 0) + unit(2, 1, 1), unit(2, 0, 0)});
  EXPECT_FALSE(r.local);
  ASSERT_EQ(r.idempotents.size(), 2u);
  expect_complete_orthogonal(r, 2);
  for (auto& e : r.idempotents) EXPECT_EQ(rank(e), 1u);
}

TEST(IdempotentSplit, FullMatrixAlgebra) {
  // M_2(k) presented through a basis with no idempotent among its members
  std::vector<Matrix> b{Matrix::identity(2), unit(2, 0, 1), unit(2, 1, 0), unit(2, 0, 1) + unit(2, 1, 0) + unit(2, 0, 0)};
  auto r = idempotent_split(b);
  ASSERT_EQ(r.idempotents.size(), 2u);
  expect_complete_orthogonal(r, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    Matrix rebuilt(2, 2);
    for (std::size_t k = 0; k < b.size(); ++k) rebuilt = rebuilt + r.coords[i][k] * b[k];
    EXPECT_EQ(rebuilt, r.idempotents[i]);
  }
}

TEST(IdempotentSplit, LocalWithRadical) {
  // k[t]/t^3 acting on itself
  Matrix t = unit(3, 1, 0) + unit(3, 2, 1);
  auto r = idempotent_split({Matrix::identity(3), t, t * t});
  EXPECT_TRUE(r.local);
  EXPECT_EQ(r.idempotents.size(), 1u);
}

TEST(IdempotentSplit, PrimeFieldFullMatrix) {
  Scalar::set_prime(5);
  std::vector<Matrix> b{Matrix::identity(2), unit(2, 0, 1), unit(2, 1, 0), unit(2, 0, 0)};
  auto r = idempotent_split(b);
  expect_complete_orthogonal(r, 2);
  EXPECT_EQ(r.idempotents.size(), 2u);
  Scalar::set_prime(0);
}

TEST(IdempotentSplit, RejectsNonClosedBasis) {
  EXPECT_THROW(idempotent_split({Matrix::identity(3), unit(3, 0, 1), unit(3, 1, 2)}), std::invalid_argument);
}

TEST(IdempotentSplit, Deterministic) {
  std::vector<Matrix> b{Matrix::identity(3), unit(3, 0, 0), unit(3, 1, 2), unit(3, 2, 1), unit(3, 1, 1)};
  auto r1 = idempotent_split(b), r2 = idempotent_split(b);
  EXPECT_EQ(r1.coords, r2.coords);
}

TEST(Scalar, AgreesWithGmpAcrossOverflow) {
  std::mt19937_64 gen(3);
  auto pick = [&]() -> mpq_class {
    const long mags[] = {1, 7, 1L << 31, (1L << 62) + 11, LONG_MAX};
    mpq_class q(static_cast<long>(gen() % static_cast<unsigned long>(mags[gen() % 5])) - static_cast<long>(gen() % 3),
                static_cast<unsigned long>(1 + gen() % static_cast<unsigned long>(mags[gen() % 5])));
    q.canonicalize();
    return q;
  };
  for (int k = 0; k < 2000; ++k) {
    mpq_class a = pick(), b = pick();
    Scalar x(a), y(b);
    EXPECT_EQ((x + y).value(), mpq_class(a + b));
    EXPECT_EQ((x - y).value(), mpq_class(a - b));
    EXPECT_EQ((x * y).value(), mpq_class(a * b));
    if (b != 0) EXPECT_EQ((x / y).value(), mpq_class(a / b));
    EXPECT_EQ(x < y, a < b);
    EXPECT_EQ(x == y, a == b);
    EXPECT_EQ((x * y * y).str(), mpq_class(a * b * b).get_str());
    // values that shrink back are equal to their small representation
    Scalar z = x * y;
    if (b != 0) EXPECT_EQ(z / y, x);
  }
  EXPECT_EQ(Scalar(LONG_MIN).value(), mpq_class(mpz_class(std::to_string(LONG_MIN))));
  EXPECT_EQ(-Scalar(LONG_MIN) - Scalar(1), Scalar(LONG_MAX));
}

TEST(Scalar, PrimeFieldArithmetic) {
  Scalar::set_prime(2147483647);
  Scalar a(2147483646), b(-3);
  EXPECT_EQ(a + Scalar(1), Scalar(0));
  EXPECT_EQ(a * a, Scalar(1));
  EXPECT_EQ(b * b.inverse(), Scalar(1));
  EXPECT_EQ(Scalar::parse("1/2") * Scalar(2), Scalar(1));
  Scalar::set_prime(0);
}
