#include <gtest/gtest.h>

#include "wpl/corpus.hpp"
#include "wpl/cyclecat.hpp"

#include <random>

using namespace wpl;
using p1::Summand;

namespace {

WeightData wd23() { return WeightData{{2, 3}, {Point::infinity(), Point::at(0)}}; }

ObjPtr base(std::vector<Summand> s) { return make_base(std::move(s)); }

/// shift^s(iota ... iota O(n)) at the given level.
ObjPtr line(const WeightData& wd, int level, int n, int s = 0) {
  ObjPtr l = lift(wd, base({Summand::O(n)}), level);
  return level > 0 && s ? sigma_bar(l, s) : l;
}

/// All commuting-square defects of a raw coefficient tuple, at every level.
void defects(const Morphism& u, Vec& out) {
  if (u.comps.empty()) return;
  const Object& e = *u.src;
  const Object& f = *u.dst;
  const std::size_t p = u.comps.size();
  for (std::size_t j = 0; j < p; ++j) {
    Morphism next = j + 1 < p ? u.comps[j + 1] : twist(e.pt, u.comps[0]);
    Vec a = flatten(compose(next, e.arrows[j]));
    Vec b = flatten(compose(f.arrows[j], u.comps[j]));
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(a[k] - b[k]);
    defects(u.comps[j], out);
  }
}

/// Hom dimension from the raw coordinate space cut out by all squares at once.
std::size_t brute_hom_dim(const ObjPtr& e, const ObjPtr& f) {
  const std::size_t n = coord_dim(*e, *f);
  if (n == 0) return 0;
  std::vector<Vec> cols;
  std::size_t rows = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Vec v(n);
    v[k] = 1;
    Vec d;
    defects(unflatten(e, f, v), d);
    rows = d.size();
    cols.push_back(std::move(d));
  }
  if (rows == 0) return n;
  return n - rank(Matrix::from_columns(cols, rows));
}

Morphism random_morphism(const ObjPtr& e, const ObjPtr& f, std::mt19937& g) {
  auto b = hom_basis(e, f);
  std::uniform_int_distribution<int> c(-2, 2);
  Vec v(b.size());
  for (auto& x : v) x = c(g);
  return combine(e, f, b, v);
}

std::vector<ObjPtr> small_corpus(const WeightData& wd, int level) {
  std::vector<ObjPtr> c;
  const int p = level ? wd.weights[level - 1] : 1;
  for (int n = -1; n <= 1; ++n)
    for (int s = 0; s < p; ++s) c.push_back(line(wd, level, n, s));
  for (int i = 1; i <= wd.levels(); ++i)
    for (int j = 0; j < wd.weights[i - 1]; ++j) c.push_back(simple_object(wd, level, i, j));
  c.push_back(lift(wd, base({Summand::T(Point::at(1), 1)}), level));
  c.push_back(lift(wd, base({Summand::T(Point::infinity(), 2)}), level));
  c.push_back(direct_sum({c[0], c[c.size() - 3]}).obj);
  c.push_back(direct_sum({c[1], c[2]}).obj);
  return c;
}

}  // namespace

TEST(Cycle, EndOfLiftedStructureSheafIsOneDimensional) {
  auto wd = wd23();
  for (int level = 1; level <= 2; ++level) {
    auto o = line(wd, level, 0);
    EXPECT_EQ(hom_dim(o, o), 1u);
    EXPECT_FALSE(periodicity_failure(*o));
  }
}

TEST(Cycle, ShiftPowerIsTwist) {
  auto wd = wd23();
  for (int level = 1; level <= 2; ++level) {
    const int p = wd.weights[level - 1];
    for (int n = -1; n <= 1; ++n) {
      auto l = line(wd, level - 1, n);
      auto lhs = sigma_bar(iota(l, wd.points[level - 1], p), p);
      auto rhs = iota(twist(wd.points[level - 1], l), wd.points[level - 1], p);
      EXPECT_EQ(*lhs, *rhs);
      EXPECT_EQ(*sigma_bar(lhs, -p), *iota(l, wd.points[level - 1], p));
    }
  }
}

TEST(Cycle, HomMatchesBruteForceSquares) {
  auto wd = wd23();
  for (int level = 1; level <= 2; ++level) {
    auto c = small_corpus(wd, level);
    for (std::size_t a = 0; a < c.size(); a += 2)
      for (std::size_t b = 0; b < c.size(); b += 3) {
        auto basis = hom_basis(c[a], c[b]);
        EXPECT_EQ(basis.size(), brute_hom_dim(c[a], c[b])) << to_string(*c[a]) << " -> " << to_string(*c[b]);
        for (auto& m : basis) {
          Vec d;
          defects(m, d);
          EXPECT_TRUE(is_zero(d));
        }
      }
  }
}

TEST(Cycle, ShiftAndTwistArePeriodicAndFunctorial) {
  auto wd = wd23();
  std::mt19937 g(3);
  auto c = small_corpus(wd, 2);
  for (std::size_t a = 0; a < c.size(); a += 3) {
    auto e = c[a];
    for (int k : {-2, -1, 1, 3}) EXPECT_FALSE(periodicity_failure(*sigma_bar(e, k)));
    EXPECT_FALSE(periodicity_failure(*twist(Point::at(1), e)));
    EXPECT_FALSE(periodicity_failure(*tau(e)));
    EXPECT_EQ(*tau_inverse(tau(e)), *e);
    EXPECT_FALSE(square_failure(sigma_bar_map(e)));
    EXPECT_FALSE(square_failure(twist_map(Point::at(0), e)));
    auto f = c[(a + 1) % c.size()];
    auto u = random_morphism(e, f, g);
    EXPECT_FALSE(square_failure(sigma_bar(u, 2)));
    EXPECT_FALSE(square_failure(tau(u)));
    EXPECT_EQ(hom_dim(e, f), hom_dim(tau(e), tau(f)));
  }
}

TEST(Cycle, TranslationOnSimples) {
  auto wd = wd23();
  const int level = 2;
  for (int i = 1; i <= 2; ++i) {
    const int p = wd.weights[i - 1];
    for (int j = 0; j < p; ++j) {
      auto s = simple_object(wd, level, i, j);
      auto s1 = simple_object(wd, level, i, j + 1);
      EXPECT_TRUE(isomorphic(tau_inverse(s), s1)) << i << " " << j;
      EXPECT_TRUE(isomorphic(tau(s1), s));
      EXPECT_EQ(ext1_dim(s1, s), 1u);
      ObjPtr t = s;
      for (int k = 1; k <= p; ++k) {
        t = tau(t);
        EXPECT_EQ(isomorphic(t, s), k == p);
      }
    }
  }
  auto y = simple_at(wd, level, Point::at(1), 0);
  EXPECT_TRUE(isomorphic(tau(y), y));
}

TEST(Cycle, SimplesAreDistinct) {
  auto wd = wd23();
  for (int i = 1; i <= 2; ++i) {
    const int p = wd.weights[i - 1];
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b)
        EXPECT_EQ(hom_dim(simple_object(wd, 2, i, a), simple_object(wd, 2, i, b)), a == b ? 1u : 0u);
  }
}

TEST(Cycle, LineBundlesAgainstSimples) {
  auto wd = wd23();
  const int p = 3;
  for (int n = -1; n <= 1; ++n)
    for (int i = 0; i < p; ++i) {
      auto l = line(wd, 2, n, i);
      for (int k = 0; k < p; ++k) {
        auto s = simple_object(wd, 2, 2, k);
        EXPECT_EQ(hom_dim(l, s) != 0, k == i) << n << " " << i << " " << k;
        EXPECT_EQ(ext1_dim(s, l) != 0, positive_mod(k, p) == positive_mod(i + 1, p));
      }
    }
}

TEST(Cycle, LineBundleForm) {
  auto wd = wd23();
  for (int n = -1; n <= 1; ++n)
    for (int i = 0; i < 3; ++i) {
      auto f = line_bundle_form(line(wd, 2, n, i));
      ASSERT_TRUE(f);
      EXPECT_EQ(f->shift, i);
      EXPECT_EQ(rank(*f->lower), 1);
    }
  EXPECT_FALSE(line_bundle_form(simple_object(wd, 2, 2, 1)));
  EXPECT_FALSE(line_bundle_form(direct_sum({line(wd, 2, 0), line(wd, 2, 1)}).obj));
}

TEST(Cycle, KernelAndCokernelUniversality) {
  auto wd = wd23();
  std::mt19937 g(11);
  auto c = small_corpus(wd, 2);
  std::vector<ObjPtr> probes{line(wd, 2, -2), line(wd, 2, 0, 1), line(wd, 2, 2, 2), simple_object(wd, 2, 1, 0),
                             simple_object(wd, 2, 2, 2)};
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    auto e = c[g() % c.size()], f = c[g() % c.size()];
    auto u = random_morphism(e, f, g);
    KernelResult k, q;
    try {
      k = kernel(u);
      q = cokernel(u);
    } catch (const std::runtime_error&) {
      continue;
    }
    ++checked;
    EXPECT_FALSE(periodicity_failure(*k.obj));
    EXPECT_FALSE(periodicity_failure(*q.obj));
    EXPECT_TRUE(is_zero(compose(u, k.map)));
    EXPECT_TRUE(is_zero(compose(q.map, u)));
    for (auto& t : probes) {
      auto he = hom_basis(t, e);
      std::size_t killed = 0;
      if (!he.empty()) {
        std::vector<Vec> cols;
        for (auto& h : he) cols.push_back(flatten(compose(u, h)));
        killed = he.size() - rank(Matrix::from_columns(cols, coord_dim(*t, *f)));
      }
      EXPECT_EQ(hom_dim(t, k.obj), killed);
      auto hf = hom_basis(f, t);
      std::size_t co = 0;
      if (!hf.empty()) {
        std::vector<Vec> cols;
        for (auto& h : hf) cols.push_back(flatten(compose(h, u)));
        co = hf.size() - rank(Matrix::from_columns(cols, coord_dim(*e, *t)));
      }
      EXPECT_EQ(hom_dim(q.obj, t), co);
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Cycle, DecompositionAndIsomorphism) {
  auto wd = wd23();
  auto a = line(wd, 2, 0, 1), b = simple_object(wd, 2, 2, 0), d = line(wd, 2, 1);
  auto ab = direct_sum({a, b, d}).obj;
  auto ba = direct_sum({d, b, a}).obj;
  EXPECT_TRUE(isomorphic(ab, ba));
  EXPECT_FALSE(isomorphic(ab, direct_sum({a, b, a}).obj));
  auto s = normalize(ab);
  ASSERT_EQ(s.parts.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(is_iso(compose(s.proj[i], s.inj[i])));
    EXPECT_FALSE(square_failure(s.inj[i]));
  }
  EXPECT_TRUE(normalize(a).local);
  auto id = identity(ab);
  Morphism sum = zero_morphism(ab, ab);
  for (std::size_t i = 0; i < 3; ++i) sum = add(sum, compose(s.inj[i], s.proj[i]));
  EXPECT_TRUE(same_data(sum, id));
}

TEST(Cycle, PeriodicityViolationReportsIndex) {
  auto wd = wd23();
  auto l = base({Summand::O(0)});
  std::vector<ObjPtr> comps{l, l};
  std::vector<Morphism> arrows{identity(l), identity(l)};
  arrows[1].dst = twist(Point::infinity(), l);
  arrows[1].base = p1::twist_map(Point::infinity(), l->base);
  arrows[1].base = p1::scale(arrows[1].base, Scalar(2));
  try {
    make_cycle(Point::infinity(), comps, arrows);
    FAIL() << "accepted a non-periodic cycle";
  } catch (const CycleError& e) {
    EXPECT_EQ(e.index, 0);
  }
}

TEST(Cycle, ZeroObjectRendersAsZero) {
  auto wd = wd23();
  EXPECT_EQ(to_string(*zero_object(wd, 2)), "0");
  EXPECT_EQ(to_string(*line(wd, 1, 0)), "cyc[O(0), O(0); [1], [Y]]");
}

TEST(Cycle, TowerAndStructuralFacts) {
  auto wd = wd23();
  auto t = build_tower(wd);
  EXPECT_EQ(t.top(), 2);
  EXPECT_EQ(t.point(2), Point::at(0));
  EXPECT_EQ(t.level_of(Point::infinity()), 1);
  EXPECT_EQ(t.level_of(Point::at(1)), 0);

  for (auto& e : small_corpus(wd, 1)) {
    auto k = kernel(identity(e));
    EXPECT_TRUE(is_zero_object(*k.obj)) << to_string(*e);
    EXPECT_TRUE(is_zero_object(*cokernel(identity(e)).obj)) << to_string(*e);
    if (is_vector_bundle(*e)) EXPECT_EQ(rank(*iota(e, Point::at(0), 3)), rank(*e)) << to_string(*e);
  }

  // the length-two object of the tube is a non-split extension of its simples
  auto m = tube_object(wd, 2, 0, 2, 2);
  auto parts = normalize(m);
  EXPECT_EQ(parts.parts.size(), 1u);
  EXPECT_TRUE(parts.local);
  auto s0 = tube_object(wd, 2, 0, 1, 2), s1 = tube_object(wd, 2, 1, 1, 2);
  EXPECT_FALSE(isomorphic(m, direct_sum({s0, s1}).obj));
  EXPECT_EQ(ext1_dim(s1, s0) + ext1_dim(s0, s1), 1u);
}
