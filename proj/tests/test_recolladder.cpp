#include <gtest/gtest.h>

#include "wpl/recolladder.hpp"

using namespace wpl;
using p1::Summand;

namespace {

WeightData wd23() { return WeightData{{2, 3}, {Point::infinity(), Point::at(0)}}; }
WeightData wd22() { return WeightData{{2, 2}, {Point::infinity(), Point::at(0)}}; }
WeightData wd4() { return WeightData{{4}, {Point::infinity()}}; }

}  // namespace

TEST(Aq, RunsAndTypes) {
  EXPECT_EQ(build_Aq(WeightData{{2}, {Point::infinity()}}, {{1}}).type(), "A1");
  EXPECT_EQ(build_Aq(WeightData{{3}, {Point::infinity()}}, {{1, 2}}).type(), "A2");
  EXPECT_EQ(build_Aq(wd4(), {{0, 2}}).type(), "A1 x A1");
  EXPECT_EQ(build_Aq(wd23(), {{}, {}}).type(), "0");
  // positions p-1 and 0 are adjacent on the cycle
  auto a = build_Aq(WeightData{{3}, {Point::infinity()}}, {{0, 2}});
  ASSERT_EQ(a.comps.size(), 1u);
  EXPECT_EQ(a.comps[0].positions, (std::vector<int>{2, 0}));
  EXPECT_EQ(build_Aq(wd23(), {{1}, {1, 2}}).type(), "A1 x A2");
}

TEST(Aq, ModulesAndTensor) {
  auto wd = wd23();
  auto a = build_Aq(wd, {{}, {1, 2}});
  EXPECT_EQ(module_hom_basis(projective_module(a, 0, 0), simple_module(a, 0, 0)).size(), 1u);
  EXPECT_EQ(module_hom_basis(projective_module(a, 0, 0), simple_module(a, 0, 1)).size(), 0u);
  EXPECT_EQ(module_hom_basis(simple_module(a, 0, 1), injective_module(a, 0, 1)).size(), 1u);
  EXPECT_EQ(module_hom_basis(projective_module(a, 0, 1), projective_module(a, 0, 0)).size(), 1u);
  // i_* of simples are the simples at the run positions
  for (std::size_t k = 0; k < 2; ++k) {
    auto s = tensor_with_P(a, simple_module(a, 0, k));
    EXPECT_EQ(*s, *simple_object(wd, 2, 2, 3 - a.comps[0].positions[k]));
  }
  // the projective at the start of the run is the non-split extension
  auto p0 = tensor_with_P(a, projective_module(a, 0, 0));
  EXPECT_EQ(normalize(p0).parts.size(), 1u);
  EXPECT_TRUE(isomorphic(p0, tube_object(wd, 2, 1, 2, 2)));
  // i^! of i_* M recovers M
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = x; y < 2; ++y) {
      auto m = interval_module(a, 0, x, y);
      EXPECT_EQ(hom_from_P(a, tensor_with_P(a, m))[0].dims, m[0].dims);
      EXPECT_EQ(left_adj(a, tensor_with_P(a, m))[0].dims, m[0].dims);
    }
}

TEST(Recollement, VerifiesOnRequiredTuples) {
  auto wd = wd23();
  for (auto qq : std::vector<SeqTuple>{{{1}, {}}, {{}, {1}}, {{1}, {1, 2}}, {{0}, {2}}, {{}, {}}}) {
    auto rep = verify_recollement(assemble_recollement(wd, qq));
    for (auto& ax : rep.axioms) {
      EXPECT_TRUE(ax.pass) << rep.instance << " " << ax.axiom << ": " << ax.witness;
      EXPECT_GT(ax.checks, 0u) << rep.instance << " " << ax.axiom;
    }
    EXPECT_LT(rep.seconds, 180.0) << rep.instance;
  }
}

TEST(Recollement, WrapAroundRun) {
  auto rep = verify_recollement(assemble_recollement(WeightData{{3}, {Point::infinity()}}, {{0, 2}}));
  EXPECT_EQ(rep.left_type, "A2");
  for (auto& ax : rep.axioms) EXPECT_TRUE(ax.pass) << ax.axiom << ": " << ax.witness;
}

TEST(Recollement, DetectsMisindexedRightAdjoint) {
  auto d = assemble_recollement(wd23(), {{}, {1}});
  d.corrupt_jstar = true;
  auto rep = verify_recollement(d);
  EXPECT_FALSE(rep.all_pass());
  bool flagged = false;
  for (auto& ax : rep.axioms)
    if (ax.axiom == "canonical sequences" || ax.axiom == "adjunction j^* -| j_*") flagged = flagged || !ax.pass;
  EXPECT_TRUE(flagged);
}

TEST(Ladder, KernelSimpleSets) {
  auto wd = wd23();
  EXPECT_EQ(kernel_simple_set(wd, {{0}, {1}}, 0), (std::vector<std::pair<int, int>>{{1, 0}, {2, 1}}));
  EXPECT_EQ(kernel_simple_set(wd, {{0}, {1}}, 3), (std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}));
  EXPECT_EQ(kernel_simple_set(wd, {{0}, {1}}, -1), (std::vector<std::pair<int, int>>{{1, 1}, {2, 0}}));
  // agrees with the simples actually killed
  for (long n = -4; n <= 7; ++n) {
    EXPECT_EQ(kernel_simples_brute(wd, {{0}, {1}}, n), kernel_simple_set(wd, {{0}, {1}}, n)) << n;
    EXPECT_EQ(kernel_simples_brute(wd, {{1}, {}}, n), kernel_simple_set(wd, {{1}, {}}, n)) << n;
    for (SeqTuple qq : std::vector<SeqTuple>{{{0}, {0, 1}}, {{1}, {1, 2}}, {{0}, {0, 2}}})
      EXPECT_EQ(kernel_simples_brute(wd, qq, n), kernel_simple_set(wd, qq, n)) << seq_tuple_str(qq) << " " << n;
  }
}

TEST(Ladder, Periods) {
  auto r = ladder_period(wd23(), {{0}, {1}}, 12);
  EXPECT_EQ(r.lcm, 6);
  EXPECT_EQ(r.minimal_period, 6);
  EXPECT_TRUE(r.lcm_confirmed);
  EXPECT_FALSE(r.smaller_than_lcm);

  auto r2 = ladder_period(wd22(), {{0}, {0}}, 8);
  EXPECT_EQ(r2.lcm, 2);
  EXPECT_EQ(r2.minimal_period, 2);
  EXPECT_TRUE(r2.lcm_confirmed);

  auto r4 = ladder_period(wd4(), {{0, 2}}, 8);
  EXPECT_EQ(r4.lcm, 4);
  EXPECT_TRUE(r4.lcm_confirmed);
  EXPECT_EQ(r4.minimal_period, 2);
  EXPECT_TRUE(r4.smaller_than_lcm);

  EXPECT_THROW(ladder_period(wd23(), {{0}, {1}}, 5), std::invalid_argument);
}

TEST(Ladder, LcmAlwaysAPeriod) {
  // every valid tuple on a few weight vectors
  for (auto wd : {wd23(), wd22(), wd4(), WeightData{{2, 3, 4}, {Point::infinity(), Point::at(0), Point::at(1)}}}) {
    std::vector<std::vector<IndexSeq>> choices;
    for (int p : wd.weights) {
      std::vector<IndexSeq> c;
      for (int mask = 0; mask < (1 << p) - 1; ++mask) {
        IndexSeq q;
        for (int b = 0; b < p; ++b)
          if (mask & (1 << b)) q.push_back(b);
        c.push_back(q);
      }
      choices.push_back(c);
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      SeqTuple qq;
      for (std::size_t l = 0; l < idx.size(); ++l) qq.push_back(choices[l][idx[l]]);
      auto r = ladder_period(wd, qq, 2 * 12);
      EXPECT_TRUE(r.lcm_confirmed);
      ASSERT_TRUE(r.minimal_period.has_value());
      EXPECT_EQ(r.lcm % *r.minimal_period, 0);
      std::size_t l = 0;
      while (l < idx.size() && ++idx[l] == choices[l].size()) idx[l++] = 0;
      if (l == idx.size()) break;
    }
  }
}
