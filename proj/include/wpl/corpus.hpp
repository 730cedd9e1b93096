#pragma once

// Seeded test objects for a tower level: line bundles under all shifts,
// simples, short torsion, tube objects of length two and middle terms of
// sampled extensions (pushouts of kernel sequences along random maps).

#include "wpl/cyclecat.hpp"

#include <random>
#include <set>

namespace wpl {

class Tower {
 public:
  explicit Tower(WeightData wd) : wd_(std::move(wd)) { wd_.validate(); }
  const WeightData& weights() const { return wd_; }
  int top() const { return wd_.levels(); }
  int weight(int level) const { return wd_.weights.at(static_cast<std::size_t>(level - 1)); }
  const Point& point(int level) const { return wd_.points.at(static_cast<std::size_t>(level - 1)); }
  /// Level of the point y in the tower, 0 if y carries no weight.
  int level_of(const Point& y) const {
    for (int l = 1; l <= top(); ++l)
      if (point(l) == y) return l;
    return 0;
  }

 private:
  WeightData wd_;
};

inline Tower build_tower(const WeightData& wd) { return Tower(wd); }

/// Direct sum of d copies of s; d = 0 gives the zero object shaped like s.
inline SumResult power(const ObjPtr& s, std::size_t d) {
  if (d == 0) return {zero_like(s), {}, {}};
  return direct_sum(std::vector<ObjPtr>(d, s));
}

/// The morphism s^a -> s^b given by a b x a scalar matrix.
inline Morphism matrix_morphism(const Matrix& m, const SumResult& src, const SumResult& dst) {
  Morphism acc = zero_morphism(src.obj, dst.obj);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) acc = add(acc, scale(compose(dst.inj[i], src.proj[j]), m(i, j)));
  return acc;
}

/// Cycle at point x of length p with s^{dims[k]} at positions[k] (consecutive
/// modulo p) joined by the given matrices, zero elsewhere.
inline ObjPtr run_cycle(const Point& x, int p, const ObjPtr& s, const std::vector<int>& positions,
                        const std::vector<std::size_t>& dims, const std::vector<Matrix>& mats) {
  std::vector<ObjPtr> comps(static_cast<std::size_t>(p), zero_like(s));
  std::vector<SumResult> pw;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    pw.push_back(power(s, dims[k]));
    comps[static_cast<std::size_t>(positions[k])] = pw.back().obj;
  }
  ObjPtr last = twist(x, comps[0]);
  std::vector<Morphism> arrows;
  for (int j = 0; j < p; ++j) {
    ObjPtr dst = j + 1 < p ? comps[static_cast<std::size_t>(j + 1)] : last;
    Morphism a = zero_morphism(comps[static_cast<std::size_t>(j)], dst);
    for (std::size_t k = 0; k + 1 < positions.size(); ++k)
      if (positions[k] == j) a = rebind(matrix_morphism(mats[k], pw[k], pw[k + 1]), comps[static_cast<std::size_t>(j)], dst);
    arrows.push_back(std::move(a));
  }
  return make_cycle(x, std::move(comps), std::move(arrows), false);
}

/// Uniserial object of the tube at the point of `level`: simples at positions
/// start, start+1, ..., start+len-1 (len <= p), lifted to `to`.
inline ObjPtr tube_object(const WeightData& wd, int level, int start, int len, int to) {
  const int p = wd.weights.at(static_cast<std::size_t>(level - 1));
  const Point& x = wd.points.at(static_cast<std::size_t>(level - 1));
  ObjPtr s = lift(wd, make_base({p1::Summand::T(x, 1)}), level - 1);
  std::vector<int> pos;
  std::vector<std::size_t> dims;
  std::vector<Matrix> mats;
  for (int k = 0; k < len; ++k) {
    pos.push_back(positive_mod(start + k, p));
    dims.push_back(1);
    if (k + 1 < len) mats.push_back(Matrix::identity(1));
  }
  return lift(wd, run_cycle(x, p, s, pos, dims, mats), to);
}

/// Rational points not in the tower, used for ordinary torsion.
inline std::vector<Point> ordinary_points(const WeightData& wd, int level, std::size_t count) {
  std::vector<Point> out;
  for (const Point& y : wd.points)
    if (out.size() < count && std::find(wd.points.begin(), wd.points.begin() + level, y) == wd.points.begin() + level)
      out.push_back(y);
  for (long v = 1; out.size() < count; ++v) {
    for (long c : {v, -v}) {
      Point y = Point::at(Scalar(c));
      if (out.size() < count && std::find(wd.points.begin(), wd.points.end(), y) == wd.points.end() &&
          std::find(out.begin(), out.end(), y) == out.end())
        out.push_back(y);
    }
  }
  return out;
}

/// Line bundle shift^{s_level}(iota(... shift^{s_1}(iota O(n)))).
inline ObjPtr line_bundle(const WeightData& wd, int n, const std::vector<int>& shifts) {
  ObjPtr l = make_base({p1::Summand::O(n)});
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    l = iota(l, wd.points[k], wd.weights[k]);
    if (shifts[k]) l = sigma_bar(l, shifts[k]);
  }
  return l;
}

/// All line bundles with n in [nmin, nmax] and every shift vector, at `level`.
inline std::vector<ObjPtr> line_bundles(const WeightData& wd, int level, int nmin, int nmax) {
  std::vector<ObjPtr> out;
  std::vector<int> s(static_cast<std::size_t>(level), 0);
  while (true) {
    for (int n = nmin; n <= nmax; ++n) out.push_back(line_bundle(wd, n, s));
    int k = level - 1;
    while (k >= 0 && ++s[static_cast<std::size_t>(k)] == wd.weights[static_cast<std::size_t>(k)]) s[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

/// Random linear combination of a hom basis with coefficients in [-2, 2].
template <class Rng>
Morphism random_morphism(const ObjPtr& e, const ObjPtr& f, Rng& g) {
  auto b = hom_basis(e, f);
  std::uniform_int_distribution<int> c(-2, 2);
  Vec v(b.size());
  for (auto& x : v) x = c(g);
  return combine(e, f, b, v);
}

/// Pushout of  a -> b  along  g : a -> a2: the middle term and its two maps.
struct Pushout {
  ObjPtr obj;
  Morphism from_b, from_a2;
};
inline Pushout pushout(const Morphism& f, const Morphism& g) {
  auto s = direct_sum({f.dst, g.dst});
  Morphism d = sub(compose(s.inj[0], f), compose(s.inj[1], g));
  auto c = cokernel(d);
  return {c.obj, compose(c.map, s.inj[0]), compose(c.map, s.inj[1])};
}

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t target = 40;     // extension middles fill up to this size
  std::size_t extensions = 8;  // and add at least this many
  int nmin = -2, nmax = 2;
};

inline std::vector<ObjPtr> corpus(const WeightData& wd, int level, const CorpusOptions& opt = {}) {
  std::vector<ObjPtr> out;
  std::set<std::string> seen;
  auto push = [&](const ObjPtr& e) {
    if (is_zero_object(*e)) return;
    if (seen.insert(to_string(*e)).second) out.push_back(e);
  };
  for (auto& l : line_bundles(wd, level, opt.nmin, opt.nmax)) push(l);
  for (int i = 1; i <= level; ++i)
    for (int j = 1; j <= wd.weights[static_cast<std::size_t>(i - 1)]; ++j) push(simple_object(wd, level, i, j));
  for (auto& y : ordinary_points(wd, level, 2)) {
    push(lift(wd, make_base({p1::Summand::T(y, 1)}), level));
    push(lift(wd, make_base({p1::Summand::T(y, 2)}), level));
  }
  for (int i = 1; i <= level; ++i) {
    const int p = wd.weights[static_cast<std::size_t>(i - 1)];
    if (p >= 2)
      for (int a = 0; a < p; ++a) push(tube_object(wd, i, a, 2, level));
  }
  const std::size_t seeds = out.size();
  const std::size_t goal = std::max(opt.target, seeds + opt.extensions);
  std::mt19937_64 g(opt.seed);
  for (int attempt = 0; out.size() < goal && attempt < 20 * static_cast<int>(goal); ++attempt) {
    const auto& x = out[g() % seeds];
    const auto& y = out[g() % seeds];
    const auto& z = out[g() % seeds];
    try {
      auto u = random_morphism(x, y, g);
      auto k = kernel(u);
      if (is_zero_object(*k.obj)) continue;
      auto v = random_morphism(k.obj, z, g);
      push(pushout(k.map, v).obj);
    } catch (const std::runtime_error&) {
      // cokernel torsion at a non-rational point
    }
  }
  return out;
}

}  // namespace wpl
