#pragma once

// Verification suites shared by the CLI and the acceptance binary. Each suite
// returns named axioms with a check count and the first failing witness.

#include "wpl/corpus.hpp"
#include "wpl/functors.hpp"
#include "wpl/recolladder.hpp"
#include "wpl/stable.hpp"

#include <array>
#include <deque>

namespace wpl {

struct SuiteReport {
  std::string suite;
  std::string instance;
  std::vector<AxiomResult> axioms;
  double seconds = 0;
  bool all_pass() const {
    for (auto& a : axioms)
      if (!a.pass) return false;
    return true;
  }
  std::size_t checks() const {
    std::size_t n = 0;
    for (auto& a : axioms) n += a.checks;
    return n;
  }
};

inline std::string weights_str(const WeightData& wd) {
  std::string w, p;
  for (std::size_t k = 0; k < wd.weights.size(); ++k) {
    w += (k ? "," : "") + std::to_string(wd.weights[k]);
    p += (k ? "," : "") + wd.points[k].str();
  }
  return "(" + w + ";" + p + ")";
}

namespace suite_detail {

class Runner {
 public:
  Runner(std::string suite, std::string instance) : t0_(std::chrono::steady_clock::now()) {
    rep_.suite = std::move(suite);
    rep_.instance = std::move(instance);
  }
  AxiomResult& axiom(const std::string& name) {
    for (auto& a : axioms_)
      if (a.axiom == name) return a;
    axioms_.push_back({name, true, "", 0});
    return axioms_.back();
  }
  void guard(const std::string& name, const std::function<void(AxiomResult&)>& body) {
    AxiomResult& ax = axiom(name);
    try {
      body(ax);
    } catch (const std::exception& ex) {
      axiom(name).expect(false, [&] { return std::string("exception: ") + ex.what(); });
    }
  }
  SuiteReport finish() {
    rep_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    rep_.axioms.assign(axioms_.begin(), axioms_.end());
    return std::move(rep_);
  }

 private:
  SuiteReport rep_;
  std::deque<AxiomResult> axioms_;  // stable references while sections add axioms
  std::chrono::steady_clock::time_point t0_;
};

inline int weight_at(const WeightData& wd, int level) { return wd.weights[static_cast<std::size_t>(level - 1)]; }

inline std::vector<ObjPtr> level_corpus(const WeightData& wd, int level, std::uint64_t seed, std::size_t size) {
  CorpusOptions opt;
  opt.seed = seed + static_cast<std::uint64_t>(level);
  opt.target = size;
  return corpus(wd, level, opt);
}

}  // namespace suite_detail

// ---- 1. adjoint calculus ----------------------------------------------------------------------------------

struct AdjointOptions {
  std::uint64_t seed = 1;
  std::size_t per_level = 30;
  std::size_t pairs = 8;    // adjunction pairs per index
  std::size_t natural = 3;  // naturality squares per index
};

inline SuiteReport adjoint_suite(const WeightData& wd, const AdjointOptions& opt = {}) {
  using namespace suite_detail;
  Runner run("adjoint calculus", weights_str(wd));
  std::mt19937_64 g(opt.seed);
  for (int level = 1; level <= wd.levels(); ++level) {
    const int p = weight_at(wd, level);
    if (p < 2) continue;
    const auto c = level_corpus(wd, level, opt.seed, opt.per_level);
    run.axiom("corpus size").expect(c.size() >= opt.per_level, [&] {
      return "level " + std::to_string(level) + " corpus has " + std::to_string(c.size()) + " objects";
    });
    for (long m = -2L * p; m <= 2L * p; ++m) {
      const std::string at = "level " + std::to_string(level) + ", i=" + std::to_string(m);
      std::vector<ObjPtr> r;
      for (std::size_t a = 0; a < c.size(); ++a) r.push_back(psi_reduce(c[a], m + static_cast<long>(a % 3)));
      run.guard("reduction after insertion is the identity", [&](AxiomResult& ax) {
        for (std::size_t a = 0; a < r.size(); ++a) {
          ax.expect(*psi_reduce(psi_insert(r[a], m), m) == *r[a], [&] { return at + ": psi^i psi_i F != F for " + to_string(*r[a]); });
          ax.expect(*psi_reduce(psi_insert(r[a], m - 1), m) == *r[a], [&] { return at + ": psi^i psi_{i-1} F != F for " + to_string(*r[a]); });
        }
        for (std::size_t k = 0; k < opt.pairs; ++k) {
          const auto& x = r[g() % r.size()];
          const auto& y = r[g() % r.size()];
          auto u = random_morphism(x, y, g);
          ax.expect(same_data(psi_reduce(psi_insert(u, m), m), u), [&] { return at + ": psi^i psi_i u != u"; });
          ax.expect(same_data(psi_reduce(psi_insert(u, m - 1), m), u), [&] { return at + ": psi^i psi_{i-1} u != u"; });
        }
      });
      run.guard("adjunction dimensions", [&](AxiomResult& ax) {
        for (std::size_t k = 0; k < opt.pairs; ++k) {
          const auto& e = c[g() % c.size()];
          const auto& f = r[g() % r.size()];
          const auto d1 = hom_dim(psi_reduce(e, m), f), d2 = hom_dim(e, psi_insert(f, m));
          ax.expect(d1 == d2, [&] { return at + ": Hom(psi^i E, F) = " + std::to_string(d1) + ", Hom(E, psi_i F) = " + std::to_string(d2); });
          const auto d3 = hom_dim(psi_insert(f, m - 1), e), d4 = hom_dim(f, psi_reduce(e, m));
          ax.expect(d3 == d4, [&] { return at + ": Hom(psi_{i-1} F, E) = " + std::to_string(d3) + ", Hom(F, psi^i E) = " + std::to_string(d4); });
        }
      });
      run.guard("adjunction naturality", [&](AxiomResult& ax) {
        for (std::size_t k = 0; k < opt.natural; ++k) {
          const auto& e = c[g() % c.size()];
          const auto& e2 = c[g() % c.size()];
          const auto& f = r[g() % r.size()];
          const auto& f2 = r[g() % r.size()];
          // psi^i -| psi_i
          auto u = random_morphism(psi_reduce(e, m), f, g);
          auto t = transpose_right(m, e, f, u);
          ax.expect(!square_failure(t) && same_data(untranspose_right(m, t), u), [&] { return at + ": transpose of psi^i -| psi_i is not inverse"; });
          auto x = random_morphism(e2, e, g);
          auto y = random_morphism(f, f2, g);
          ax.expect(same_data(transpose_right(m, e2, f2, compose(y, compose(u, psi_reduce(x, m)))), compose(psi_insert(y, m), compose(t, x))),
                    [&] { return at + ": psi^i -| psi_i not natural"; });
          // psi_{i-1} -| psi^i
          auto w = random_morphism(f, psi_reduce(e, m), g);
          auto h = untranspose_left(m, f, e, w);
          ax.expect(!square_failure(h) && same_data(transpose_left(m, h), w), [&] { return at + ": transpose of psi_{i-1} -| psi^i is not inverse"; });
          auto z = random_morphism(f2, f, g);
          ax.expect(same_data(untranspose_left(m, f2, e, compose(w, z)), compose(h, psi_insert(z, m - 1))),
                    [&] { return at + ": psi_{i-1} -| psi^i not natural in F"; });
          auto w2 = random_morphism(f, psi_reduce(e2, m), g);
          ax.expect(same_data(untranspose_left(m, f, e, compose(psi_reduce(x, m), w2)), compose(x, untranspose_left(m, f, e2, w2))),
                    [&] { return at + ": psi_{i-1} -| psi^i not natural in E"; });
        }
      });
    }
  }
  return run.finish();
}

// ---- 2. kernel and image -----------------------------------------------------------------------------------

inline SuiteReport kernel_image_suite(const WeightData& wd, std::uint64_t seed = 1, std::size_t per_level = 30) {
  using namespace suite_detail;
  Runner run("kernel and image", weights_str(wd));
  for (int level = 1; level <= wd.levels(); ++level) {
    const int p = weight_at(wd, level);
    if (p < 2) continue;
    auto c = level_corpus(wd, level, seed, per_level);
    // include objects known to lie in the image
    const std::size_t base = c.size();
    for (std::size_t a = 0; a < base; a += 3) c.push_back(psi_insert(psi_reduce(c[a], 0), static_cast<long>(a % static_cast<std::size_t>(p))));
    for (long m = -2L * p; m <= 2L * p; ++m) {
      const int pos = positive_mod(m, p);
      auto s = simple_object(wd, level, level, p - pos);
      for (auto& e : c) {
        run.guard("kernel membership", [&](AxiomResult& ax) {
          bool brute = true;
          for (auto& part : normalize(e).parts) brute = brute && isomorphic(part, s);
          ax.expect(ker_membership(level, e, m) == brute, [&] { return "i=" + std::to_string(m) + ": " + to_string(*e); });
        });
        run.guard("image membership", [&](AxiomResult& ax) {
          ax.expect(im_membership(level, e, m) == im_witness(e, m), [&] { return "i=" + std::to_string(m) + ": " + to_string(*e); });
        });
      }
    }
  }
  return run.finish();
}

// ---- 3. tubes and simples ---------------------------------------------------------------------------------

inline SuiteReport tube_suite(const WeightData& wd) {
  using namespace suite_detail;
  Runner run("tubes and simples", weights_str(wd));
  const int top = wd.levels();
  for (int i = 1; i <= top; ++i) {
    const int p = weight_at(wd, i);
    for (int j = 1; j <= p; ++j) {
      const std::string at = "point " + std::to_string(i) + ", S_" + std::to_string(j);
      auto s = simple_object(wd, top, i, j);
      auto s1 = simple_object(wd, top, i, j + 1);  // S_{p+1} is S_1
      run.guard("translation on simples", [&](AxiomResult& ax) {
        ax.expect(isomorphic(tau_inverse(s), s1), [&] { return at + ": inverse translation is not S_{j+1}"; });
        ax.expect(isomorphic(tau(s1), s), [&] { return at + ": translation of S_{j+1} is not S_j"; });
      });
      run.guard("Ext^1(S_{j+1}, S_j) is one-dimensional", [&](AxiomResult& ax) {
        const auto d = ext1_dim(s1, s);
        ax.expect(d == 1, [&] { return at + ": dimension " + std::to_string(d); });
        for (int k = 1; k <= p; ++k) {
          if (positive_mod(k - j - 1, p) == 0) continue;
          const auto e = ext1_dim(simple_object(wd, top, i, k), s);
          ax.expect(e == 0, [&] { return at + ": Ext^1(S_" + std::to_string(k) + ", S_j) = " + std::to_string(e); });
        }
      });
      run.guard("tube period equals the weight", [&](AxiomResult& ax) {
        ObjPtr t = s;
        for (int k = 1; k <= p; ++k) {
          t = tau(t);
          ax.expect(isomorphic(t, s) == (k == p), [&] { return at + ": translation period differs from " + std::to_string(p) + " at " + std::to_string(k); });
        }
      });
    }
  }
  run.guard("tube period equals the weight", [&](AxiomResult& ax) {
    for (auto& y : ordinary_points(wd, top, 2)) {
      auto s = simple_at(wd, top, y, 0);
      ax.expect(isomorphic(tau(s), s), [&] { return "ordinary point " + y.str() + " is not a homogeneous tube"; });
    }
  });
  return run.finish();
}

// ---- 4. line bundles against simples -----------------------------------------------------------------------

inline SuiteReport line_bundle_suite(const WeightData& wd, std::uint64_t seed = 1, std::size_t per_level = 30) {
  using namespace suite_detail;
  Runner run("line bundles against simples", weights_str(wd));
  for (int level = 1; level <= wd.levels(); ++level) {
    const int p = weight_at(wd, level);
    for (auto& e : level_corpus(wd, level, seed, per_level)) {
      auto form = line_bundle_form(e);
      if (!form) continue;
      const int i = form->shift;
      for (int k = 0; k < p; ++k) {
        auto s = simple_object(wd, level, level, k);
        const std::string at = to_string(*e) + " against S_" + std::to_string(k);
        run.guard("Ext^1(S_k, L) nonzero iff k = i+1", [&](AxiomResult& ax) {
          ax.expect((ext1_dim(s, e) != 0) == (positive_mod(k - i - 1, p) == 0), [&] { return at; });
        });
        run.guard("Hom(L, S_k) nonzero iff k = i", [&](AxiomResult& ax) {
          ax.expect((hom_dim(e, s) != 0) == (positive_mod(k - i, p) == 0), [&] { return at; });
        });
      }
    }
  }
  return run.finish();
}

// ---- 5. recollements --------------------------------------------------------------------------------------

inline SuiteReport recollement_suite(const WeightData& wd, const SeqTuple& qq, const VerifyOptions& opt = {}) {
  suite_detail::Runner run("recollement", weights_str(wd) + " q=" + seq_tuple_str(qq));
  auto rep = verify_recollement(assemble_recollement(wd, qq), opt);
  SuiteReport r = run.finish();
  r.axioms = rep.axioms;
  r.seconds = rep.seconds;
  return r;
}

/// Index tuples checked by default: the fixed list for (2,3), otherwise index 1
/// alone at each point, the longest run (1..p-1) at each point, and index 1
/// everywhere.
inline std::vector<SeqTuple> standard_tuples(const WeightData& wd) {
  if (wd.weights == std::vector<int>{2, 3}) return {{{1}, {}}, {{}, {1}}, {{1}, {1, 2}}, {{0}, {2}}};
  std::vector<SeqTuple> out;
  const auto n = static_cast<std::size_t>(wd.levels());
  auto add = [&](const SeqTuple& t) {
    bool any = false;
    for (auto& s : t) any = any || !s.empty();
    if (any && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  SeqTuple all(n);
  for (std::size_t l = 0; l < n; ++l) {
    const int p = wd.weights[l];
    if (p < 2) continue;
    SeqTuple t(n);
    t[l] = {1};
    add(t);
    t[l].clear();
    for (int i = 1; i < p; ++i) t[l].push_back(i);
    add(t);
    all[l] = {1};
  }
  add(all);
  return out;
}

// ---- 6. ladder periods --------------------------------------------------------------------------------------

struct LadderExpectation {
  std::optional<long> minimal_period;
  std::optional<bool> smaller_than_lcm;
};

inline SuiteReport ladder_suite(const WeightData& wd, const SeqTuple& qq, long range, const LadderExpectation& want = {}) {
  suite_detail::Runner run("ladder periodicity", weights_str(wd) + " q=" + seq_tuple_str(qq));
  run.guard("lcm period confirmed", [&](AxiomResult& ax) {
    auto r = ladder_period(wd, qq, range);
    ax.expect(r.lcm_confirmed, [&] { return "kernel sets do not repeat with period " + std::to_string(r.lcm); });
    for (long n = 0; n <= std::min<long>(range, 2 * r.lcm); ++n)
      ax.expect(kernel_simples_brute(wd, qq, n) == r.sets[static_cast<std::size_t>(n)], [&] { return "brute-force kernel differs at n=" + std::to_string(n); });
    auto& mp = run.axiom("minimal period");
    mp.expect(r.minimal_period.has_value() && r.lcm % *r.minimal_period == 0, [&] { return std::string("minimal period does not divide the lcm"); });
    if (want.minimal_period)
      mp.expect(r.minimal_period == want.minimal_period, [&] {
        return "minimal period " + (r.minimal_period ? std::to_string(*r.minimal_period) : std::string("none")) + ", expected " + std::to_string(*want.minimal_period);
      });
    if (want.smaller_than_lcm)
      mp.expect(r.smaller_than_lcm == *want.smaller_than_lcm, [&] { return std::string("smaller-than-lcm flag is wrong"); });
  });
  return run.finish();
}

// ---- 7. stable ladder -------------------------------------------------------------------------------------

inline SuiteReport stable_suite(int p1, int p2, int p3, int q, const TripleOptions& opt = {}) {
  suite_detail::Runner run("stable ladder", "");
  auto rep = triple_ladder_check(p1, p2, p3, q, opt);
  SuiteReport r = run.finish();
  r.instance = rep.instance;
  r.axioms = rep.axioms;
  r.seconds = rep.seconds;
  return r;
}

// ---- 8. Euler form ------------------------------------------------------------------------------------------

struct EulerOptions {
  std::uint64_t seed = 1;
  std::size_t sequences = 100;
  std::size_t probes = 8;
  std::size_t per_level = 24;
};

/// <X, Y> = dim Hom(X, Y) - dim Ext^1(X, Y).
inline long euler_form(const ObjPtr& x, const ObjPtr& y) {
  return static_cast<long>(hom_dim(x, y)) - static_cast<long>(ext1_dim(x, y));
}

/// Short exact sequences 0 -> ker u -> E -> im u -> 0 and 0 -> im u -> F ->
/// coker u -> 0 from random maps u : E -> F, additive in either argument.
inline SuiteReport euler_suite(const std::vector<WeightData>& towers, const EulerOptions& opt = {}) {
  using namespace suite_detail;
  std::string inst;
  for (auto& wd : towers) inst += (inst.empty() ? "" : " ") + weights_str(wd);
  Runner run("Euler additivity", inst);
  std::size_t built = 0;
  std::vector<std::pair<WeightData, int>> levels;
  for (auto& wd : towers)
    for (int l = 0; l <= wd.levels(); ++l) levels.emplace_back(wd, l);
  const std::size_t per = (opt.sequences + levels.size() - 1) / levels.size();
  for (auto& [wd, level] : levels) {
    std::mt19937_64 g(opt.seed + static_cast<std::uint64_t>(level));
    auto c = level_corpus(wd, level, opt.seed, opt.per_level);
    std::vector<ObjPtr> probes;
    for (std::size_t k = 0; k < opt.probes; ++k) probes.push_back(c[(k * 7 + 3) % c.size()]);
    std::size_t here = 0;
    for (int attempt = 0; here < per && attempt < 40 * static_cast<int>(per); ++attempt) {
      const auto& e = c[g() % c.size()];
      const auto& f = c[g() % c.size()];
      if (hom_dim(e, f) == 0) continue;
      auto u = random_morphism(e, f, g);
      std::array<std::array<ObjPtr, 3>, 2> seqs;
      try {
        auto k = kernel(u);
        auto im = image(u);
        seqs = {{{k.obj, e, im.obj}, {im.obj, f, cokernel(u).obj}}};
      } catch (const std::runtime_error&) {
        continue;  // torsion at a non-rational point
      }
      run.guard("Euler form additive on short exact sequences", [&](AxiomResult& ax) {
        for (auto& s : seqs) {
          for (auto& x : probes) {
            const long l = euler_form(x, s[0]) - euler_form(x, s[1]) + euler_form(x, s[2]);
            const long r = euler_form(s[0], x) - euler_form(s[1], x) + euler_form(s[2], x);
            ax.expect(l == 0 && r == 0, [&] {
              return "alternating sum " + std::to_string(l) + "/" + std::to_string(r) + " for " + to_string(*s[1]) + " against " + to_string(*x);
            });
          }
          ++built;
          ++here;
        }
      });
    }
  }
  run.axiom("sequence count").expect(built >= opt.sequences, [&] { return "only " + std::to_string(built) + " sequences"; });
  return run.finish();
}

}  // namespace wpl
