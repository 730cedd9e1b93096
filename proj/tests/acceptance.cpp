// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "wpl/dsl.hpp"
#include "wpl/suites.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sys/wait.h>

using namespace wpl;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(const SuiteReport& r) {
    for (auto& a : r.axioms)
      if (!a.pass) fail(r.suite + " " + r.instance + ": " + a.axiom + ": " + a.witness);
  }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

WeightData tower(const std::string& w, const std::string& p) { return parse_weight_data(w, p); }

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args, const std::string& env = "") {
  Run r;
  const std::string cmd = env + " " + std::string(WPL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  const int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

int failures = 0;

void report(int n, const std::string& name, const Verdict& v, double seconds) {
  std::printf("criterion %d: %s  %s (%.1f s)%s%s\n", n, v.pass ? "PASS" : "FAIL", name.c_str(), seconds, v.detail.empty() ? "" : "  ",
              v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <class Body>
void criterion(int n, const std::string& name, Body&& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  report(n, name, v, since(t0));
}

const WeightData& wd23() {
  static const WeightData wd = tower("2,3", "inf,0");
  return wd;
}
const WeightData& wd222() {
  static const WeightData wd = tower("2,2,2", "inf,0,1");
  return wd;
}

}  // namespace

int main() {
  criterion(1, "adjoint calculus on (2,3) and (2,2,2), i in [-2p, 2p]", [](Verdict& v) {
    const auto t0 = Clock::now();
    for (auto* wd : {&wd23(), &wd222()}) v.require(adjoint_suite(*wd));
    if (since(t0) >= 60) v.fail("runtime " + std::to_string(since(t0)) + " s exceeds 60 s");
  });

  criterion(2, "kernel/image membership against brute force", [](Verdict& v) {
    for (auto* wd : {&wd23(), &wd222()}) v.require(kernel_image_suite(*wd));
  });

  criterion(3, "tubes and simples", [](Verdict& v) {
    for (auto* wd : {&wd23(), &wd222()}) v.require(tube_suite(*wd));
  });

  criterion(4, "line bundles against simples over (2,3)", [](Verdict& v) { v.require(line_bundle_suite(wd23())); });

  criterion(5, "recollements over (2,3)", [](Verdict& v) {
    const std::set<std::string> needed{"adjunction i^* -| i_*",   "adjunction i_* -| i^!",      "adjunction j_! -| j^*",
                                       "adjunction j^* -| j_*",   "i_* fully faithful",         "j_! and j_* fully faithful",
                                       "Ker(j^*) = Im(i_*)",      "canonical sequences"};
    for (auto& qq : standard_tuples(wd23())) {
      auto r = recollement_suite(wd23(), qq);
      v.require(r);
      std::set<std::string> seen;
      for (auto& a : r.axioms)
        if (a.checks > 0) seen.insert(a.axiom);
      for (auto& n : needed)
        if (!seen.count(n)) v.fail(r.instance + ": axiom '" + n + "' was not exercised");
      if (r.seconds >= 180) v.fail(r.instance + " took " + std::to_string(r.seconds) + " s");
    }
  });

  criterion(6, "ladder periodicity", [](Verdict& v) {
    auto expect = [&](const WeightData& wd, const SeqTuple& qq, long period, bool smaller) {
      LadderExpectation want{period, smaller};
      v.require(ladder_suite(wd, qq, 24, want));
    };
    expect(wd23(), {{0}, {1}}, 6, false);
    expect(tower("2,2", "inf,0"), {{0}, {0}}, 2, false);
    expect(tower("4", "inf"), {{0, 2}}, 2, true);
    for (auto* wd : {&wd23(), &wd222()}) {
      // every index tuple of the tower
      std::vector<SeqTuple> all{SeqTuple{}};
      for (int p : wd->weights) {
        std::vector<SeqTuple> next;
        for (auto& t : all)
          for (unsigned mask = 0; mask + 1 < (1u << p); ++mask) {
            IndexSeq s;
            for (int i = 0; i < p; ++i)
              if (mask >> i & 1u) s.push_back(i);
            auto u = t;
            u.push_back(s);
            next.push_back(u);
          }
        all = next;
      }
      for (auto& qq : all) {
        auto r = ladder_period(*wd, qq, 24);
        if (!r.lcm_confirmed) v.fail(weights_str(*wd) + " q=" + seq_tuple_str(qq) + ": no lcm period");
      }
    }
  });

  criterion(7, "stable ladder for (2,3,3) and (2,3,4), q = 0, 1, 2", [](Verdict& v) {
    for (int p3 : {3, 4})
      for (int q = 0; q <= 2; ++q) {
        auto rep = triple_ladder_check(2, 3, p3, q);
        std::printf("  %s: %s, %zu distinguished sequences, %.1f s\n", rep.instance.c_str(), rep.all_pass() ? "pass" : "fail",
                    rep.distinguished_sequences, rep.seconds);
        std::fflush(stdout);
        for (auto& a : rep.axioms)
          if (!a.pass) v.fail(rep.instance + ": " + a.axiom + ": " + a.witness);
        if (rep.distinguished_sequences < 20) v.fail(rep.instance + ": fewer than 20 distinguished sequences");
        if (rep.seconds >= 300) v.fail(rep.instance + " took " + std::to_string(rep.seconds) + " s");
      }
  });

  criterion(8, "Euler additivity on at least 100 sequences", [](Verdict& v) {
    EulerOptions opt;
    opt.sequences = 100;
    v.require(euler_suite({wd23(), wd222()}, opt));
  });

  criterion(9, "CLI selftest, DSL corpus round trip, deterministic output", [](Verdict& v) {
    auto self = run_cli("selftest --weights 2,3 --points inf,0 --format json");
    if (self.code != 0) v.fail("selftest exit code " + std::to_string(self.code));
    auto j = json::parse(self.out, nullptr, false);
    if (j.is_discarded()) {
      v.fail("selftest output is not JSON");
    } else {
      std::set<std::string> suites;
      for (auto& r : j["results"]) suites.insert(r["suite"].get<std::string>());
      for (const char* s : {"adjoint calculus", "kernel and image", "tubes and simples", "line bundles against simples", "recollement",
                            "ladder periodicity", "stable ladder", "Euler additivity"})
        if (!suites.count(s)) v.fail(std::string("selftest did not run ") + s);
      if (j["status"] != "pass") v.fail("selftest status " + j["status"].dump());
    }

    auto cases = load_dsl_corpus(WPL_DATA_DIR "/dsl_corpus.txt");
    if (cases.size() < 60) v.fail("shipped corpus has only " + std::to_string(cases.size()) + " descriptions");
    for (auto& c : cases) {
      auto e = parse_object(c.text, c.wd, c.level);
      auto back = parse_object(print_object(e), c.wd, c.level);
      if (!(*back == *e) || print_object(back) != print_object(e)) v.fail("corpus line " + std::to_string(c.line) + " does not round trip");
    }

    for (const char* args : {"recollement --weights 2,3 --q \"1;1,2\" --seed 5 --format json",
                             "ladder --weights 2,3 --q \"0;1\" --range 12 --format json",
                             "reduce --weights 2,3 --object \"sum(O(1), S(2,1))\" --i 1 --format json",
                             "hom --weights 2,3 --source \"S(2,1)\" --target \"S(2,2)\" --format json"}) {
      auto a = run_cli(args), b = run_cli(args);
      if (a.code != 0 || a.out.empty() || a.out != b.out) v.fail(std::string("output not reproducible: ") + args);
    }
    const std::string rec = "recollement --weights 2,3 --q \"1;1,2\" --format json";
    if (run_cli(rec, "WPL_SEED=5").out != run_cli(rec + " --seed 5").out) v.fail("WPL_SEED does not match --seed");
    auto again = run_cli("selftest --weights 2,3 --points inf,0 --format json");
    if (again.out != self.out) v.fail("selftest output differs between runs");
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
