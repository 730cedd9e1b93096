// wpl: command-line front end for the weighted projective line library.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 input error.

#include "wpl/dsl.hpp"
#include "wpl/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <iostream>

using namespace wpl;
using json = nlohmann::ordered_json;

namespace {

struct Config {
  std::string weights = "2,3";
  std::string points;
  std::string field = "Q";
  std::uint64_t seed = 1;
  std::string format = "text";
  bool timing = false;
  int level = -1;
  std::string object, source, target, q, i;
  int at = -1;
  long range = 0;
  bool experimental = false;
  std::string profile = "full";
  WeightData wd;
};

struct Outcome {
  std::string command;
  std::string instance;
  std::vector<SuiteReport> suites;
  json data = json::object();
  std::optional<std::string> error;
  double seconds = 0;

  bool pass() const {
    for (auto& s : suites)
      if (!s.all_pass()) return false;
    return true;
  }
  int exit_code() const { return error ? 2 : pass() ? 0 : 1; }
  std::string status() const { return error ? "error" : pass() ? "pass" : "fail"; }
};

std::uint32_t parse_field(const std::string& f) {
  if (f == "Q" || f == "q" || f == "0" || f == "rational") return 0;
  std::size_t used = 0;
  unsigned long p = 0;
  try {
    p = std::stoul(f, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (f.empty() || used != f.size()) throw std::invalid_argument("bad field '" + f + "' (use Q or a prime)");
  return static_cast<std::uint32_t>(p);
}

int object_level(const Config& c) {
  const int l = c.level < 0 ? c.wd.levels() : c.level;
  if (l > c.wd.levels()) throw std::invalid_argument("level " + std::to_string(l) + " outside the tower");
  return l;
}

ObjPtr need_object(const Config& c, const std::string& text, const char* flag) {
  if (text.empty()) throw std::invalid_argument(std::string("missing ") + flag);
  return parse_object(text, c.wd, object_level(c));
}

WeightData adjust_weight(WeightData wd, int at, int delta) {
  wd.weights[static_cast<std::size_t>(at - 1)] += delta;
  wd.validate();
  return wd;
}

// ---- commands ---------------------------------------------------------------------------------

void cmd_build(const Config& c, Outcome& out) {
  auto e = need_object(c, c.object, "--object");
  const auto text = print_object(e);
  out.data["object"] = text;
  out.data["level"] = e->level;
  out.data["rank"] = rank(*e);
  out.data["vector_bundle"] = is_vector_bundle(*e);
  out.data["indecomposable_summands"] = normalize(e).parts.size();
  if (auto f = line_bundle_form(e)) out.data["line_bundle_form"] = {{"lower", print_object(f->lower)}, {"shift", f->shift}};
  suite_detail::Runner run("build", out.instance);
  run.guard("round trip", [&](AxiomResult& ax) {
    auto back = parse_object(text, c.wd, e->level);
    ax.expect(*back == *e, [&] { return "parse(print(E)) differs from E for " + text; });
    ax.expect(print_object(back) == text, [&] { return "printing is not idempotent for " + text; });
  });
  out.suites.push_back(run.finish());
}

void cmd_hom(const Config& c, Outcome& out, bool ext_first) {
  auto x = need_object(c, c.source, "--source");
  auto y = need_object(c, c.target, "--target");
  const auto h = hom_dim(x, y);
  const auto e = ext1_dim(x, y);
  const auto er = ext1_dim(y, x);
  out.data["source"] = print_object(x);
  out.data["target"] = print_object(y);
  if (ext_first) {
    out.data["ext1"] = e;
    out.data["ext1_reverse"] = er;
    out.data["hom"] = h;
  } else {
    out.data["hom"] = h;
    out.data["ext1"] = e;
    out.data["ext1_reverse"] = er;
  }
  out.data["euler_form"] = static_cast<long>(h) - static_cast<long>(e);
  suite_detail::Runner run(ext_first ? "ext" : "hom", out.instance);
  run.guard("Serre duality", [&](AxiomResult& ax) {
    ax.expect(e == hom_dim(tau_inverse(y), x), [&] { return std::string("dim Ext^1(X,Y) differs from dim Hom(tau^-1 Y, X)"); });
    ax.expect(er == hom_dim(tau_inverse(x), y), [&] { return std::string("dim Ext^1(Y,X) differs from dim Hom(tau^-1 X, Y)"); });
  });
  out.suites.push_back(run.finish());
}

void cmd_functor(const Config& c, Outcome& out, bool reduce) {
  auto e = need_object(c, c.object, "--object");
  out.data["object"] = print_object(e);
  ObjPtr r;
  WeightData to;
  if (!c.q.empty()) {
    if (!c.i.empty()) throw std::invalid_argument("give either --i or --q, not both");
    auto qq = parse_seq_tuple(c.q, c.wd);
    if (reduce) {
      r = psi_reduce_tower(e, qq);
      to = reduced_weights(c.wd, qq);
    } else {
      r = psi_insert_tower(e, qq);
      to = c.wd;
      for (std::size_t l = 0; l < qq.size(); ++l) to.weights[l] += static_cast<int>(qq[l].size());
    }
    out.data["q"] = qq;
  } else {
    if (c.i.empty()) throw std::invalid_argument("missing --i or --q");
    const int at = c.at < 0 ? e->level : c.at;
    if (at < 1 || at > e->level) throw std::invalid_argument("--at must name a weighted point at or below the object level");
    auto idx = parse_index_seq(c.i);
    if (idx.empty()) throw std::invalid_argument("empty --i");
    const int p = c.wd.weights[static_cast<std::size_t>(at - 1)];
    const int k = static_cast<int>(idx.size());
    if (reduce) {
      if (k == 1) {
        r = psi_reduce_at(at, e, idx[0]);
      } else {
        validate_seq(idx, p);
        r = psi_reduce_seq(at, e, idx);
      }
      to = adjust_weight(c.wd, at, -k);
    } else {
      if (k == 1) {
        r = psi_insert_at(at, e, idx[0]);
      } else {
        validate_seq(idx, p + k);
        r = psi_insert_seq(at, e, idx);
      }
      to = adjust_weight(c.wd, at, k);
    }
    out.data["at"] = at;
    out.data["i"] = idx;
  }
  out.data["result"] = print_object(r);
  out.data["result_weights"] = weights_str(to);
  out.data["rank"] = rank(*r);
  suite_detail::Runner run(reduce ? "reduce" : "insert", out.instance);
  run.guard("rank preserved", [&](AxiomResult& ax) {
    ax.expect(!is_vector_bundle(*e) || rank(*r) == rank(*e), [&] { return std::string("rank changed"); });
  });
  run.guard("result round trip", [&](AxiomResult& ax) {
    const auto text = print_object(r);
    ax.expect(*parse_object(text, to, r->level) == *r, [&] { return "result does not parse back: " + text; });
  });
  out.suites.push_back(run.finish());
}

void cmd_recollement(const Config& c, Outcome& out) {
  if (c.q.empty()) throw std::invalid_argument("missing --q");
  auto qq = parse_seq_tuple(c.q, c.wd);
  VerifyOptions opt;
  opt.seed = c.seed;
  auto rep = verify_recollement(assemble_recollement(c.wd, qq), opt);
  out.instance = weights_str(c.wd) + " q=" + seq_tuple_str(qq);
  out.data["left_type"] = rep.left_type;
  SuiteReport s;
  s.suite = "recollement";
  s.instance = out.instance;
  s.axioms = rep.axioms;
  s.seconds = rep.seconds;
  out.suites.push_back(std::move(s));
}

void cmd_ladder(const Config& c, Outcome& out) {
  if (c.q.empty()) throw std::invalid_argument("missing --q");
  auto qq = parse_seq_tuple(c.q, c.wd);
  auto r = ladder_period(c.wd, qq, c.range);
  out.instance = weights_str(c.wd) + " q=" + seq_tuple_str(qq);
  out.data["lcm"] = r.lcm;
  out.data["minimal_period"] = r.minimal_period ? json(*r.minimal_period) : json(nullptr);
  out.data["smaller_than_lcm"] = r.smaller_than_lcm;
  json sets = json::array();
  for (long n = 0; n < r.lcm; ++n) {
    json s = json::array();
    for (auto [pt, pos] : r.sets[static_cast<std::size_t>(n)]) s.push_back({pt, pos});
    sets.push_back(s);
  }
  out.data["kernel_sets"] = sets;
  out.suites.push_back(ladder_suite(c.wd, qq, c.range));
}

TripleOptions stable_options(const std::string& profile, std::uint64_t seed) {
  TripleOptions opt;
  if (profile == "quick") {
    opt.lines = 1;
    opt.extensions = 2;
    opt.sequences = 10;
  } else if (profile != "full") {
    throw std::invalid_argument("unknown profile '" + profile + "'");
  }
  opt.seed = seed;
  return opt;
}

void cmd_stable(const Config& c, Outcome& out, bool points_given) {
  if (c.wd.levels() != 3) throw std::invalid_argument("stable-check needs three weights");
  if (points_given && c.points != "inf,0,1") throw std::invalid_argument("stable-check uses the points inf,0,1");
  if (c.q.empty()) throw std::invalid_argument("missing --q");
  auto opt = stable_options(c.profile, c.seed);
  opt.experimental = c.experimental;
  const auto& w = c.wd.weights;
  StableReport rep;
  if (c.q.find(',') == std::string::npos && !c.experimental) {
    auto v = parse_index_seq(c.q);
    rep = triple_ladder_check(w[0], w[1], w[2], v.at(0), opt);
  } else {
    auto seq = parse_index_seq(c.q);
    rep = triple_ladder_check(w[0], w[1], w[2], static_cast<int>(seq.size()), opt, seq);
    out.data["experimental"] = true;
  }
  out.instance = rep.instance;
  out.data["distinguished_sequences"] = rep.distinguished_sequences;
  SuiteReport s;
  s.suite = "stable ladder";
  s.instance = rep.instance;
  s.axioms = rep.axioms;
  s.seconds = rep.seconds;
  out.suites.push_back(std::move(s));
}

void cmd_selftest(const Config& c, Outcome& out) {
  const auto& wd = c.wd;
  AdjointOptions adj;
  adj.seed = c.seed;
  out.suites.push_back(adjoint_suite(wd, adj));
  out.suites.push_back(kernel_image_suite(wd, c.seed));
  out.suites.push_back(tube_suite(wd));
  out.suites.push_back(line_bundle_suite(wd, c.seed));
  VerifyOptions vo;
  vo.seed = c.seed;
  auto tuples = standard_tuples(wd);
  for (auto& qq : tuples) out.suites.push_back(recollement_suite(wd, qq, vo));
  long lcm = 1;
  for (int w : wd.weights) lcm = std::lcm(lcm, static_cast<long>(w));
  for (auto& qq : tuples) out.suites.push_back(ladder_suite(wd, qq, 2 * lcm));
  const std::string& profile = c.profile;
  out.data["stable_profile"] = profile;
  if (profile == "full") {
    for (int p3 : {3, 4})
      for (int q = 0; q <= 2; ++q) out.suites.push_back(stable_suite(2, 3, p3, q, stable_options("full", 11)));
  } else {
    out.suites.push_back(stable_suite(2, 3, 3, 1, stable_options(profile, 11)));
  }
  EulerOptions eo;
  eo.seed = c.seed;
  out.suites.push_back(euler_suite({wd}, eo));
  json counts = json::array();
  for (auto& s : out.suites) counts.push_back({{"suite", s.suite}, {"instance", s.instance}, {"checks", s.checks()}});
  out.data["suites"] = counts;
}

// ---- output -------------------------------------------------------------------------------------

json to_json(const Outcome& o, bool timing) {
  json j;
  j["command"] = o.command;
  j["instance"] = o.instance;
  j["status"] = o.status();
  if (o.error) j["error"] = *o.error;
  j["data"] = o.data;
  json res = json::array();
  for (auto& s : o.suites)
    for (auto& a : s.axioms)
      res.push_back({{"suite", s.suite},
                     {"instance", s.instance},
                     {"axiom", a.axiom},
                     {"status", a.pass ? "pass" : "fail"},
                     {"witness", a.pass ? json(nullptr) : json(a.witness)},
                     {"checks", a.checks}});
  j["results"] = res;
  if (timing) {
    json t;
    t["seconds"] = o.seconds;
    json per = json::array();
    for (auto& s : o.suites) per.push_back({{"suite", s.suite}, {"instance", s.instance}, {"seconds", s.seconds}});
    t["suites"] = per;
    j["timing"] = t;
  } else {
    j["timing"] = nullptr;
  }
  return j;
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void print_text(const Outcome& o, bool timing) {
  std::cout << o.command << " " << o.instance << "\n";
  if (o.error) {
    std::cout << "error: " << *o.error << "\n";
    return;
  }
  for (auto& [k, v] : o.data.items()) {
    if (k == "kernel_sets" || k == "suites") continue;
    std::cout << "  " << k << ": " << scalar_text(v) << "\n";
  }
  for (auto& s : o.suites) {
    std::cout << s.suite << " " << s.instance;
    if (timing) std::cout << " (" << s.seconds << " s)";
    std::cout << "\n";
    for (auto& a : s.axioms) {
      std::cout << "  " << (a.pass ? "PASS " : "FAIL ") << a.axiom << " [" << a.checks << " checks]";
      if (!a.pass) std::cout << ": " << a.witness;
      std::cout << "\n";
    }
  }
  std::cout << "status: " << o.status() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations on weighted projective lines"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--weights", c.weights, "weights, e.g. 2,3");
  auto* points = app.add_option("--points", c.points, "weighted points, default inf,0,1,...");
  app.add_option("--field", c.field, "Q or a prime")->envname("WPL_FIELD");
  app.add_option("--seed", c.seed, "corpus seed")->envname("WPL_SEED");
  app.add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--timing", c.timing, "include wall-clock timings");

  auto* build = app.add_subcommand("build", "parse an object and print its canonical form");
  build->add_option("--object", c.object, "object expression");
  build->add_option("--level", c.level, "tower level, default the top");

  auto* hom = app.add_subcommand("hom", "dimensions of Hom and Ext^1");
  auto* ext = app.add_subcommand("ext", "dimensions of Ext^1 in both directions");
  for (auto* s : {hom, ext}) {
    s->add_option("--source", c.source, "source object");
    s->add_option("--target", c.target, "target object");
    s->add_option("--level", c.level, "tower level, default the top");
  }

  auto* reduce = app.add_subcommand("reduce", "apply psi^i");
  auto* insert = app.add_subcommand("insert", "apply psi_i");
  for (auto* s : {reduce, insert}) {
    s->add_option("--object", c.object, "object expression");
    s->add_option("--level", c.level, "tower level, default the top");
    s->add_option("--i", c.i, "index or increasing index sequence, e.g. 1 or 0,1");
    s->add_option("--at", c.at, "weighted point (1-based), default the object level");
    s->add_option("--q", c.q, "one sequence per weighted point, e.g. \"0;1\"");
  }

  auto* rec = app.add_subcommand("recollement", "verify the recollement for q");
  rec->add_option("--q", c.q, "one sequence per weighted point, e.g. \"0;1\"");

  auto* ladder = app.add_subcommand("ladder", "kernel-set periodicity of the ladder");
  ladder->add_option("--q", c.q, "one sequence per weighted point");
  ladder->add_option("--range", c.range, "largest shift n")->required();

  auto* stable = app.add_subcommand("stable-check", "stable ladder checks for a weight triple");
  stable->add_option("--q", c.q, "q, or an index sequence with --experimental");
  stable->add_flag("--experimental", c.experimental, "allow sequences other than (1..q)");
  stable->add_option("--profile", c.profile, "full or quick")->check(CLI::IsMember({"full", "quick"}));

  auto* self = app.add_subcommand("selftest", "run every verification suite");
  self->add_option("--profile", c.profile, "stable ladder profile: full or quick")->check(CLI::IsMember({"full", "quick"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Outcome out;
  out.command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Scalar::set_prime(parse_field(c.field));
    if (c.points.empty()) c.points = default_points(dsl_detail::split(c.weights, ',').size());
    c.wd = parse_weight_data(c.weights, c.points);
    out.instance = weights_str(c.wd);
    if (build->parsed()) cmd_build(c, out);
    else if (hom->parsed()) cmd_hom(c, out, false);
    else if (ext->parsed()) cmd_hom(c, out, true);
    else if (reduce->parsed()) cmd_functor(c, out, true);
    else if (insert->parsed()) cmd_functor(c, out, false);
    else if (rec->parsed()) cmd_recollement(c, out);
    else if (ladder->parsed()) cmd_ladder(c, out);
    else if (stable->parsed()) cmd_stable(c, out, points->count() > 0);
    else if (self->parsed()) cmd_selftest(c, out);
  } catch (const std::logic_error& e) {
    out.error = e.what();
  } catch (const std::exception& e) {
    SuiteReport s;
    s.suite = out.command;
    s.instance = out.instance;
    s.axioms.push_back({"evaluation", false, e.what(), 1});
    out.suites.push_back(std::move(s));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (c.format == "json") std::cout << to_json(out, c.timing).dump(2) << "\n";
  else print_text(out, c.timing);
  return out.exit_code();
}
