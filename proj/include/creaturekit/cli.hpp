#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "creaturekit/json_io.hpp"
#include "creaturekit/oracles.hpp"

namespace creaturekit::cli {

using json::Json;

struct Options {
  std::string command;
  std::string what;  // audit / gen target
  std::string in;
  bool oracle = false;
  std::uint64_t seed = 0;
  bool pretty = false;
  bool echo = false;
  bool timing = false;
  bool heuristic = false;
  std::optional<std::size_t> max_members, max_domain, max_refined;
  std::size_t budget = 20000;
  std::string system, payload, lemma, kind = "cmz";
  int N = 16;
  int level = 0;
  int kmax = 4;
  int k0 = 0;
};

/// Accumulates one command's output.
struct Run {
  Json result = Json::object();
  Json checks = Json::array();
  Json input;
  bool failed = false;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    Json c{{"name", name}, {"pass", pass}};
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(std::move(c));
    failed = failed || !pass;
  }
};

namespace detail {

inline Json parse_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + where + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// A report fed back in is unwrapped to its echoed input, else its result.
inline Json unwrap(Json j) {
  if (j.is_object() && j.contains("command") && (j.contains("input") || j.contains("result")))
    return j.contains("input") ? Json(j["input"]) : Json(j["result"]);
  return j;
}

/// Inline JSON when the text starts with '{' or '[', a file path otherwise.
inline Json load_arg(const std::string& s, const char* what) {
  const auto p = s.find_first_not_of(" \t\n");
  if (p != std::string::npos && (s[p] == '{' || s[p] == '['))
    return unwrap(parse_text(s, std::string("--") + what));
  return unwrap(parse_text(read_file(s), s));
}

inline std::string show(const Rational& r) { return to_string(r); }

}  // namespace detail

class Dispatcher {
 public:
  Dispatcher(const Options& o, std::istream& in) : o_(o), in_(in) {
    caps_ = Caps::from_env();
    if (o.max_members) caps_.max_members = *o.max_members;
    if (o.max_domain) caps_.max_domain_total = *o.max_domain;
    if (o.max_refined) caps_.max_refined_domain_total = *o.max_refined;
  }

  void run(Run& r) {
    const auto& c = o_.command;
    if (c == "hn" || c == "hnplus" || c == "hall") return hall(r);
    if (c == "pos") return pos(r);
    if (c == "fc-validate") return fc_validate(r);
    if (c == "fc-leq") return fc_leq(r);
    if (c == "nor") return nor(r);
    if (c == "link") return link_cmd(r);
    if (c == "cut") return cut_cmd(r);
    if (c == "escape") return escape(r);
    if (c == "dual") return dual(r);
    if (c == "mt-mu") return mt_mu(r);
    if (c == "mt-check") return mt_check(r);
    if (c == "audit") return audit(r);
    if (c == "gen") return gen(r);
    if (c == "gcheck") return gcheck(r);
    throw InvalidInput("unknown subcommand '" + c + "'");
  }

 private:
  const Json& input() {
    if (!loaded_) {
      if (!o_.in.empty()) doc_ = detail::unwrap(detail::parse_text(detail::read_file(o_.in), o_.in));
      else {
        std::ostringstream ss;
        ss << in_.rdbuf();
        doc_ = detail::unwrap(detail::parse_text(ss.str(), "standard input"));
      }
      loaded_ = true;
    }
    return doc_;
  }

  ExampleSystem system() {
    Json sj = !o_.system.empty() ? detail::load_arg(o_.system, "system") : Json(json::detail::field(input(), "system"));
    auto sys = json::system_from(sj);
    sys.caps = caps_;
    return sys;
  }

  // ---- Hall norms

  void hall(Run& r) {
    const Family d = json::family_from(input());
    r.input = json::family_json(d);
    const auto& c = o_.command;
    std::optional<int> hn, hp, HN;
    if (c == "hn") {
      hn = hall_norm(d, caps_);
      r.result["hn"] = *hn;
    } else if (c == "hnplus") {
      hp = selector_norm(d, caps_);
      const auto w = selector_norm_by_matching(d, caps_);
      r.result["hn_plus"] = *hp;
      r.result["selector"] = json::selector_json(w.selector);
      r.result["obstruction"] = json::violation_json(w.obstruction);
      r.check("formula route equals matching route", w.value == *hp,
              "formula " + std::to_string(*hp) + ", matching " + std::to_string(w.value));
    } else {
      const auto rep = hall_report(d, caps_);
      hn = rep.hn;
      hp = rep.hn_plus;
      HN = rep.HN;
      r.result["hn"] = rep.hn;
      r.result["hn_plus"] = rep.hn_plus;
      r.result["HN"] = rep.HN;
      r.result["selector"] = json::selector_json(rep.selector);
      r.result["obstruction"] = json::violation_json(rep.obstruction);
      r.result["refinement"] = rep.refinement ? json::members_json(*rep.refinement) : Json(nullptr);
      r.check("1 <= hn <= hn_plus <= HN", 1 <= rep.hn && rep.hn <= rep.hn_plus && rep.hn_plus <= rep.HN);
    }
    if (!o_.oracle) return;
    const auto& fs = d.members();
    Json orc = Json::object();
    auto cmp = [&](const char* name, const std::optional<int>& got, int want) {
      orc[name] = want;
      if (got) r.check(std::string("oracle agrees on ") + name, *got == want,
                       "production " + std::to_string(*got) + ", oracle " + std::to_string(want));
    };
    if (hn) cmp("hn", hn, oracle::hall_norm(fs));
    if (hp) cmp("hn_plus", hp, oracle::selector_norm(fs));
    if (HN) cmp("HN", HN, oracle::refined_hall_norm(fs));
    r.result["oracle"] = orc;
  }

  // ---- creatures and candidates

  void pos(Run& r) {
    const auto sys = system();
    const auto c = json::candidate_from(sys, input());
    r.input = Json{{"system", json::system_json_full(sys)}, {"w", json::seq_json(c.w)},
                   {"creatures", json::creatures_json(c.creatures)}};
    const auto p = creaturekit::pos(sys.h(), c.w, c.creatures);
    r.result["count"] = p.size();
    r.result["pos"] = json::seqs_json(p);
    if (o_.oracle) {
      const auto q = oracle::pos_bruteforce(sys.h(), c.w, c.creatures);
      r.result["oracle_count"] = q.size();
      r.check("oracle agrees on pos", p == q);
    }
  }

  void fc_validate(Run& r) {
    const auto sys = system();
    const auto c = json::candidate_from(sys, json::detail::field(input(), "candidate"));
    const bool allow_empty = input().value("allow_empty", false);
    r.input = Json{{"system", json::system_json_full(sys)}, {"candidate", json::candidate_json(c)},
                   {"allow_empty", allow_empty}};
    const auto v = candidate_violation(sys.h(), c, allow_empty);
    r.result["valid"] = !v.has_value();
    r.result["reason"] = v ? Json(*v) : Json(nullptr);
    r.check("candidate is valid", !v, v.value_or(""));
  }

  void fc_leq(Run& r) {
    const auto sys = system();
    const auto c0 = json::candidate_from(sys, json::detail::field(input(), "c0"));
    const auto c1 = json::candidate_from(sys, json::detail::field(input(), "c1"));
    r.input = Json{{"system", json::system_json_full(sys)}, {"c0", json::candidate_json(c0)},
                   {"c1", json::candidate_json(c1)}};
    const auto chain = fc_leq_witness(sys, c0, c1, o_.budget);
    r.result["found"] = chain.found;
    r.result["explored"] = chain.explored;
    r.result["budget"] = o_.budget;
    r.result["reason"] = chain.reason;
    Json steps = Json::array();
    for (const auto& s : chain.steps) steps.push_back(json::op_json(s));
    r.result["steps"] = steps;
    r.check("certificate for c0 <= c1 found", chain.found, chain.reason);
    if (!chain.found) return;
    const auto replay = replay_chain(sys, c0, chain.steps, c1);
    r.check("certificate replays", !replay, replay.value_or(""));
    const auto p0 = pos_closure(sys.h(), c0), p1 = pos_closure(sys.h(), c1);
    r.check("POS(c1) within POS(c0)", std::includes(p0.begin(), p0.end(), p1.begin(), p1.end()));
  }

  void nor(Run& r) {
    const auto sys = system();
    const Json cj = !o_.payload.empty() ? detail::load_arg(o_.payload, "payload")
                                        : Json(json::detail::field(input(), "creature"));
    if (sys.kind == CreatureKind::loctree) {
      const auto t = json::tree_creature_from(sys, cj);
      r.input = Json{{"system", json::system_json_full(sys)}, {"creature", json::tree_creature_json(t)}};
      r.result["creature"] = json::tree_creature_json(t);
      r.result["nor"] = json::norm_json(t.nor);
      return;
    }
    const auto t = json::creature_from(sys, cj);
    r.input = Json{{"system", json::system_json_full(sys)}, {"creature", json::creature_json(t)}};
    r.result["creature"] = json::creature_json(t);
    r.result["nor"] = json::norm_json(t.nor());
  }

  void link_cmd(Run& r) {
    const auto sys = system();
    const auto t0 = json::creature_from(sys, json::detail::field(input(), "t0"));
    const auto t1 = json::creature_from(sys, json::detail::field(input(), "t1"));
    r.input = Json{{"system", json::system_json_full(sys)}, {"t0", json::creature_json(t0)},
                   {"t1", json::creature_json(t1)}};
    try {
      const auto res = link(sys, t0, t1);
      r.result["s"] = json::creature_json(res.s);
      r.result["guarantee"] = res.guarantee;
      r.check("link exists", true);
      r.check("s in Sigma(t0) and Sigma(t1)", sigma_member(sys, res.s, t0) && sigma_member(sys, res.s, t1));
    } catch (const PropertyFailure& e) {
      r.result["s"] = nullptr;
      r.check("link exists", false, e.what());
    }
  }

  void cut_cmd(Run& r) {
    const auto sys = system();
    const auto t = json::creature_from(sys, json::detail::field(input(), "t"));
    const int m = json::detail::int_field(input(), "m");
    r.input = Json{{"system", json::system_json_full(sys)}, {"t", json::creature_json(t)}, {"m", m}};
    const auto res = cut(sys, t, m);
    const auto cl = check_cut(sys, t, m, res.s0, res.s1);
    r.result["s0"] = json::creature_json(res.s0);
    r.result["s1"] = json::creature_json(res.s1);
    r.result["construction"] = res.construction;
    r.check("intervals", cl.intervals);
    r.check("norms", cl.norms, "nor[s_l] >= min{nor[t] - 1, m_dn}");
    r.check("membership", cl.membership, "{s0, s1} in Sigma-bottom(t)");
  }

  void escape(Run& r) {
    const auto sys = system();
    const auto s = json::creature_from(sys, json::detail::field(input(), "s"));
    const auto t = json::creature_from(sys, json::detail::field(input(), "t"));
    const Seq u = json::seq_from(json::detail::field(input(), "u"));
    r.input = Json{{"system", json::system_json_full(sys)}, {"s", json::creature_json(s)},
                   {"t", json::creature_json(t)}, {"u", json::seq_json(u)}};
    try {
      const auto res = escape_value(sys, s, t, u);
      r.result["v"] = json::seq_json(res.v);
      r.result["route"] = res.route;
      r.check("(u,v) in val[t] and not in val[s]", t.val_contains(u, res.v) && !s.val_contains(u, res.v));
    } catch (const PropertyFailure& e) {
      r.result["v"] = nullptr;
      r.check("escape value exists", false, e.what());
    }
  }

  void dual(Run& r) {
    const auto sys = system();
    require(sys.kind == CreatureKind::dual, "dual needs a dual system {\"kind\":\"dual\",\"base\":..,\"reference\":..}");
    const auto t = json::creature_from(*sys.base, json::detail::field(input(), "t"));
    r.input = Json{{"system", json::system_json_full(sys)}, {"t", json::creature_json(t)}};
    const auto c = dual_creature(sys, t);
    r.result["dual"] = c ? json::creature_json(*c) : Json(nullptr);
    Json adds = Json::array();
    for (const auto& top : sys.reference) {
      const auto a = additive_audit(*sys.base, top);
      Json w = nullptr;
      if (a.witness) w = Json::array({json::creature_json(a.witness->first), json::creature_json(a.witness->second)});
      adds.push_back(Json{{"level", top.m_dn()}, {"additive", a.additive}, {"pairs_checked", a.pairs_checked},
                          {"witness", w}});
    }
    r.result["reference_additivity"] = adds;
  }

  // ---- measured trees

  void mt_mu(Run& r) {
    const auto sp = json::tree_space_from(input());
    const auto t = json::tree_from(sp, json::detail::field(input(), "tree"));
    r.input = json::tree_space_json(t);
    r.input["tree"] = json::tree_json(t);
    const auto mu = mu_F(t);
    r.result["mu_F"] = json::to_json(mu);
    Json vals = Json::array();
    if (!t.is_empty())
      for (const auto& [eta, v] : mu_values(t)) vals.push_back(Json::array({json::seq_json(eta), json::to_json(v)}));
    r.result["values"] = vals;
    if (o_.oracle) {
      const auto want = oracle::mu_F_fronts(t);
      r.result["oracle"] = json::to_json(want);
      r.check("oracle agrees on mu_F", mu == want, detail::show(mu) + " vs " + detail::show(want));
    }
  }

  void mt_check(Run& r) {
    require(o_.lemma == "mixlem" || o_.lemma == "mixcos" || o_.lemma == "cl11",
            "mt-check needs --lemma mixlem|mixcos|cl11");
    const auto sp = json::tree_space_from(input());
    const auto& tj = json::detail::field(input(), "trees");
    require(tj.is_array() && !tj.empty(), "'trees' must be a nonempty array");
    std::vector<MeasuredTree> ts;
    for (const auto& x : tj) ts.push_back(json::tree_from(sp, x));
    r.input = json::tree_space_json(ts[0]);
    Json tout = Json::array();
    for (const auto& t : ts) tout.push_back(json::tree_json(t));
    r.input["trees"] = tout;
    const auto m = mix_report(ts);
    r.result["lemma"] = o_.lemma;
    r.result["union_mu"] = json::to_json(m.union_mu);
    r.result["sum_mu"] = json::to_json(m.sum_mu);
    r.result["pair_sum"] = json::to_json(m.pair_sum);
    r.result["disjoint"] = m.disjoint;
    if (o_.lemma == "mixcos") {
      r.result["equal"] = m.union_mu == m.sum_mu;
      r.check("mu(union) <= sum of mu", m.subadditive);
      r.check("disjoint trees: mu(union) = sum of mu", m.additive);
    } else if (o_.lemma == "cl11") {
      r.check("mu(union) >= sum of mu - sum of pairwise intersections", m.bonferroni);
    } else {
      r.result["sum_exceeds_one"] = m.sum_mu > 1;
      r.result["positive_intersection"] = m.pair_sum > 0;
      r.check("sum of mu > 1 implies a pair meets in positive measure", m.compatible);
    }
  }

  // ---- audits and generators

  void audit_report(Run& r, const AuditReport& rep) {
    r.result["audit"] = json::audit_json(rep);
    for (const auto& c : rep.clauses) r.check(c.clause, c.pass, c.witness);
  }

  void audit(Run& r) {
    const auto& w = o_.what;
    if (w == "norming1") {
      const auto h = json::hspec_from(input());
      const auto ns = json::norming1_from(input());
      r.input = json::norming1_json(ns);
      r.input["sizes"] = h->sizes();
      audit_report(r, audit_norming1(*h, ns));
    } else if (w == "norming2") {
      const auto ns = json::norming2_from(input());
      r.input = json::norming2_json(ns);
      audit_report(r, audit_norming2(ns));
    } else if (w == "sourness") {
      const auto h = json::hspec_from(input());
      const auto ss = json::sourness_from(input());
      r.input = Json{{"sizes", h->sizes()}};
      r.input.update(json::sourness_json(ss));
      audit_report(r, audit_sourness(*h, ss));
      if (o_.heuristic) {
        std::vector<std::vector<Value>> ex;
        if (input().contains("excluded"))
          for (const auto& e : input()["excluded"]) ex.push_back(json::detail::int_list(e, "excluded"));
        else if (o_.k0 >= 0 && static_cast<std::size_t>(o_.k0) < ss.ell.size())
          ex.resize(h->length() - static_cast<std::size_t>(ss.ell[static_cast<std::size_t>(o_.k0)]));
        Json ws = Json::array();
        for (const auto& x : heuristic_delta(*h, ss, o_.k0, ex))
          ws.push_back(Json{{"block", x.block}, {"small_count", x.small_count}, {"pos_escapes", x.pos_escapes}});
        r.result["heuristic"] = Json{{"authoritative", false}, {"k0", o_.k0}, {"windows", ws}};
      }
    } else if (w == "edrf-hlinked") {
      const auto rep = edrf_hlinked_audit(o_.N);
      r.input = Json{{"N", o_.N}};
      r.result = Json{{"N", rep.N}, {"creatures", rep.creatures}, {"pairs", rep.pairs},
                      {"bounds_checked", rep.bounds_checked}, {"regressive", !rep.regressive.has_value()}};
      r.check("every linkable pair meets nor[s] >= h(k)", rep.ok, rep.failure);
    } else if (w == "cohen") {
      const auto sys = system();
      r.input = Json{{"system", json::system_json_full(sys)}, {"level", o_.level}};
      const auto rep = cohen_audit(sys, o_.level);
      r.result = Json{{"level", o_.level}, {"creatures_checked", rep.creatures_checked}};
      r.check("every creature with nor > 1 keeps values inside and outside A_n", rep.ok, rep.failure);
    } else {
      throw InvalidInput("unknown audit '" + w + "'");
    }
  }

  void gen(Run& r) {
    require(o_.what == "sourness", "unknown generator '" + o_.what + "'");
    HSpecPtr h;
    if (!o_.in.empty()) {
      h = json::hspec_from(input());
    } else {
      const auto ell = sourness_levels(o_.kmax);
      std::vector<int> sizes;
      for (int k = 0; k < o_.kmax; ++k)
        for (int n = ell[static_cast<std::size_t>(k)]; n < ell[static_cast<std::size_t>(k + 1)]; ++n)
          sizes.push_back((1 << (k + 1)) + 1);
      if (sizes.empty()) sizes.push_back(2);
      h = make_hspec(sizes);
    }
    const auto ss = gen_edrf_sourness(o_.kmax, *h);
    r.input = Json{{"kmax", o_.kmax}, {"sizes", h->sizes()}};
    r.result = Json{{"sizes", h->sizes()}};
    r.result.update(json::sourness_json(ss));
    const auto rep = audit_sourness(*h, ss);
    for (const auto& c : rep.clauses) r.check(c.clause, c.pass, c.witness);
  }

  void gcheck(Run& r) {
    const GKind kind = parse_gkind(o_.kind);
    const auto fc = json::um_candidate_from(input());
    const int n_dn = json::detail::int_field(input(), "n_dn");
    const int n_up = json::detail::int_field(input(), "n_up");
    const RBar rb = json::rbar_from(input().contains("r") ? Json(input()["r"]) : Json(nullptr));
    Json nodes = Json::array();
    for (const auto& eta : fc.nodes()) nodes.push_back(json::seq_json(eta));
    Json rj = Json::array();
    for (const auto& [i, v] : rb) rj.push_back(Json::array({i, v}));
    r.input = Json{{"sizes", fc.hspec()->sizes()}, {"lev", fc.lev()}, {"nodes", nodes},
                   {"n_dn", n_dn}, {"n_up", n_up}, {"r", rj}};
    r.result["kind"] = kind == GKind::um ? "um" : "cmz";
    r.result["member"] = g_check(kind, fc, n_dn, n_up, rb);
    if (kind == GKind::cmz) r.result["note"] = "cmz reads only dom(r)";
  }

  const Options& o_;
  std::istream& in_;
  Caps caps_;
  Json doc_;
  bool loaded_ = false;
};

inline void emit(std::ostream& out, const Json& j, bool pretty) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }

/// Runs one command line (without the program name); returns the process exit status.
inline int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"creaturekit: Hall norms, creatures, measured trees and audits"};
  app.name("creaturekit");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--in", o.in, "input JSON file (default: standard input)");
  app.add_flag("--oracle", o.oracle, "cross-check against brute-force oracles");
  app.add_option("--seed", o.seed, "seed reported in the run report");
  app.add_flag("--pretty", o.pretty, "indented output");
  app.add_flag("--echo-input", o.echo, "include the canonicalized input");
  app.add_flag("--timing", o.timing, "include wall time in milliseconds");
  app.add_option("--max-members", o.max_members, "cap on family size");
  app.add_option("--max-domain", o.max_domain, "cap on total domain size for hn and hn+");
  app.add_option("--max-refined", o.max_refined, "cap on total domain size for HN");

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> plain{{"hn", "Hall norm of a family"},
                               {"hnplus", "selector norm of a family"},
                               {"hall", "all three norms with witnesses"},
                               {"pos", "possibilities of a sequence of creatures"},
                               {"fc-validate", "validate a finite candidate"},
                               {"fc-leq", "certificate search for c0 <= c1"},
                               {"nor", "norm of a creature"},
                               {"link", "common Sigma-refinement of two creatures"},
                               {"cut", "split a bas628bis creature at a level"},
                               {"escape", "escape value between two creatures"},
                               {"dual", "dual creature and reference additivity"},
                               {"mt-mu", "mu_F of a measured tree"},
                               {"mt-check", "inclusion-exclusion laws on measured trees"},
                               {"audit", "structural audits"},
                               {"gen", "generators"},
                               {"gcheck", "universality set membership"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& s : plain) subs[s.name] = app.add_subcommand(s.name, s.help);
  subs["fc-leq"]->add_option("--budget", o.budget, "candidates to expand")->check(CLI::PositiveNumber);
  for (const char* n : {"nor", "pos", "fc-validate", "fc-leq", "link", "cut", "escape", "dual", "audit"})
    subs[n]->add_option("--system", o.system, "system JSON (inline or file)");
  subs["nor"]->add_option("--payload", o.payload, "creature JSON (inline or file)");
  subs["mt-check"]->add_option("--lemma", o.lemma, "mixlem | mixcos | cl11")
      ->check(CLI::IsMember({"mixlem", "mixcos", "cl11"}));
  subs["audit"]
      ->add_option("what", o.what, "norming1 | norming2 | sourness | edrf-hlinked | cohen")
      ->required()
      ->check(CLI::IsMember({"norming1", "norming2", "sourness", "edrf-hlinked", "cohen"}));
  subs["audit"]->add_option("--N", o.N, "effective size for edrf-hlinked");
  subs["audit"]->add_option("--level", o.level, "level for cohen");
  subs["audit"]->add_flag("--heuristic", o.heuristic, "non-authoritative finite-window look at clause delta");
  subs["audit"]->add_option("--k0", o.k0, "first block for --heuristic");
  subs["gen"]->add_option("what", o.what, "sourness")->required()->check(CLI::IsMember({"sourness"}));
  subs["gen"]->add_option("--kmax", o.kmax, "last block index (0..4)");
  subs["gcheck"]->add_option("--kind", o.kind, "um | cmz")->check(CLI::IsMember({"um", "cmz"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return static_cast<int>(ErrorCode::invalid_input);
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) o.command = name;

  Json report;
  report["command"] = args;
  const auto start = std::chrono::steady_clock::now();
  Run r;
  int code = 0;
  try {
    Dispatcher(o, in).run(r);
    report["result"] = r.result;
    report["checks"] = r.checks;
    code = r.failed ? static_cast<int>(ErrorCode::property_failure) : 0;
  } catch (const Error& e) {
    code = static_cast<int>(e.code());
    report["error"] = Json{{"code", code}, {"message", e.what()}};
  } catch (const nlohmann::json::exception& e) {
    code = static_cast<int>(ErrorCode::invalid_input);
    report["error"] = Json{{"code", code}, {"message", std::string("bad JSON shape: ") + e.what()}};
  } catch (const std::exception& e) {
    code = static_cast<int>(ErrorCode::invalid_input);
    report["error"] = Json{{"code", code}, {"message", e.what()}};
  }
  report["seed"] = o.seed;
  if (o.echo && !r.input.is_null()) report["input"] = r.input;
  if (o.timing)
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (report.contains("error")) err << "error: " << report["error"]["message"].get<std::string>() << '\n';
  emit(out, report, o.pretty);
  return code;
}

}  // namespace creaturekit::cli
