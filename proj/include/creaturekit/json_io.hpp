#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "creaturekit/audit.hpp"
#include "creaturekit/creature.hpp"
#include "creaturekit/fc_order.hpp"
#include "creaturekit/hall.hpp"
#include "creaturekit/measured_tree.hpp"
#include "creaturekit/systems.hpp"
#include "creaturekit/tree_candidate.hpp"

namespace creaturekit::json {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  require(j.is_object(), std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  require(it != j.end(), std::string("missing field '") + key + "'");
  return *it;
}

inline int as_int(const Json& j, const char* what) {
  require(j.is_number_integer(), std::string(what) + " must be an integer");
  const auto v = j.get<long long>();
  require(v >= INT32_MIN && v <= INT32_MAX, std::string(what) + " out of range");
  return static_cast<int>(v);
}

inline int int_field(const Json& j, const char* key) { return as_int(field(j, key), key); }

inline std::vector<int> int_list(const Json& j, const char* what) {
  require(j.is_array(), std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// scalars

inline Json to_json(const Rational& r) { return to_string(r); }

/// Integer, [num, den] pair, or "p/q" string.
inline Rational rational_from(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_array()) {
    require(j.size() == 2, "rational pair must be [num, den]");
    auto part = [](const Json& x, const char* what) -> BigInt {
      if (x.is_number_integer()) return BigInt(x.get<long long>());
      require(x.is_string(), std::string(what) + " must be an integer");
      try {
        return BigInt(x.get<std::string>());
      } catch (const std::runtime_error&) {
        throw InvalidInput(std::string("malformed ") + what);
      }
    };
    const BigInt den = part(j[1], "denominator");
    require(den != 0, "zero denominator");
    return Rational(part(j[0], "numerator"), den);
  }
  require(j.is_string(), "rational must be an integer, [num, den] or \"p/q\"");
  const auto s = j.get<std::string>();
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt den(s.substr(slash + 1));
    require(den != 0, "zero denominator");
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw InvalidInput("malformed rational '" + s + "'");
  }
}

inline Json norm_json(const Norm& n) {
  return Json{{"scale", scale_name(n.scale())}, {"pre", to_json(n.pre())}, {"value", n.value()}};
}

inline Norm norm_from(const Json& j) {
  const auto scale = detail::field(j, "scale").get<std::string>();
  const Rational pre = rational_from(detail::field(j, "pre"));
  if (scale == "linear") return Norm::linear(pre);
  if (scale == "log4") return Norm::logarithmic(NormScale::log4, pre);
  if (scale == "log8") return Norm::logarithmic(NormScale::log8, pre);
  throw InvalidInput("unknown norm scale '" + scale + "'");
}

inline Seq seq_from(const Json& j) { return detail::int_list(j, "sequence"); }
inline Json seq_json(const Seq& s) { return Json(s); }

inline Json seqs_json(const std::vector<Seq>& ss) {
  Json a = Json::array();
  for (const auto& s : ss) a.push_back(seq_json(s));
  return a;
}

// ---------------------------------------------------------------------------------------------
// partial functions and families

inline HSpecPtr hspec_from(const Json& j) { return make_hspec(detail::int_list(detail::field(j, "sizes"), "sizes")); }

inline Json pf_json(const PartialFn& f) {
  Json a = Json::array();
  for (const auto& [l, v] : f.entries()) a.push_back(Json::array({l, v}));
  return Json{{"f", a}};
}

inline PartialFn pf_from(const Json& j, const HSpec& h) {
  const auto& f = detail::field(j, "f");
  require(f.is_array(), "'f' must be an array of [index, value] pairs");
  std::vector<PartialFn::Entry> es;
  for (const auto& e : f) {
    require(e.is_array() && e.size() == 2, "partial function entries are [index, value] pairs");
    es.emplace_back(detail::as_int(e[0], "index"), detail::as_int(e[1], "value"));
  }
  return PartialFn(std::move(es), h);
}

inline Json members_json(const Family& d) {
  Json a = Json::array();
  for (const auto& f : d.members()) a.push_back(pf_json(f));
  return a;
}

inline Family members_from(const Json& j, const HSpecPtr& h) {
  require(j.is_array(), "'delta' must be an array");
  std::vector<PartialFn> fs;
  for (const auto& x : j) fs.push_back(pf_from(x, *h));
  return Family(std::move(fs), h);
}

/// {"sizes":[...],"delta":[{"f":[[i,v],...]},...]}
inline Family family_from(const Json& j) { return members_from(detail::field(j, "delta"), hspec_from(j)); }

inline Json family_json(const Family& d) { return Json{{"sizes", d.hspec().sizes()}, {"delta", members_json(d)}}; }

inline Json selector_json(const Selector& s) {
  Json picks = Json::array();
  for (const auto& p : s.picks) picks.push_back(Json(p));
  return Json{{"k", s.k}, {"picks", picks}};
}

inline Json violation_json(const std::optional<HallViolation>& v) {
  if (!v) return nullptr;
  return Json{{"k", v->k}, {"members", v->members}, {"union_size", v->union_size}};
}

// ---------------------------------------------------------------------------------------------
// systems and creatures

inline Json system_json(const ExampleSystem& sys);

inline Json system_json(const ExampleSystem& sys) {
  Json j{{"kind", kind_name(sys.kind)}};
  switch (sys.kind) {
    case CreatureKind::loc628:
      j["sizes"] = sys.codec->fine->sizes();
      j["bounds"] = sys.codec->bounds;
      break;
    case CreatureKind::edrf:
      j["sizes"] = sys.h().sizes();
      j["effective"] = sys.effective;
      break;
    case CreatureKind::dual:
      j["base"] = system_json(*sys.base);
      break;
    default:
      j["sizes"] = sys.h().sizes();
  }
  return j;
}

inline Json creature_json(const Creature& c);
inline Creature creature_from(const ExampleSystem& sys, const Json& j);

inline ExampleSystem system_from(const Json& j) {
  const CreatureKind kind = parse_kind(detail::field(j, "kind").get<std::string>());
  switch (kind) {
    case CreatureKind::generic: return generic_system(hspec_from(j));
    case CreatureKind::bas628:
    case CreatureKind::bas628bis: return bas628_system(hspec_from(j), kind);
    case CreatureKind::loc628:
      return loc628_system(hspec_from(j), detail::int_list(detail::field(j, "bounds"), "bounds"));
    case CreatureKind::edrf: {
      std::optional<std::vector<int>> eff;
      if (j.contains("effective")) eff = detail::int_list(j["effective"], "effective");
      return edrf_system(hspec_from(j), eff);
    }
    case CreatureKind::omitex: return omitex_system(hspec_from(j));
    case CreatureKind::loctree: return loctree_system(hspec_from(j));
    case CreatureKind::dual: {
      auto base = std::make_shared<const ExampleSystem>(system_from(detail::field(j, "base")));
      std::vector<Creature> ref;
      const auto& r = detail::field(j, "reference");
      require(r.is_array(), "'reference' must be an array of creatures");
      for (const auto& c : r) ref.push_back(creature_from(*base, c));
      return dual_system(std::move(base), std::move(ref));
    }
  }
  throw InvalidInput("unknown system kind");
}

/// Dual systems carry their reference creatures alongside the base description.
inline Json system_json_full(const ExampleSystem& sys) {
  Json j = system_json(sys);
  if (sys.kind == CreatureKind::dual) {
    Json r = Json::array();
    for (const auto& c : sys.reference) r.push_back(creature_json(c));
    j["reference"] = r;
  }
  return j;
}

inline Json payload_json(const Creature& c) {
  Json p = Json::object();
  std::visit(
      [&](const auto& x) {
        using P = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<P, GenericPayload>) {
          p["nor"] = Json{{"scale", scale_name(x.nor.scale())}, {"pre", to_json(x.nor.pre())}};
          if (x.allowed) p["allowed"] = seqs_json(*x.allowed);
          if (x.pairs) {
            Json a = Json::array();
            for (const auto& [u, v] : *x.pairs) a.push_back(Json::array({seq_json(u), seq_json(v)}));
            p["pairs"] = a;
          }
        } else if constexpr (std::is_same_v<P, HallPayload>) {
          p["delta"] = x.delta ? members_json(*x.delta) : Json(nullptr);
        } else if constexpr (std::is_same_v<P, ExcludePayload>) {
          p["excluded"] = x.excluded;
        } else {
          p["base"] = creature_json(*x.base);
        }
      },
      c.payload());
  return p;
}

/// {"m_dn":..,"m_up":..,"system":kind,"payload":{..},"nor":{..}}; "nor" is informative on output.
inline Json creature_json(const Creature& c) {
  return Json{{"m_dn", c.m_dn()},
              {"m_up", c.m_up()},
              {"system", kind_name(c.kind())},
              {"payload", payload_json(c)},
              {"nor", norm_json(c.nor())}};
}

inline Creature creature_from(const ExampleSystem& sys, const Json& j) {
  const int m_dn = detail::int_field(j, "m_dn");
  const int m_up = detail::int_field(j, "m_up");
  if (j.contains("system")) {
    const auto k = parse_kind(j["system"].get<std::string>());
    require(k == sys.kind, std::string("creature of kind ") + kind_name(k) + " given to a " + kind_name(sys.kind) +
                               " system");
  }
  const auto& p = detail::field(j, "payload");
  switch (sys.kind) {
    case CreatureKind::generic: {
      GenericPayload g;
      g.nor = norm_from(detail::field(p, "nor"));
      if (p.contains("allowed")) {
        std::vector<Seq> a;
        for (const auto& s : p["allowed"]) a.push_back(seq_from(s));
        g.allowed = std::move(a);
      }
      if (p.contains("pairs")) {
        std::vector<std::pair<Seq, Seq>> a;
        for (const auto& uv : p["pairs"]) {
          require(uv.is_array() && uv.size() == 2, "val pairs are [u, v]");
          a.emplace_back(seq_from(uv[0]), seq_from(uv[1]));
        }
        g.pairs = std::move(a);
      }
      require(m_up <= static_cast<int>(sys.h().length()), "creature extends beyond the alphabet window");
      Norm nor = g.nor;
      return Creature(CreatureKind::generic, m_dn, m_up, nor, std::move(g));
    }
    case CreatureKind::bas628:
    case CreatureKind::bas628bis:
    case CreatureKind::loc628: {
      const auto& d = detail::field(p, "delta");
      std::optional<Family> fam;
      if (!d.is_null() && !(d.is_array() && d.empty())) fam = members_from(d, sys.family_hspec());
      return make_family_creature(sys, m_dn, m_up, std::move(fam));
    }
    case CreatureKind::edrf:
    case CreatureKind::omitex: {
      require(m_up == m_dn + 1, "local creatures span one level");
      return make_excluded_creature(sys, m_dn, detail::int_list(detail::field(p, "excluded"), "excluded"));
    }
    case CreatureKind::dual: {
      Json base = detail::field(p, "base");
      auto c = dual_creature(sys, creature_from(*sys.base, base));
      if (!c) throw InvalidInput("dual creature has no possibility");
      require(c->m_dn() == m_dn && c->m_up() == m_up, "dual creature interval differs from its base");
      return *c;
    }
    case CreatureKind::loctree:
      throw InvalidInput("loctree creatures are tree creatures: give {\"eta\":[..],\"payload\":{\"excluded\":[..]}}");
  }
  throw InvalidInput("unknown system kind");
}

inline std::vector<Creature> creatures_from(const ExampleSystem& sys, const Json& j) {
  require(j.is_array(), "creatures must be an array");
  std::vector<Creature> out;
  for (const auto& c : j) out.push_back(creature_from(sys, c));
  return out;
}

inline Json creatures_json(std::span<const Creature> cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(creature_json(c));
  return a;
}

inline Json tree_creature_json(const TreeCreature& t) {
  return Json{{"eta", seq_json(t.eta)},
              {"system", "loctree"},
              {"payload", Json{{"excluded", t.excluded}}},
              {"successors", t.successors},
              {"nor", norm_json(t.nor)}};
}

inline TreeCreature tree_creature_from(const ExampleSystem& sys, const Json& j) {
  return make_loctree_creature(sys, seq_from(detail::field(j, "eta")),
                               detail::int_list(detail::field(detail::field(j, "payload"), "excluded"), "excluded"));
}

inline Json candidate_json(const FiniteCandidate& c) {
  return Json{{"w", seq_json(c.w)}, {"creatures", creatures_json(c.creatures)}};
}

inline FiniteCandidate candidate_from(const ExampleSystem& sys, const Json& j) {
  return FiniteCandidate{seq_from(detail::field(j, "w")), creatures_from(sys, detail::field(j, "creatures"))};
}

inline Json op_json(const FcOp& op) {
  Json j{{"op", op_name(op)}};
  if (const auto* d = std::get_if<Decide>(&op)) {
    j["w_star"] = seq_json(d->w_star);
    j["consumed"] = d->consumed;
  } else if (const auto* c = std::get_if<Compose>(&op)) {
    j["block_sizes"] = c->block_sizes;
    j["replacements"] = creatures_json(c->replacements);
  } else {
    Json a = Json::array();
    for (const auto& s : std::get<Decompose>(op).splittings) a.push_back(creatures_json(s));
    j["splittings"] = a;
  }
  return j;
}

// ---------------------------------------------------------------------------------------------
// measured trees

struct TreeSpace {
  HSpecPtr h;
  int depth = 0;
  std::vector<Weights> weights;
};

inline Weights weights_from(const Json& j) {
  require(j.is_array(), "weights must be an array of [num, den] pairs");
  Weights w;
  for (const auto& x : j) w.push_back(rational_from(x));
  return w;
}

inline Json weights_json(const Weights& w) {
  Json a = Json::array();
  auto part = [](const BigInt& v) -> Json {
    if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<long long>(v);
    return v.str();
  };
  for (const auto& x : w) a.push_back(Json::array({part(numerator(x)), part(denominator(x))}));
  return a;
}

namespace detail {

inline void reject_functionals(const Json& j) {
  for (const char* key : {"ultrafilter", "D", "functional"})
    if (j.contains(key) && !j[key].is_null() && !(j[key].is_array() && j[key].empty()) &&
        !(j[key].is_string() && j[key] == "sum"))
      throw UnsupportedFunctional(std::string("ultrafilter-limit functionals are not supported (field '") + key + "')");
}

}  // namespace detail

/// {"sizes":[...],"weights":[[[num,den],...] per level]}; depth is the number of weight levels.
inline TreeSpace tree_space_from(const Json& j) {
  detail::reject_functionals(j);
  TreeSpace s;
  s.h = hspec_from(j);
  const auto& w = detail::field(j, "weights");
  require(w.is_array(), "'weights' must list one weight vector per level");
  for (const auto& lv : w) s.weights.push_back(weights_from(lv));
  s.depth = static_cast<int>(s.weights.size());
  return s;
}

/// Nested {"children":{"value": subtree,...}}; null is the empty tree. A node may carry its own
/// "weights" overriding the level weights.
inline MeasuredTree tree_from(const TreeSpace& sp, const Json& root) {
  if (root.is_null()) return MeasuredTree::empty(sp.h, sp.depth, sp.weights);
  std::set<Seq> nodes;
  std::map<Seq, Weights> nw;
  std::function<void(const Json&, Seq&)> rec = [&](const Json& n, Seq& eta) {
    require(n.is_object(), "tree nodes must be objects");
    detail::reject_functionals(n);
    require(static_cast<int>(eta.size()) <= sp.depth, "tree deeper than its weight levels");
    nodes.insert(eta);
    if (n.contains("weights")) nw[eta] = weights_from(n["weights"]);
    if (!n.contains("children")) return;
    const auto& ch = n["children"];
    require(ch.is_object(), "'children' must map values to subtrees");
    for (const auto& [key, sub] : ch.items()) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(key, &used);
        require(used == key.size(), "");
      } catch (const std::exception&) {
        throw InvalidInput("child key '" + key + "' is not a decimal value");
      }
      eta.push_back(v);
      rec(sub, eta);
      eta.pop_back();
    }
  };
  Seq root_seq;
  rec(root, root_seq);
  return MeasuredTree(sp.h, sp.depth, std::move(nodes), sp.weights, std::move(nw));
}

inline Json tree_node_json(const MeasuredTree& t, const Seq& eta) {
  Json n = Json::object();
  auto it = t.node_weights().find(eta);
  if (it != t.node_weights().end()) n["weights"] = weights_json(it->second);
  if (t.is_leaf(eta)) return n;
  Json ch = Json::object();
  Seq c = eta;
  c.push_back(0);
  for (Value k : t.children(eta)) {
    c.back() = k;
    ch[std::to_string(k)] = tree_node_json(t, c);
  }
  n["children"] = ch;
  return n;
}

inline Json tree_json(const MeasuredTree& t) {
  if (t.is_empty()) return nullptr;
  return tree_node_json(t, Seq{});
}

inline Json tree_space_json(const MeasuredTree& t) {
  Json w = Json::array();
  for (const auto& lv : t.level_weights()) w.push_back(weights_json(lv));
  return Json{{"sizes", t.hspec()->sizes()}, {"weights", w}};
}

// ---------------------------------------------------------------------------------------------
// audits

inline Json audit_json(const AuditReport& r) {
  Json cs = Json::array();
  for (const auto& c : r.clauses) cs.push_back(Json{{"clause", c.clause}, {"pass", c.pass}, {"witness", c.witness}});
  return Json{{"subject", r.subject}, {"prefix_valid", r.prefix_valid()}, {"clauses", cs}};
}

/// {"K":[[...],...],"g":[{"rho":[...],"values":[[i,v],...]},...]}
inline NormingSystem1 norming1_from(const Json& j) {
  NormingSystem1 ns;
  for (const auto& k : detail::field(j, "K")) ns.K.push_back(detail::int_list(k, "K"));
  for (const auto& e : detail::field(j, "g")) {
    auto& m = ns.g[seq_from(detail::field(e, "rho"))];
    for (const auto& iv : detail::field(e, "values")) {
      require(iv.is_array() && iv.size() == 2, "g values are [index, value] pairs");
      m[detail::as_int(iv[0], "index")] = detail::as_int(iv[1], "value");
    }
  }
  return ns;
}

inline Json norming1_json(const NormingSystem1& ns) {
  Json g = Json::array();
  for (const auto& [rho, m] : ns.g) {
    Json vals = Json::array();
    for (const auto& [i, v] : m) vals.push_back(Json::array({i, v}));
    g.push_back(Json{{"rho", seq_json(rho)}, {"values", vals}});
  }
  return Json{{"K", ns.K}, {"g", g}};
}

/// {"U":[{"rho":[...],"k":k,"set":[...]},...]}
inline NormingSystem2 norming2_from(const Json& j) {
  NormingSystem2 ns;
  for (const auto& e : detail::field(j, "U"))
    ns.U[{seq_from(detail::field(e, "rho")), detail::int_field(e, "k")}] = detail::int_list(detail::field(e, "set"), "set");
  return ns;
}

inline Json norming2_json(const NormingSystem2& ns) {
  Json u = Json::array();
  for (const auto& [key, set] : ns.U) u.push_back(Json{{"rho", seq_json(key.first)}, {"k", key.second}, {"set", set}});
  return Json{{"U", u}};
}

/// {"ell":[...],"g":[{"rho":[...],"sets":[[...] per level]},...]}
inline SournessSystem sourness_from(const Json& j) {
  SournessSystem ss;
  ss.ell = detail::int_list(detail::field(j, "ell"), "ell");
  for (const auto& e : detail::field(j, "g")) {
    std::vector<std::vector<Value>> sets;
    for (const auto& s : detail::field(e, "sets")) sets.push_back(detail::int_list(s, "sets"));
    ss.g[seq_from(detail::field(e, "rho"))] = std::move(sets);
  }
  return ss;
}

inline Json sourness_json(const SournessSystem& ss) {
  Json g = Json::array();
  for (const auto& [rho, sets] : ss.g) g.push_back(Json{{"rho", seq_json(rho)}, {"sets", sets}});
  return Json{{"ell", ss.ell}, {"g", g}};
}

// ---------------------------------------------------------------------------------------------
// tree candidates

/// Node list closed under prefixes before use; every creature is universal-meager.
inline FiniteTreeCandidate um_candidate_from(const Json& j) {
  auto h = hspec_from(j);
  std::set<Seq> nodes{Seq{}};
  for (const auto& n : detail::field(j, "nodes")) {
    const Seq s = seq_from(n);
    for (std::size_t i = 0; i <= s.size(); ++i) nodes.emplace(s.begin(), s.begin() + static_cast<long>(i));
  }
  return um_candidate(std::move(h), detail::int_field(j, "lev"), std::move(nodes));
}

inline RBar rbar_from(const Json& j) {
  RBar r;
  if (j.is_null()) return r;
  require(j.is_array(), "'r' must be an array of [index, value] pairs");
  for (const auto& iv : j) {
    require(iv.is_array() && iv.size() == 2, "'r' entries are [index, value] pairs");
    r[detail::as_int(iv[0], "index")] = iv[1].get<long long>();
  }
  return r;
}

}  // namespace creaturekit::json
