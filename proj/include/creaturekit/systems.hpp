#pragma once

#include <algorithm>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "creaturekit/creature.hpp"
#include "creaturekit/hall.hpp"
#include "creaturekit/tree_creature.hpp"

namespace creaturekit {

/// No common refinement with the required norm exists.
class NoLink : public PropertyFailure {
 public:
  explicit NoLink(const std::string& what) : PropertyFailure(what) {}
};

/// A concrete creature system together with its parameters.
struct ExampleSystem {
  CreatureKind kind = CreatureKind::generic;
  HSpecPtr hspec;                             // alphabet the creatures act on
  std::vector<int> effective;                 // edrf: N_k per level
  std::shared_ptr<const BlockCodec> codec;    // loc628: fine alphabet and blocks
  std::shared_ptr<const ExampleSystem> base;  // dual: underlying local system
  std::vector<Creature> reference;            // dual: reference creature for levels 0, 1, ...
  Caps caps;

  const HSpec& h() const { return *hspec; }

  /// Alphabet of the families inside creatures.
  const HSpecPtr& family_hspec() const { return codec ? codec->fine : hspec; }

  int effective_size(Level k) const {
    require(k >= 0 && static_cast<std::size_t>(k) < effective.size(), "level outside the system window");
    return effective[static_cast<std::size_t>(k)];
  }

  bool local() const {
    return kind == CreatureKind::loc628 || kind == CreatureKind::edrf || kind == CreatureKind::omitex ||
           kind == CreatureKind::dual || kind == CreatureKind::loctree;
  }
  bool family_based() const {
    return kind == CreatureKind::bas628 || kind == CreatureKind::bas628bis || kind == CreatureKind::loc628;
  }
};

inline ExampleSystem generic_system(HSpecPtr h) {
  ExampleSystem s;
  s.kind = CreatureKind::generic;
  s.hspec = std::move(h);
  return s;
}

inline ExampleSystem bas628_system(HSpecPtr h, CreatureKind kind = CreatureKind::bas628) {
  require(kind == CreatureKind::bas628 || kind == CreatureKind::bas628bis, "not a family system kind");
  ExampleSystem s;
  s.kind = kind;
  s.hspec = std::move(h);
  return s;
}

inline ExampleSystem bas628bis_system(HSpecPtr h) { return bas628_system(std::move(h), CreatureKind::bas628bis); }

inline ExampleSystem loc628_system(HSpecPtr fine, std::vector<Level> bounds) {
  ExampleSystem s;
  s.kind = CreatureKind::loc628;
  s.codec = std::make_shared<const BlockCodec>(std::move(fine), std::move(bounds));
  s.hspec = s.codec->coarse();
  return s;
}

inline ExampleSystem edrf_system(HSpecPtr h, std::optional<std::vector<int>> effective = std::nullopt) {
  ExampleSystem s;
  s.kind = CreatureKind::edrf;
  for (std::size_t k = 0; k < h->length(); ++k)
    require(h->sizes()[k] >= 4, "edrf alphabet at level " + std::to_string(k) + " has fewer than 4 values");
  s.effective = effective ? *effective : h->sizes();
  require(s.effective.size() == h->length(), "effective sizes must cover every level");
  for (int n : s.effective) require(n >= 1, "effective sizes must be positive");
  s.hspec = std::move(h);
  return s;
}

inline ExampleSystem loctree_system(HSpecPtr h) {
  ExampleSystem s;
  s.kind = CreatureKind::loctree;
  s.hspec = std::move(h);
  return s;
}

inline ExampleSystem omitex_system(HSpecPtr h) {
  ExampleSystem s;
  s.kind = CreatureKind::omitex;
  s.hspec = std::move(h);
  return s;
}

// ---------------------------------------------------------------------------------------------
// Creature constructors

namespace detail {

inline void require_kind(const ExampleSystem& sys, std::initializer_list<CreatureKind> ks, const char* op) {
  for (auto k : ks)
    if (sys.kind == k) return;
  throw InvalidInput(std::string(op) + " is not defined for system kind " + kind_name(sys.kind));
}

inline void require_nonempty_val(const Creature& t, const HSpec& h) {
  if (!t.has_segment(h)) throw InvalidInput("creature has empty val");
}

}  // namespace detail

/// Creature of a family-based system (bas628, bas628bis, loc628). For loc628 the interval is
/// the single block [m_dn, m_dn + 1) and the family lives on the fine levels of that block.
inline Creature make_family_creature(const ExampleSystem& sys, Level m_dn, Level m_up, std::optional<Family> delta) {
  detail::require_kind(sys, {CreatureKind::bas628, CreatureKind::bas628bis, CreatureKind::loc628}, "family creature");
  require(0 <= m_dn && m_dn < m_up && static_cast<std::size_t>(m_up) <= sys.h().length(),
          "creature interval outside the alphabet window");
  Level lo = m_dn, hi = m_up;
  if (sys.kind == CreatureKind::loc628) {
    require(m_up == m_dn + 1, "loc628 creatures are local");
    lo = sys.codec->lo(m_dn);
    hi = sys.codec->hi(m_dn);
  }
  Norm nor;
  if (delta) {
    require(delta->hspec() == *sys.family_hspec(), "family alphabet differs from the system alphabet");
    require(delta->within(lo, hi), "family member outside the creature interval");
    require(selector_norm(*delta, sys.caps) > 1, "family has no 1-selector (selector norm must exceed 1)");
    const int pre = sys.kind == CreatureKind::bas628 ? hall_norm(*delta, sys.caps)
                                                      : refined_hall_norm(*delta, sys.caps).value;
    nor = Norm::logarithmic(NormScale::log8, Rational(pre));
  } else if (sys.kind == CreatureKind::bas628) {
    nor = Norm::logarithmic(NormScale::log8, pow_int(8, m_dn + 1));
  } else if (sys.kind == CreatureKind::bas628bis) {
    nor = Norm::logarithmic(NormScale::log8, Rational(m_up - m_dn) * pow_int(8, 2 * m_dn + 1));
  } else {
    nor = Norm::logarithmic(NormScale::log8, Rational(hi - lo + 1));
  }
  Creature t(sys.kind, m_dn, m_up, nor, HallPayload{std::move(delta), sys.codec});
  detail::require_nonempty_val(t, sys.h());
  return t;
}

/// Local creature forbidding the values E at one level (edrf, omitex).
inline Creature make_excluded_creature(const ExampleSystem& sys, Level level, std::vector<Value> E) {
  detail::require_kind(sys, {CreatureKind::edrf, CreatureKind::omitex}, "excluded-value creature");
  const int H = sys.h().size(level);
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
  for (Value v : E) require(0 <= v && v < H, "excluded value " + std::to_string(v) + " outside the alphabet");
  Norm nor;
  const int e = static_cast<int>(E.size());
  if (sys.kind == CreatureKind::edrf) {
    const int N = sys.effective_size(level);
    require(0 < e && e < N, "edrf creature needs 0 < |E| < N");
    nor = Norm::linear(4 * e >= N ? Rational(1) : Rational(N - e));
  } else {
    require(e > 0, "omitex creature needs nonempty E");
    require(E.front() != 0, "omitex creature may not exclude 0");
    nor = Norm::logarithmic(NormScale::log4, Rational(H, e));
  }
  Creature t(sys.kind, level, level + 1, nor, ExcludePayload{level, std::move(E)});
  detail::require_nonempty_val(t, sys.h());
  return t;
}

/// Local tree creature at eta forbidding the values E as successors.
inline TreeCreature make_loctree_creature(const ExampleSystem& sys, Seq eta, std::vector<Value> E) {
  detail::require_kind(sys, {CreatureKind::loctree}, "tree creature");
  const Level m = static_cast<Level>(eta.size());
  const int H = sys.h().size(m);
  for (std::size_t i = 0; i < eta.size(); ++i)
    require(sys.h().contains(static_cast<Level>(i), eta[i]), "tree creature root outside the alphabet");
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
  require(!E.empty() && static_cast<int>(E.size()) < H, "loctree creature needs a nonempty proper E");
  for (Value v : E) require(0 <= v && v < H, "excluded value outside the alphabet");
  std::vector<Value> succ;
  for (Value a = 0; a < H; ++a)
    if (!std::binary_search(E.begin(), E.end(), a)) succ.push_back(a);
  const int e = static_cast<int>(E.size());
  return TreeCreature{std::move(eta), Norm::logarithmic(NormScale::log4, Rational(H, e)), std::move(succ),
                      std::move(E)};
}

/// The creature allowing only the value 0 at `level`.
inline Creature omitex_tmin(const ExampleSystem& sys, Level level) {
  detail::require_kind(sys, {CreatureKind::omitex}, "omitex_tmin");
  std::vector<Value> E;
  for (Value v = 1; v < sys.h().size(level); ++v) E.push_back(v);
  return make_excluded_creature(sys, level, std::move(E));
}

// ---------------------------------------------------------------------------------------------
// Composition and decomposition

namespace detail {

inline void require_chain(std::span<const Creature> parts) {
  require(!parts.empty(), "empty list of creatures");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    require(parts[i].m_up() == parts[i + 1].m_dn(), "creatures do not chain");
}

inline void require_members(const ExampleSystem& sys, std::span<const Creature> ts) {
  for (const auto& t : ts)
    require(t.kind() == sys.kind, std::string("creature of kind ") + kind_name(t.kind()) + " in a " +
                                      kind_name(sys.kind) + " system");
}

inline bool family_subset(const std::optional<Family>& a, const std::optional<Family>& b) {
  if (!a) return true;
  if (!b) return false;
  for (const auto& f : a->members())
    if (!b->contains(f)) return false;
  return true;
}

inline bool sorted_subset(const std::vector<Value>& a, const std::vector<Value>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// s belongs to Sigma(parts).
inline bool sigma_member(const ExampleSystem& sys, const Creature& s, std::span<const Creature> parts) {
  detail::require_chain(parts);
  detail::require_members(sys, parts);
  detail::require_members(sys, std::span<const Creature>(&s, 1));
  if (s.m_dn() != parts.front().m_dn() || s.m_up() != parts.back().m_up())
    throw InvalidInput("candidate interval [" + std::to_string(s.m_dn()) + "," + std::to_string(s.m_up()) +
                       ") does not match the joined interval [" + std::to_string(parts.front().m_dn()) + "," +
                       std::to_string(parts.back().m_up()) + ")");
  switch (sys.kind) {
    case CreatureKind::generic:
      return parts.size() == 1 && s == parts[0];
    case CreatureKind::bas628:
    case CreatureKind::bas628bis:
      for (const auto& t : parts)
        if (!detail::family_subset(t.delta(), s.delta())) return false;
      return true;
    case CreatureKind::loc628:
      return parts.size() == 1 && detail::family_subset(parts[0].delta(), s.delta());
    case CreatureKind::edrf:
    case CreatureKind::omitex:
      return parts.size() == 1 && detail::sorted_subset(parts[0].excluded().excluded, s.excluded().excluded);
    case CreatureKind::dual: {
      if (parts.size() != 1) return false;
      const auto& sb = *s.as<DualPayload>()->base;
      const auto& tb = *parts[0].as<DualPayload>()->base;
      return sigma_member(*sys.base, tb, std::span<const Creature>(&sb, 1));
    }
    case CreatureKind::loctree:
      break;
  }
  throw InvalidInput("loctree composition acts on tree creatures");
}

inline bool sigma_member(const ExampleSystem& sys, const Creature& s, const Creature& t) {
  return sigma_member(sys, s, std::span<const Creature>(&t, 1));
}

/// Tree composition for loctree: same root, E_t contained in E_s.
inline bool tree_sigma_member(const TreeCreature& s, const TreeCreature& t) {
  return s.eta == t.eta && detail::sorted_subset(t.excluded, s.excluded);
}

/// The splitting belongs to Sigma-bottom(t).
inline bool sigma_bot_member(const ExampleSystem& sys, std::span<const Creature> splitting, const Creature& t) {
  detail::require_chain(splitting);
  detail::require_members(sys, splitting);
  if (splitting.front().m_dn() != t.m_dn() || splitting.back().m_up() != t.m_up())
    throw InvalidInput("splitting does not partition the interval of the creature");
  if (sys.kind != CreatureKind::bas628 && sys.kind != CreatureKind::bas628bis)
    return splitting.size() == 1 && splitting[0] == t;
  const auto& dt = t.delta();
  if (!dt) return true;
  for (const auto& f : dt->members()) {
    bool found = false;
    for (const auto& s : splitting) {
      auto r = restrict(f, s.m_dn(), s.m_up());
      if (r && s.delta() && s.delta()->contains(*r)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------------------------
// EDRF norm-loss function and linking

/// The regressive function of the eventually-different construction for effective size N.
inline long long edrf_h_value(long long N, long long n) {
  if (n >= N) return n - 1;
  if (8 * n > 7 * N) return 2 * n - N;
  return 1;
}

inline long long edrf_h(const ExampleSystem& sys, Level k, long long n) {
  detail::require_kind(sys, {CreatureKind::edrf}, "edrf_h");
  return edrf_h_value(sys.effective_size(k), n);
}

inline std::optional<Creature> dual_creature(const ExampleSystem& sys, const Creature& t);

struct LinkResult {
  Creature s;
  std::string guarantee;  // the norm bound that was checked
};

/// A common Sigma-refinement of two creatures on the same interval.
inline LinkResult link(const ExampleSystem& sys, const Creature& t0, const Creature& t1) {
  detail::require_members(sys, std::vector<Creature>{t0, t1});
  require(t0.m_dn() == t1.m_dn() && t0.m_up() == t1.m_up(), "link needs creatures on the same interval");
  if (t0 == t1) return {t0, "identical creatures"};
  switch (sys.kind) {
    case CreatureKind::edrf:
    case CreatureKind::omitex: {
      std::vector<Value> E = t0.excluded().excluded;
      E.insert(E.end(), t1.excluded().excluded.begin(), t1.excluded().excluded.end());
      std::sort(E.begin(), E.end());
      E.erase(std::unique(E.begin(), E.end()), E.end());
      const Level k = t0.m_dn();
      if (sys.kind == CreatureKind::edrf && static_cast<int>(E.size()) >= sys.effective_size(k))
        throw NoLink("union of excluded sets reaches the effective size");
      if (static_cast<int>(E.size()) >= sys.h().size(k)) throw NoLink("union of excluded sets is the whole alphabet");
      Creature s = make_excluded_creature(sys, k, E);
      std::string g;
      if (sys.kind == CreatureKind::edrf) {
        const auto m = std::min(t0.nor().pre(), t1.nor().pre());
        const long long mk = static_cast<long long>(numerator(m));
        const long long need = edrf_h(sys, k, mk);
        if (s.nor().pre() < need)
          throw PropertyFailure("linked norm " + s.nor().describe() + " below h = " + std::to_string(need));
        g = "nor >= h(level, min norm) = " + std::to_string(need);
      }
      return {s, g};
    }
    case CreatureKind::bas628:
    case CreatureKind::bas628bis:
    case CreatureKind::loc628: {
      const auto& d0 = t0.delta();
      const auto& d1 = t1.delta();
      if (!d0) return {t1, "empty family on one side"};
      if (!d1) return {t0, "empty family on one side"};
      std::vector<PartialFn> u = d0->members();
      u.insert(u.end(), d1->members().begin(), d1->members().end());
      Family du(u, d0->hspec_ptr());
      if (selector_norm(du, sys.caps) <= 1) throw NoLink("union of families has no 1-selector");
      Creature s = make_family_creature(sys, t0.m_dn(), t0.m_up(), du);
      const Rational bound = std::min(t0.nor().pre(), t1.nor().pre()) / 2;
      const Rational need = Rational(numerator(bound) / denominator(bound));
      if (s.nor().pre() < need)
        throw PropertyFailure("union norm below half of the smaller norm");
      return {s, "pre-norm >= floor(min pre-norm / 2) = " + to_string(need)};
    }
    case CreatureKind::dual: {
      const auto& b0 = *t0.as<DualPayload>()->base;
      const auto& b1 = *t1.as<DualPayload>()->base;
      const auto& base = *sys.base;
      detail::require_kind(base, {CreatureKind::edrf, CreatureKind::omitex}, "dual link");
      std::vector<Value> E;
      std::set_intersection(b0.excluded().excluded.begin(), b0.excluded().excluded.end(),
                            b1.excluded().excluded.begin(), b1.excluded().excluded.end(), std::back_inserter(E));
      if (E.empty()) throw NoLink("excluded sets of the base creatures are disjoint");
      const Creature sb = make_excluded_creature(base, b0.m_dn(), E);
      auto s = dual_creature(sys, sb);
      if (!s) throw NoLink("dual of the common base creature is undefined");
      return {*s, "dual of the intersection"};
    }
    default:
      throw NoLink(std::string("no linking construction for kind ") + kind_name(sys.kind));
  }
}

// ---------------------------------------------------------------------------------------------
// Escape values and cuts for bas628bis

struct EscapeResult {
  Seq v;
  std::string route;  // "constructive" or "exhaustive"
};

/// A v with (u, v) in val[t] but not in val[s], for s, t on one interval with nor[s] < nor[t].
inline EscapeResult escape_value(const ExampleSystem& sys, const Creature& s, const Creature& t, const Seq& u) {
  detail::require_kind(sys, {CreatureKind::bas628bis}, "escape_value");
  detail::require_members(sys, std::vector<Creature>{s, t});
  require(s.m_dn() == t.m_dn() && s.m_up() == t.m_up(), "escape_value needs creatures on the same interval");
  require(s.nor() < t.nor(), "escape_value needs nor[s] < nor[t]");
  require(t.domain_contains(u), "u is not in the domain of val[t]");
  for (std::size_t i = 0; i < u.size(); ++i)
    require(sys.h().contains(static_cast<Level>(i), u[i]), "u has a value outside the alphabet");
  const Level lo = t.m_dn(), hi = t.m_up();
  auto finish = [&](const Seq& seg, const char* route) -> std::optional<EscapeResult> {
    Seq v = u;
    v.insert(v.end(), seg.begin(), seg.end());
    if (t.val_contains(u, v) && !s.val_contains(u, v)) return EscapeResult{v, route};
    return std::nullopt;
  };
  const auto& ds = s.delta();
  const auto& dt = t.delta();
  if (ds) {
    std::optional<PartialFn> f;
    std::vector<PartialFn> refinement;
    if (!dt) {
      f = ds->members().front();
    } else {
      auto rn = refined_hall_norm(*dt, sys.caps);
      if (rn.refinement) {
        refinement = rn.refinement->members();
        for (const auto& cand : ds->members()) {
          bool covered = false;
          for (const auto& g : refinement)
            if (g.subfunction_of(cand)) {
              covered = true;
              break;
            }
          if (!covered) {
            f = cand;
            break;
          }
        }
      }
    }
    if (f) {
      Seq seg(static_cast<std::size_t>(hi - lo), -1);
      for (const auto& [lv, v] : f->entries()) seg[static_cast<std::size_t>(lv - lo)] = v;
      for (const auto& g : refinement) {
        bool agrees = true;
        std::optional<Level> free_level;
        for (const auto& [lv, v] : g.entries()) {
          const Value cur = seg[static_cast<std::size_t>(lv - lo)];
          if (cur == -1) {
            if (!free_level) free_level = lv;
          } else if (cur != v) {
            agrees = false;
          }
        }
        if (agrees && free_level) {
          const Value gv = *g.at(*free_level);
          seg[static_cast<std::size_t>(*free_level - lo)] = gv == 0 ? 1 : 0;
        }
      }
      for (auto& x : seg)
        if (x == -1) x = 0;
      if (auto r = finish(seg, "constructive")) return *r;
    }
  }
  for (const auto& seg : t.segments(sys.h()))
    if (auto r = finish(seg, "exhaustive")) return *r;
  throw PropertyFailure("no escape value exists although nor[s] < nor[t]");
}

struct CutClauses {
  bool intervals = false;   // the parts are [m_dn, m) and [m, m_up)
  bool norms = false;       // nor[s_l] >= min{nor[t] - 1, m_dn}
  bool membership = false;  // {s_0, s_1} lies in Sigma-bottom(t)
  bool all() const { return intervals && norms && membership; }
};

inline CutClauses check_cut(const ExampleSystem& sys, const Creature& t, Level m, const Creature& s0,
                            const Creature& s1) {
  CutClauses c;
  c.intervals = s0.m_dn() == t.m_dn() && s0.m_up() == m && s1.m_dn() == m && s1.m_up() == t.m_up();
  if (!c.intervals) return c;
  const Rational bound_pre = std::min(t.nor().minus(1).pre(), t.nor().threshold(t.m_dn()));
  const Norm bound = Norm::logarithmic(NormScale::log8, bound_pre);
  c.norms = !(s0.nor() < bound) && !(s1.nor() < bound);
  const std::vector<Creature> split{s0, s1};
  c.membership = sigma_bot_member(sys, split, t);
  return c;
}

struct CutResult {
  Creature s0;
  Creature s1;
  std::string construction;  // "split" or "search"
};

/// Splits t at level m into two creatures of comparable norm.
inline CutResult cut(const ExampleSystem& sys, const Creature& t, Level m) {
  detail::require_kind(sys, {CreatureKind::bas628bis}, "cut");
  detail::require_members(sys, std::span<const Creature>(&t, 1));
  require(t.m_dn() < m && m < t.m_up(), "cut point must lie strictly inside the interval");
  require(t.nor().pre() > 1, "cut needs pre-norm of t above 1");
  const Level lo = t.m_dn(), hi = t.m_up();
  const auto& dt = t.delta();
  if (!dt) {
    Creature s0 = make_family_creature(sys, lo, m, std::nullopt);
    Creature s1 = make_family_creature(sys, m, hi, std::nullopt);
    return {s0, s1, "split"};
  }
  const auto& hp = dt->hspec_ptr();
  auto build = [&](Level a, Level b, std::vector<PartialFn> fs) -> std::optional<Creature> {
    if (fs.empty()) return make_family_creature(sys, a, b, std::nullopt);
    Family d(std::move(fs), hp);
    if (selector_norm(d, sys.caps) <= 1) return std::nullopt;
    return make_family_creature(sys, a, b, std::move(d));
  };
  auto attempt = [&](const std::vector<PartialFn>& left, const std::vector<PartialFn>& right)
      -> std::optional<std::pair<Creature, Creature>> {
    auto s0 = build(lo, m, left);
    if (!s0) return std::nullopt;
    auto s1 = build(m, hi, right);
    if (!s1) return std::nullopt;
    if (!check_cut(sys, t, m, *s0, *s1).all()) return std::nullopt;
    return std::make_pair(*s0, *s1);
  };

  auto rn = refined_hall_norm(*dt, sys.caps);
  if (rn.refinement) {
    std::vector<PartialFn> side[2];
    for (const auto& f : rn.refinement->members()) {
      const int n = static_cast<int>(f.size());
      auto l = restrict(f, lo, m);
      auto r = restrict(f, m, hi);
      if (l && 2 * static_cast<int>(l->size()) >= n) side[0].push_back(*l);
      if (r && 2 * static_cast<int>(r->size()) >= n) side[1].push_back(*r);
    }
    std::vector<PartialFn> left, right;
    for (const auto& g : dt->members()) {
      for (int sd = 0; sd < 2; ++sd) {
        bool hit = false;
        for (const auto& f : side[sd])
          if (f.subfunction_of(g)) hit = true;
        if (!hit) continue;
        auto r = sd == 0 ? restrict(g, lo, m) : restrict(g, m, hi);
        (sd == 0 ? left : right).push_back(*r);
      }
    }
    if (auto p = attempt(left, right)) return {p->first, p->second, "split"};
  }

  const auto& gs = dt->members();
  require(gs.size() <= 16, "cut search limited to families of at most 16 members");
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << gs.size()); ++mask) {
    std::vector<PartialFn> left, right;
    bool ok = true;
    for (std::size_t i = 0; i < gs.size() && ok; ++i) {
      auto r = ((mask >> i) & 1U) ? restrict(gs[i], m, hi) : restrict(gs[i], lo, m);
      if (!r) ok = false;
      else (((mask >> i) & 1U) ? right : left).push_back(*r);
    }
    if (!ok) continue;
    if (auto p = attempt(left, right)) return {p->first, p->second, "search"};
  }
  throw PropertyFailure("no splitting of the creature satisfies the cutting clauses");
}

// ---------------------------------------------------------------------------------------------
// Dual systems

/// Dual of a local forgetful system relative to reference creatures t*_0, t*_1, ...
inline ExampleSystem dual_system(std::shared_ptr<const ExampleSystem> base, std::vector<Creature> reference) {
  require(base != nullptr, "dual system without base");
  detail::require_kind(*base, {CreatureKind::edrf, CreatureKind::omitex}, "dual system");
  for (std::size_t n = 0; n < reference.size(); ++n) {
    require(reference[n].kind() == base->kind, "reference creature of the wrong kind");
    require(reference[n].m_dn() == static_cast<Level>(n), "reference creatures must sit at levels 0, 1, ...");
  }
  ExampleSystem s;
  s.kind = CreatureKind::dual;
  s.hspec = base->hspec;
  s.base = std::move(base);
  s.reference = std::move(reference);
  return s;
}

/// The complement creature of t, or nothing when its val would be empty.
inline std::optional<Creature> dual_creature(const ExampleSystem& sys, const Creature& t) {
  detail::require_kind(sys, {CreatureKind::dual}, "dual_creature");
  const Level n = t.m_dn();
  require(n >= 0 && static_cast<std::size_t>(n) < sys.reference.size(), "no reference creature at this level");
  const Creature& top = sys.reference[static_cast<std::size_t>(n)];
  require(sigma_member(*sys.base, t, std::span<const Creature>(&top, 1)),
          "base creature is not in Sigma of the reference creature");
  Norm nor;
  if (top.nor().scale() == NormScale::linear)
    nor = Norm::linear(std::max(Rational(0), Rational(top.nor().pre() - t.nor().pre())));
  else
    nor = Norm::logarithmic(top.nor().scale(), std::max(Rational(1), Rational(top.nor().pre() / t.nor().pre())));
  Creature c(CreatureKind::dual, t.m_dn(), t.m_up(), nor, DualPayload{std::make_shared<const Creature>(t), top.nor()});
  if (!c.has_segment(sys.h())) return std::nullopt;
  return c;
}

/// Members of Sigma(t) for a local excluded-value creature, when there are at most `limit`.
inline std::vector<Creature> excluded_sigma_closure(const ExampleSystem& sys, const Creature& t,
                                                    std::size_t limit = 4096) {
  detail::require_kind(sys, {CreatureKind::edrf, CreatureKind::omitex}, "Sigma enumeration");
  const Level k = t.m_dn();
  const int H = sys.h().size(k);
  std::vector<Value> free;
  for (Value a = 0; a < H; ++a)
    if (!std::binary_search(t.excluded().excluded.begin(), t.excluded().excluded.end(), a)) free.push_back(a);
  if (free.size() >= 63 || (std::size_t{1} << free.size()) > limit) throw CapExceeded("Sigma closure too large");
  std::vector<Creature> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
    std::vector<Value> E = t.excluded().excluded;
    for (std::size_t i = 0; i < free.size(); ++i)
      if ((mask >> i) & 1U) E.push_back(free[i]);
    try {
      out.push_back(make_excluded_creature(sys, k, E));
    } catch (const InvalidInput&) {
    }
  }
  return out;
}

struct AdditiveReport {
  bool additive = true;
  std::size_t pairs_checked = 0;
  std::optional<std::pair<Creature, Creature>> witness;  // a pair with no small common refinement
};

/// Exhaustive (2, nor[t*])-additivity check of a reference creature.
inline AdditiveReport additive_audit(const ExampleSystem& base, const Creature& top) {
  const auto sig = excluded_sigma_closure(base, top);
  const Norm& m = top.nor();
  AdditiveReport rep;
  for (std::size_t i = 0; i < sig.size(); ++i)
    for (std::size_t j = i; j < sig.size(); ++j) {
      const auto& a = sig[i];
      const auto& b = sig[j];
      if (m < a.nor() || m < b.nor()) continue;
      ++rep.pairs_checked;
      const Norm cap = max(a.nor(), b.nor());
      bool found = false;
      for (const auto& s : sig) {
        if (!sigma_member(base, a, s) || !sigma_member(base, b, s)) continue;
        const bool small = cap.scale() == NormScale::linear ? s.nor().pre() <= cap.pre() + 1
                                                            : s.nor().pre() <= cap.pre() * cap.base();
        if (small) {
          found = true;
          break;
        }
      }
      if (!found) {
        rep.additive = false;
        rep.witness = std::make_pair(a, b);
        return rep;
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Cohen-producing check

struct CohenReport {
  bool ok = true;
  std::size_t creatures_checked = 0;
  std::string failure;
};

/// Whether value `a` at `level` lies in the Cohen set used by the system's construction.
inline bool cohen_set_contains(const ExampleSystem& sys, Level level, Value a) {
  switch (sys.kind) {
    case CreatureKind::edrf:
    case CreatureKind::loctree:
      return a < sys.h().size(level) / 2;
    case CreatureKind::loc628:
      return sys.codec->decode(level, a)[0] == 0;
    default:
      throw InvalidInput(std::string("no Cohen sets for kind ") + kind_name(sys.kind));
  }
}

/// For every creature at `level` with norm above 1, both a value inside and a value outside the
/// Cohen set remain possible.
inline CohenReport cohen_audit(const ExampleSystem& sys, Level level, std::size_t limit = 200000) {
  detail::require_kind(sys, {CreatureKind::edrf, CreatureKind::loctree, CreatureKind::loc628}, "cohen audit");
  CohenReport rep;
  auto check_values = [&](const std::vector<Value>& allowed, const std::string& what) {
    bool in = false, out = false;
    for (Value a : allowed) (cohen_set_contains(sys, level, a) ? in : out) = true;
    ++rep.creatures_checked;
    if (!(in && out) && rep.ok) {
      rep.ok = false;
      rep.failure = what;
    }
  };
  const int H = sys.h().size(level);
  if (sys.kind == CreatureKind::edrf || sys.kind == CreatureKind::loctree) {
    // Norm above 1 forces 4|E| < N (edrf) or 4|E| < H (loctree): enumerate those E.
    const int bound = sys.kind == CreatureKind::edrf ? sys.effective_size(level) : H;
    std::vector<Value> E;
    std::function<void(Value)> rec = [&](Value from) {
      if (!E.empty()) {
        if (rep.creatures_checked >= limit) throw CapExceeded("too many creatures for the Cohen audit");
        std::vector<Value> allowed;
        if (sys.kind == CreatureKind::edrf) {
          const Creature t = make_excluded_creature(sys, level, E);
          if (!t.nor().exceeds(1)) throw PropertyFailure("enumerated creature has norm <= 1");
          for (const auto& s : t.segments(sys.h())) allowed.push_back(s[0]);
        } else {
          const TreeCreature t = make_loctree_creature(sys, Seq(static_cast<std::size_t>(level), 0), E);
          if (!t.nor.exceeds(1)) throw PropertyFailure("enumerated creature has norm <= 1");
          allowed = t.successors;
        }
        check_values(allowed, "E = {" + [&] {
          std::string s;
          for (auto x : E) s += std::to_string(x) + ",";
          return s;
        }() + "}");
      }
      if (4 * (static_cast<int>(E.size()) + 1) >= bound) return;
      for (Value a = from; a < H; ++a) {
        E.push_back(a);
        rec(a + 1);
        E.pop_back();
      }
    };
    rec(0);
    return rep;
  }
  // loc628: the refined norm is at most 1 + min |dom f|, so norm above 1 (refined norm above 8)
  // with a nonempty family needs every member to extend one total function on the block,
  // i.e. the family is a single total function. The empty family is checked directly.
  const Level lo = sys.codec->lo(level), hi = sys.codec->hi(level);
  {
    const Creature t = make_family_creature(sys, level, level + 1, std::nullopt);
    if (t.nor().exceeds(1)) {
      std::vector<Value> allowed;
      for (const auto& s : t.segments(sys.h())) allowed.push_back(s[0]);
      check_values(allowed, "empty family");
    }
  }
  if (hi - lo < 8) return rep;
  if (H > static_cast<int>(limit)) throw CapExceeded("block alphabet too large for the Cohen audit");
  for (Value code = 0; code < H; ++code) {
    const Seq tuple = sys.codec->decode(level, code);
    std::vector<PartialFn::Entry> es;
    for (Level i = lo; i < hi; ++i) es.emplace_back(i, tuple[static_cast<std::size_t>(i - lo)]);
    const Creature t =
        make_family_creature(sys, level, level + 1, Family({PartialFn(es, *sys.codec->fine)}, sys.codec->fine));
    if (!t.nor().exceeds(1)) continue;
    std::vector<Value> allowed;
    for (const auto& s : t.segments(sys.h())) allowed.push_back(s[0]);
    check_values(allowed, "single total function " + std::to_string(code));
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Threshold-function audits on finite windows

struct WindowViolation {
  std::string clause;
  long long a = 0;
  long long b = 0;
};

/// 1 <= h(m, k) < k for k > 1, and h(m, .) non-decreasing, on m < m_max, 1 <= k <= k_max.
inline std::optional<WindowViolation> regressive_audit(const std::function<long long(long long, long long)>& h,
                                                       long long m_max, long long k_max) {
  for (long long m = 0; m < m_max; ++m)
    for (long long k = 1; k <= k_max; ++k) {
      const long long v = h(m, k);
      if (k > 1 && !(1 <= v && v < k)) return WindowViolation{"1 <= h(m,k) < k", m, k};
      if (k < k_max && v > h(m, k + 1)) return WindowViolation{"monotone in k", m, k};
    }
  return std::nullopt;
}

/// f(k, l) <= f(k, l + 1) and 2 f(k, l) < f(k + 1, l) on k < k_max, l < l_max.
inline std::optional<WindowViolation> fast_audit(const std::function<long long(long long, long long)>& f,
                                                 long long k_max, long long l_max) {
  for (long long k = 0; k < k_max; ++k)
    for (long long l = 0; l < l_max; ++l) {
      if (l + 1 < l_max && f(k, l) > f(k, l + 1)) return WindowViolation{"f(k,l) <= f(k,l+1)", k, l};
      if (k + 1 < k_max && !(2 * f(k, l) < f(k + 1, l))) return WindowViolation{"2 f(k,l) < f(k+1,l)", k, l};
    }
  return std::nullopt;
}


/// Exhaustive h-linkedness check of EDRF on one level with |H| = N_0 = N: every pair of creatures
/// with norm at least k links to a creature in both Sigma sets with norm at least h(k), for all
/// 1 < k <= min norm of the pair.
struct HLinkedReport {
  bool ok = true;
  int N = 0;
  std::size_t creatures = 0;
  std::size_t pairs = 0;
  std::size_t bounds_checked = 0;
  std::string failure;
  std::optional<WindowViolation> regressive;
};

inline HLinkedReport edrf_hlinked_audit(int N) {
  require(N >= 4 && N <= 24, "edrf h-linked audit needs 4 <= N <= 24");
  const auto sys = edrf_system(make_hspec({N}));
  HLinkedReport rep;
  rep.N = N;
  std::vector<Creature> ts;
  std::vector<Value> E;
  std::function<void(Value)> rec = [&](Value from) {
    if (!E.empty()) ts.push_back(make_excluded_creature(sys, 0, E));
    if (4 * static_cast<int>(E.size() + 1) >= N) return;
    for (Value v = from; v < N; ++v) {
      E.push_back(v);
      rec(v + 1);
      E.pop_back();
    }
  };
  rec(0);
  rep.creatures = ts.size();
  auto fail = [&](const std::string& why) {
    if (rep.ok) rep.failure = why;
    rep.ok = false;
  };
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i; j < ts.size(); ++j) {
      const auto& t0 = ts[i];
      const auto& t1 = ts[j];
      const long long m = static_cast<long long>(numerator(std::min(t0.nor().pre(), t1.nor().pre())));
      if (m < 2) continue;
      ++rep.pairs;
      try {
        const auto r = link(sys, t0, t1);
        if (!sigma_member(sys, r.s, t0) || !sigma_member(sys, r.s, t1)) fail("link of " + t0.key() + " and " + t1.key() + " leaves Sigma");
        for (long long k = 2; k <= m; ++k) {
          ++rep.bounds_checked;
          if (r.s.nor().pre() < edrf_h_value(N, k))
            fail("link of " + t0.key() + " and " + t1.key() + " has norm below h(" + std::to_string(k) + ")");
        }
      } catch (const PropertyFailure& e) {
        fail(t0.key() + " and " + t1.key() + ": " + e.what());
      }
    }
  rep.regressive = regressive_audit([N](long long, long long k) { return edrf_h_value(N, k); }, 1, N);
  if (rep.regressive) fail("h is not regressive: " + rep.regressive->clause);
  return rep;
}

}  // namespace creaturekit
