#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "creaturekit/norm.hpp"
#include "creaturekit/partial_fn.hpp"

namespace creaturekit {

enum class CreatureKind { generic, bas628, bas628bis, loc628, edrf, loctree, omitex, dual };

inline const char* kind_name(CreatureKind k) {
  switch (k) {
    case CreatureKind::generic: return "generic";
    case CreatureKind::bas628: return "bas628";
    case CreatureKind::bas628bis: return "bas628bis";
    case CreatureKind::loc628: return "loc628";
    case CreatureKind::edrf: return "edrf";
    case CreatureKind::loctree: return "loctree";
    case CreatureKind::omitex: return "omitex";
    case CreatureKind::dual: return "dual";
  }
  return "?";
}

inline CreatureKind parse_kind(const std::string& s) {
  for (auto k : {CreatureKind::generic, CreatureKind::bas628, CreatureKind::bas628bis, CreatureKind::loc628,
                 CreatureKind::edrf, CreatureKind::loctree, CreatureKind::omitex, CreatureKind::dual})
    if (s == kind_name(k)) return k;
  throw InvalidInput("unknown system kind '" + s + "'");
}

/// Mixed-radix coding of blocks of a finer alphabet into single letters.
/// Block k covers fine levels [bounds[k], bounds[k+1]); the letter for a tuple x is
/// sum_i x_i * prod_{j<i} |fine(j)|, least significant level first.
struct BlockCodec {
  HSpecPtr fine;
  std::vector<Level> bounds;

  BlockCodec(HSpecPtr f, std::vector<Level> b) : fine(std::move(f)), bounds(std::move(b)) {
    require(fine != nullptr, "block codec without fine alphabet");
    require(bounds.size() >= 2, "block boundaries need at least two entries");
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
      require(bounds[i] < bounds[i + 1], "block boundaries must be strictly increasing");
    require(bounds.front() >= 0 && static_cast<std::size_t>(bounds.back()) <= fine->length(),
            "block boundaries outside the fine alphabet");
  }

  std::size_t blocks() const { return bounds.size() - 1; }
  Level lo(Level k) const { return bounds.at(static_cast<std::size_t>(k)); }
  Level hi(Level k) const { return bounds.at(static_cast<std::size_t>(k) + 1); }

  int block_size(Level k) const {
    const auto p = fine->product(lo(k), hi(k), static_cast<std::uint64_t>(INT32_MAX));
    require(p < static_cast<std::uint64_t>(INT32_MAX), "block alphabet too large");
    return static_cast<int>(p);
  }

  /// The coarse alphabet, one letter per block.
  HSpecPtr coarse() const {
    std::vector<int> s;
    for (std::size_t k = 0; k < blocks(); ++k) s.push_back(block_size(static_cast<Level>(k)));
    return make_hspec(std::move(s));
  }

  Seq decode(Level k, Value code) const {
    Seq t;
    for (Level i = lo(k); i < hi(k); ++i) {
      t.push_back(code % fine->size(i));
      code /= fine->size(i);
    }
    return t;
  }

  Value encode(Level k, std::span<const Value> tuple) const {
    Value code = 0, mult = 1;
    for (Level i = lo(k); i < hi(k); ++i) {
      code += tuple[static_cast<std::size_t>(i - lo(k))] * mult;
      mult *= fine->size(i);
    }
    return code;
  }
};

class Creature;

/// Explicitly tabulated creature: forgetful with a list of admissible segments, or an explicit
/// relation of pairs (u, v).
struct GenericPayload {
  Norm nor;
  std::optional<std::vector<Seq>> allowed;
  std::optional<std::vector<std::pair<Seq, Seq>>> pairs;
};

/// Creatures forbidding every extension that contains a member of a family.
struct HallPayload {
  std::optional<Family> delta;
  std::shared_ptr<const BlockCodec> codec;  // set for block-coded systems
};

/// Local creatures forbidding a set of values at one level.
struct ExcludePayload {
  Level level = 0;
  std::vector<Value> excluded;
};

/// Complement of a base creature.
struct DualPayload {
  std::shared_ptr<const Creature> base;
  Norm top;  // norm of the reference creature at the same level
};

using Payload = std::variant<GenericPayload, HallPayload, ExcludePayload, DualPayload>;

class Creature {
 public:
  Creature(CreatureKind kind, Level m_dn, Level m_up, Norm nor, Payload payload)
      : kind_(kind), m_dn_(m_dn), m_up_(m_up), nor_(std::move(nor)), payload_(std::move(payload)) {
    require(0 <= m_dn_ && m_dn_ < m_up_, "creature interval must satisfy 0 <= m_dn < m_up");
    if (auto* g = std::get_if<GenericPayload>(&payload_)) {
      require(!(g->allowed && g->pairs), "generic creature with both segment list and explicit pairs");
      if (g->allowed) {
        std::sort(g->allowed->begin(), g->allowed->end());
        g->allowed->erase(std::unique(g->allowed->begin(), g->allowed->end()), g->allowed->end());
        for (const auto& s : *g->allowed)
          require(static_cast<Level>(s.size()) == m_up_ - m_dn_, "segment length does not match interval");
      }
      if (g->pairs) {
        std::sort(g->pairs->begin(), g->pairs->end());
        g->pairs->erase(std::unique(g->pairs->begin(), g->pairs->end()), g->pairs->end());
        for (const auto& [u, v] : *g->pairs) {
          require(static_cast<Level>(u.size()) == m_dn_ && static_cast<Level>(v.size()) == m_up_,
                  "val pair lengths do not match interval");
          require(std::equal(u.begin(), u.end(), v.begin()), "val pair (u,v) with u not an initial segment of v");
        }
      }
    }
    if (auto* e = std::get_if<ExcludePayload>(&payload_)) {
      require(m_up_ == m_dn_ + 1 && e->level == m_dn_, "local creature interval mismatch");
      std::sort(e->excluded.begin(), e->excluded.end());
      e->excluded.erase(std::unique(e->excluded.begin(), e->excluded.end()), e->excluded.end());
    }
    if (auto* d = std::get_if<DualPayload>(&payload_))
      require(d->base && d->base->m_dn() == m_dn_ && d->base->m_up() == m_up_, "dual creature interval mismatch");
    key_ = make_key();
  }

  CreatureKind kind() const noexcept { return kind_; }
  Level m_dn() const noexcept { return m_dn_; }
  Level m_up() const noexcept { return m_up_; }
  const Norm& nor() const noexcept { return nor_; }
  const Payload& payload() const noexcept { return payload_; }
  const std::string& key() const noexcept { return key_; }

  template <class P>
  const P* as() const {
    return std::get_if<P>(&payload_);
  }

  const std::optional<Family>& delta() const {
    const auto* h = as<HallPayload>();
    require(h != nullptr, "creature has no family payload");
    return h->delta;
  }

  const ExcludePayload& excluded() const {
    const auto* e = as<ExcludePayload>();
    require(e != nullptr, "creature has no excluded-value payload");
    return *e;
  }

  /// val depends only on the segment v restricted to [m_dn, m_up).
  bool forgetful() const {
    const auto* g = as<GenericPayload>();
    return g == nullptr || !g->pairs;
  }

  /// For forgetful creatures: whether the segment over [m_dn, m_up) is admissible.
  bool segment_allowed(std::span<const Value> seg) const {
    return std::visit(
        [&](const auto& p) -> bool {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, GenericPayload>) {
            require(!p.pairs, "segment test on a non-forgetful creature");
            if (!p.allowed) return true;
            return std::binary_search(p.allowed->begin(), p.allowed->end(), Seq(seg.begin(), seg.end()));
          } else if constexpr (std::is_same_v<P, HallPayload>) {
            if (!p.delta) return true;
            if (p.codec) {
              const Seq t = p.codec->decode(m_dn_, seg[0]);
              const Level off = p.codec->lo(m_dn_);
              for (const auto& f : p.delta->members())
                if (f.contained_in(t, off)) return false;
              return true;
            }
            for (const auto& f : p.delta->members())
              if (f.contained_in(seg, m_dn_)) return false;
            return true;
          } else if constexpr (std::is_same_v<P, ExcludePayload>) {
            return !std::binary_search(p.excluded.begin(), p.excluded.end(), seg[0]);
          } else {
            return !p.base->segment_allowed(seg);
          }
        },
        payload_);
  }

  /// u lies in dom(val).
  bool domain_contains(const Seq& u) const {
    if (static_cast<Level>(u.size()) != m_dn_) return false;
    const auto* g = as<GenericPayload>();
    if (g == nullptr || !g->pairs) return true;
    auto it = std::lower_bound(g->pairs->begin(), g->pairs->end(), std::make_pair(u, Seq{}));
    return it != g->pairs->end() && it->first == u;
  }

  /// Admissible segments over [m_dn, m_up) of a forgetful creature, in lexicographic order.
  /// Stops after `limit` segments when `truncate` is set, otherwise exceeding it is an error.
  std::vector<Seq> segments(const HSpec& h, std::size_t limit = std::size_t{1} << 22, bool truncate = false) const {
    require(forgetful(), "segment enumeration on a non-forgetful creature");
    require(static_cast<std::size_t>(m_up_) <= h.length(), "creature interval exceeds the alphabet window");
    const Level len = m_up_ - m_dn_;
    // Early rejection for family payloads: members whose domain ends at a given position.
    std::vector<std::vector<const PartialFn*>> ending(static_cast<std::size_t>(len));
    const auto* hp = as<HallPayload>();
    const bool prune = hp != nullptr && hp->delta && !hp->codec;
    if (prune)
      for (const auto& f : hp->delta->members())
        ending[static_cast<std::size_t>(f.max_level() - m_dn_)].push_back(&f);
    std::vector<Seq> out;
    Seq seg(static_cast<std::size_t>(len), 0);
    bool done = false;
    std::function<void(Level)> rec = [&](Level j) {
      if (j == len) {
        if (prune || segment_allowed(seg)) {
          if (out.size() >= limit) {
            if (!truncate) throw CapExceeded("too many admissible segments");
            done = true;
            return;
          }
          out.push_back(seg);
        }
        return;
      }
      for (Value v = 0; v < h.size(m_dn_ + j) && !done; ++v) {
        seg[static_cast<std::size_t>(j)] = v;
        bool ok = true;
        if (prune)
          for (const PartialFn* f : ending[static_cast<std::size_t>(j)])
            if (f->contained_in(std::span<const Value>(seg.data(), static_cast<std::size_t>(j) + 1), m_dn_)) {
              ok = false;
              break;
            }
        if (ok) rec(j + 1);
      }
    };
    rec(0);
    return out;
  }

  bool has_segment(const HSpec& h) const { return !segments(h, 1, true).empty(); }

  /// All v with (u, v) in val.
  std::vector<Seq> extensions(const Seq& u, const HSpec& h) const {
    std::vector<Seq> out;
    if (const auto* g = as<GenericPayload>(); g != nullptr && g->pairs) {
      for (const auto& [a, b] : *g->pairs)
        if (a == u) out.push_back(b);
      return out;
    }
    for (const auto& s : segments(h)) {
      Seq v = u;
      v.insert(v.end(), s.begin(), s.end());
      out.push_back(std::move(v));
    }
    return out;
  }

  bool val_contains(const Seq& u, const Seq& v) const {
    if (static_cast<Level>(u.size()) != m_dn_ || static_cast<Level>(v.size()) != m_up_) return false;
    if (!std::equal(u.begin(), u.end(), v.begin())) return false;
    if (const auto* g = as<GenericPayload>(); g != nullptr && g->pairs)
      return std::binary_search(g->pairs->begin(), g->pairs->end(), std::make_pair(u, v));
    return segment_allowed(std::span<const Value>(v).subspan(static_cast<std::size_t>(m_dn_)));
  }

  friend bool operator==(const Creature& a, const Creature& b) { return a.key_ == b.key_; }
  friend bool operator<(const Creature& a, const Creature& b) { return a.key_ < b.key_; }

 private:
  std::string make_key() const {
    std::ostringstream os;
    os << kind_name(kind_) << '[' << m_dn_ << ',' << m_up_ << ')';
    auto seq = [&](const Seq& s) {
      os << '<';
      for (auto x : s) os << x << ' ';
      os << '>';
    };
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, GenericPayload>) {
            os << "n=" << p.nor.describe();
            if (p.allowed) {
              os << "A";
              for (const auto& s : *p.allowed) seq(s);
            }
            if (p.pairs) {
              os << "P";
              for (const auto& [u, v] : *p.pairs) {
                seq(u);
                seq(v);
              }
            }
          } else if constexpr (std::is_same_v<P, HallPayload>) {
            os << "D";
            if (p.delta)
              for (const auto& f : p.delta->members()) {
                os << '{';
                for (const auto& [l, v] : f.entries()) os << l << ':' << v << ' ';
                os << '}';
              }
            else
              os << "-";
          } else if constexpr (std::is_same_v<P, ExcludePayload>) {
            os << "E";
            for (auto x : p.excluded) os << x << ' ';
          } else {
            os << "C(" << p.base->key() << ")";
          }
        },
        payload_);
    return os.str();
  }

  CreatureKind kind_;
  Level m_dn_;
  Level m_up_;
  Norm nor_;
  Payload payload_;
  std::string key_;
};

/// Checks that the creatures chain from level |w| and that w is in dom(val[t_0]).
inline void check_chain(const HSpec& h, const Seq& w, std::span<const Creature> ts) {
  for (std::size_t i = 0; i < w.size(); ++i)
    require(h.contains(static_cast<Level>(i), w[i]), "sequence value out of range at position " + std::to_string(i));
  if (ts.empty()) return;
  require(ts[0].m_dn() == static_cast<Level>(w.size()),
          "creature 0 starts at level " + std::to_string(ts[0].m_dn()) + " but the sequence has length " +
              std::to_string(w.size()));
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    require(ts[i].m_up() == ts[i + 1].m_dn(), "creatures " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                                  " do not chain");
  require(static_cast<std::size_t>(ts.back().m_up()) <= h.length(), "creatures extend beyond the alphabet window");
  require(ts[0].domain_contains(w), "sequence not in the domain of creature 0");
}

/// pos(w, t_0, ..., t_n): extensions of w admitted by every creature of the chain.
inline std::vector<Seq> pos(const HSpec& h, const Seq& w, std::span<const Creature> ts) {
  check_chain(h, w, ts);
  std::vector<Seq> frontier{w};
  for (const auto& t : ts) {
    std::vector<Seq> next;
    if (t.forgetful()) {
      const auto segs = t.segments(h);
      for (const auto& u : frontier)
        for (const auto& s : segs) {
          Seq v = u;
          v.insert(v.end(), s.begin(), s.end());
          next.push_back(std::move(v));
        }
    } else {
      for (const auto& u : frontier) {
        auto ext = t.extensions(u, h);
        next.insert(next.end(), ext.begin(), ext.end());
      }
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

/// A finite candidate (w, t_0, ..., t_n).
struct FiniteCandidate {
  Seq w;
  std::vector<Creature> creatures;

  Level end_level() const { return creatures.empty() ? static_cast<Level>(w.size()) : creatures.back().m_up(); }

  std::string key() const {
    std::string k = "w";
    for (auto x : w) k += std::to_string(x) + ",";
    for (const auto& t : creatures) k += "|" + t.key();
    return k;
  }

  friend bool operator==(const FiniteCandidate& a, const FiniteCandidate& b) {
    return a.w == b.w && a.creatures == b.creatures;
  }
};

/// The first broken candidate condition, if any.
inline std::optional<std::string> candidate_violation(const HSpec& h, const FiniteCandidate& c,
                                                      bool allow_empty = false) {
  if (c.creatures.empty() && !allow_empty) return "candidate has no creatures";
  try {
    check_chain(h, c.w, c.creatures);
  } catch (const InvalidInput& e) {
    return std::string(e.what());
  }
  for (std::size_t i = 0; i + 1 < c.creatures.size(); ++i) {
    const auto& nxt = c.creatures[i + 1];
    if (nxt.forgetful()) continue;
    for (const auto& v : pos(h, c.w, std::span<const Creature>(c.creatures).first(i + 1)))
      if (!nxt.domain_contains(v))
        return "possibility after creature " + std::to_string(i) + " outside the domain of creature " +
               std::to_string(i + 1);
  }
  return std::nullopt;
}

inline void validate_candidate(const HSpec& h, const FiniteCandidate& c, bool allow_empty = false) {
  if (auto v = candidate_violation(h, c, allow_empty)) throw InvalidInput(*v);
}

/// POS(c): all initial segments of members of pos(w, t_0, ..., t_n).
inline std::set<Seq> pos_closure(const HSpec& h, const FiniteCandidate& c) {
  std::set<Seq> out;
  for (const auto& v : pos(h, c.w, c.creatures))
    for (std::size_t len = 0; len <= v.size(); ++len) out.emplace(v.begin(), v.begin() + static_cast<long>(len));
  return out;
}

}  // namespace creaturekit
