#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "creaturekit/creature.hpp"
#include "creaturekit/systems.hpp"

namespace creaturekit {

/// Replace the first `consumed` creatures by a chosen possibility w_star.
struct Decide {
  Seq w_star;
  std::size_t consumed = 0;
};

/// Group the creatures into consecutive blocks and replace each block by one creature.
struct Compose {
  std::vector<std::size_t> block_sizes;
  std::vector<Creature> replacements;
};

/// Replace every creature by a splitting of it.
struct Decompose {
  std::vector<std::vector<Creature>> splittings;
};

using FcOp = std::variant<Decide, Compose, Decompose>;

inline const char* op_name(const FcOp& op) {
  switch (op.index()) {
    case 0: return "decide";
    case 1: return "compose";
    default: return "decompose";
  }
}

namespace detail {

inline void require_candidate_system(const ExampleSystem& sys) {
  if (sys.kind == CreatureKind::loctree)
    throw InvalidInput("loctree creatures form tree candidates, not finite candidates");
}

}  // namespace detail

/// Applies one operation to a finite candidate and re-validates the result.
inline FiniteCandidate fc_apply(const ExampleSystem& sys, const FiniteCandidate& c, const FcOp& op) {
  detail::require_candidate_system(sys);
  const HSpec& h = sys.h();
  validate_candidate(h, c, true);
  FiniteCandidate out;
  if (const auto* d = std::get_if<Decide>(&op)) {
    require(d->consumed <= c.creatures.size(), "decide consumes more creatures than the candidate has");
    const std::span<const Creature> head(c.creatures.data(), d->consumed);
    if (d->consumed == 0) {
      require(d->w_star == c.w, "decide with no creatures consumed must keep w");
    } else {
      const auto ps = pos(h, c.w, head);
      require(std::binary_search(ps.begin(), ps.end(), d->w_star),
              "decided sequence is not in pos(w, t_0, ..., t_" + std::to_string(d->consumed - 1) + ")");
    }
    out.w = d->w_star;
    out.creatures.assign(c.creatures.begin() + static_cast<long>(d->consumed), c.creatures.end());
  } else if (const auto* m = std::get_if<Compose>(&op)) {
    require(m->block_sizes.size() == m->replacements.size(), "compose needs one replacement per block");
    std::size_t at = 0;
    out.w = c.w;
    for (std::size_t b = 0; b < m->block_sizes.size(); ++b) {
      const std::size_t len = m->block_sizes[b];
      require(len > 0 && at + len <= c.creatures.size(), "compose blocks do not partition the creature list");
      const std::span<const Creature> block(c.creatures.data() + at, len);
      bool ok = false;
      try {
        ok = sigma_member(sys, m->replacements[b], block);
      } catch (const InvalidInput& e) {
        throw InvalidInput("compose block " + std::to_string(b) + ": " + e.what());
      }
      if (!ok) throw InvalidInput("compose replacement " + std::to_string(b) + " is not in Sigma of its block");
      out.creatures.push_back(m->replacements[b]);
      at += len;
    }
    require(at == c.creatures.size(), "compose blocks do not partition the creature list");
  } else {
    const auto& dd = std::get<Decompose>(op);
    require(dd.splittings.size() == c.creatures.size(), "decompose needs one splitting per creature");
    out.w = c.w;
    for (std::size_t i = 0; i < dd.splittings.size(); ++i) {
      bool ok = false;
      try {
        ok = sigma_bot_member(sys, dd.splittings[i], c.creatures[i]);
      } catch (const InvalidInput& e) {
        throw InvalidInput("decompose splitting " + std::to_string(i) + ": " + e.what());
      }
      if (!ok) throw InvalidInput("decompose splitting " + std::to_string(i) + " is not in Sigma-bottom of creature " +
                                  std::to_string(i));
      out.creatures.insert(out.creatures.end(), dd.splittings[i].begin(), dd.splittings[i].end());
    }
  }
  if (auto v = candidate_violation(h, out, true)) throw InvalidInput("result is not a finite candidate: " + *v);
  return out;
}

struct FcChain {
  bool found = false;
  std::vector<FcOp> steps;
  std::vector<FiniteCandidate> candidates;  // c0, then the result of each step
  std::size_t explored = 0;
  std::string reason;
};

namespace detail {

inline bool seq_subset(const std::set<Seq>& a, const std::set<Seq>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Candidate creatures on [lo, hi) for a replacement or a splitting part.
class CreaturePool {
 public:
  CreaturePool(const ExampleSystem& sys, const FiniteCandidate& target) : sys_(sys) {
    for (const auto& t : target.creatures) add(t);
  }

  void add(const Creature& t) {
    auto& v = by_interval_[{t.m_dn(), t.m_up()}];
    if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
  }

  std::vector<Creature> on(Level lo, Level hi) const {
    auto it = by_interval_.find({lo, hi});
    return it == by_interval_.end() ? std::vector<Creature>{} : it->second;
  }

  /// Replacements for a block: pooled creatures, the canonical join, small Sigma closures.
  std::vector<Creature> replacements(std::span<const Creature> block) const {
    const Level lo = block.front().m_dn(), hi = block.back().m_up();
    std::vector<Creature> out = on(lo, hi);
    auto push = [&](const Creature& s) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    if (sys_.kind == CreatureKind::bas628 || sys_.kind == CreatureKind::bas628bis) {
      std::vector<PartialFn> fs;
      HSpecPtr hp;
      for (const auto& t : block)
        if (t.delta()) {
          fs.insert(fs.end(), t.delta()->members().begin(), t.delta()->members().end());
          hp = t.delta()->hspec_ptr();
        }
      try {
        if (fs.empty()) push(make_family_creature(sys_, lo, hi, std::nullopt));
        else push(make_family_creature(sys_, lo, hi, Family(fs, hp)));
      } catch (const Error&) {
      }
    }
    if (block.size() == 1 && (sys_.kind == CreatureKind::edrf || sys_.kind == CreatureKind::omitex)) {
      try {
        for (const auto& s : excluded_sigma_closure(sys_, block[0], 256)) push(s);
      } catch (const CapExceeded&) {
      }
    }
    return out;
  }

  /// Splittings of t: tilings by pooled creatures, cuts, and projections at interior levels.
  std::vector<std::vector<Creature>> splittings(const Creature& t) const {
    std::vector<std::vector<Creature>> out;
    auto push = [&](std::vector<Creature> sp) {
      if (std::find(out.begin(), out.end(), sp) == out.end()) out.push_back(std::move(sp));
    };
    std::vector<Creature> cur;
    std::function<void(Level)> tile = [&](Level at) {
      if (at == t.m_up()) {
        if (cur.size() > 1) push(cur);
        return;
      }
      for (const auto& [iv, ts] : by_interval_) {
        if (iv.first != at || iv.second > t.m_up()) continue;
        for (const auto& s : ts) {
          cur.push_back(s);
          tile(iv.second);
          cur.pop_back();
        }
      }
    };
    tile(t.m_dn());
    if (sys_.kind == CreatureKind::bas628 || sys_.kind == CreatureKind::bas628bis) {
      for (Level m = t.m_dn() + 1; m < t.m_up(); ++m) {
        if (sys_.kind == CreatureKind::bas628bis) {
          try {
            auto r = cut(sys_, t, m);
            push({r.s0, r.s1});
          } catch (const Error&) {
          }
        }
        try {
          std::vector<PartialFn> l, r;
          if (t.delta())
            for (const auto& f : t.delta()->members()) {
              if (auto a = restrict(f, t.m_dn(), m)) l.push_back(*a);
              if (auto b = restrict(f, m, t.m_up())) r.push_back(*b);
            }
          auto mk = [&](Level a, Level b, std::vector<PartialFn>& fs) {
            if (fs.empty()) return make_family_creature(sys_, a, b, std::nullopt);
            return make_family_creature(sys_, a, b, Family(fs, t.delta()->hspec_ptr()));
          };
          push({mk(t.m_dn(), m, l), mk(m, t.m_up(), r)});
        } catch (const Error&) {
        }
      }
    }
    std::vector<std::vector<Creature>> valid;
    for (auto& sp : out) {
      try {
        if (sigma_bot_member(sys_, sp, t)) valid.push_back(std::move(sp));
      } catch (const InvalidInput&) {
      }
    }
    return valid;
  }

 private:
  const ExampleSystem& sys_;
  std::map<std::pair<Level, Level>, std::vector<Creature>> by_interval_;
};

}  // namespace detail

/// Searches for a chain of operations leading from c0 to c1, expanding at most `budget` candidates.
/// Moves are tried in the order decide, compose, decompose; candidates whose POS misses part of
/// POS(c1) are never expanded, since every operation shrinks POS.
inline FcChain fc_leq_witness(const ExampleSystem& sys, const FiniteCandidate& c0, const FiniteCandidate& c1,
                              std::size_t budget) {
  detail::require_candidate_system(sys);
  require(budget >= 1, "budget must be at least 1");
  const HSpec& h = sys.h();
  validate_candidate(h, c0, true);
  validate_candidate(h, c1, true);
  FcChain res;
  res.candidates.push_back(c0);
  if (c0 == c1) {
    res.found = true;
    return res;
  }
  const auto target_pos = pos_closure(h, c1);
  if (!detail::seq_subset(target_pos, pos_closure(h, c0))) {
    res.reason = "POS(c1) is not contained in POS(c0)";
    return res;
  }
  if (c1.w.size() < c0.w.size() || !std::equal(c0.w.begin(), c0.w.end(), c1.w.begin())) {
    res.reason = "w of c1 does not extend w of c0";
    return res;
  }
  if (c1.end_level() != c0.end_level()) {
    res.reason = "candidates end at different levels";
    return res;
  }

  const detail::CreaturePool pool(sys, c1);
  struct Node {
    FiniteCandidate c;
    std::ptrdiff_t parent;
    std::optional<FcOp> op;
  };
  std::vector<Node> nodes{{c0, -1, std::nullopt}};
  std::unordered_map<std::string, std::size_t> seen{{c0.key(), 0}};
  std::deque<std::size_t> queue{0};
  const std::string goal = c1.key();

  auto finish = [&](std::size_t idx) {
    std::vector<std::size_t> path;
    for (auto i = static_cast<std::ptrdiff_t>(idx); i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
      path.push_back(static_cast<std::size_t>(i));
    std::reverse(path.begin(), path.end());
    res.found = true;
    res.candidates.clear();
    for (std::size_t i : path) {
      res.candidates.push_back(nodes[i].c);
      if (nodes[i].op) res.steps.push_back(*nodes[i].op);
    }
  };

  while (!queue.empty()) {
    if (res.explored >= budget) {
      res.reason = "budget exhausted";
      return res;
    }
    const std::size_t cur = queue.front();
    queue.pop_front();
    ++res.explored;
    const FiniteCandidate c = nodes[cur].c;
    std::vector<FcOp> moves;
    const auto& ts = c.creatures;
    // decide: the only useful w* is the matching prefix of w^{c1}
    for (std::size_t k = 1; k <= ts.size(); ++k) {
      const auto len = static_cast<std::size_t>(ts[k - 1].m_up());
      if (len > c1.w.size()) break;
      moves.push_back(Decide{Seq(c1.w.begin(), c1.w.begin() + static_cast<long>(len)), k});
    }
    // compose a single block, keeping the rest
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (std::size_t len = 1; i + len <= ts.size(); ++len) {
        const std::span<const Creature> block(ts.data() + i, len);
        for (const auto& s : pool.replacements(block)) {
          if (len == 1 && s == ts[i]) continue;
          Compose m;
          std::vector<Creature> reps;
          for (std::size_t j = 0; j < i; ++j) m.block_sizes.push_back(1), reps.push_back(ts[j]);
          m.block_sizes.push_back(len);
          reps.push_back(s);
          for (std::size_t j = i + len; j < ts.size(); ++j) m.block_sizes.push_back(1), reps.push_back(ts[j]);
          m.replacements = std::move(reps);
          moves.push_back(std::move(m));
        }
      }
    // decompose one creature
    for (std::size_t i = 0; i < ts.size(); ++i)
      for (auto& sp : pool.splittings(ts[i])) {
        Decompose d;
        for (std::size_t j = 0; j < ts.size(); ++j) d.splittings.push_back(j == i ? sp : std::vector<Creature>{ts[j]});
        moves.push_back(std::move(d));
      }

    for (auto& mv : moves) {
      FiniteCandidate next;
      try {
        next = fc_apply(sys, c, mv);
      } catch (const InvalidInput&) {
        continue;
      }
      auto key = next.key();
      if (seen.count(key)) continue;
      if (!detail::seq_subset(target_pos, pos_closure(h, next))) continue;
      seen.emplace(key, nodes.size());
      nodes.push_back({std::move(next), static_cast<std::ptrdiff_t>(cur), std::move(mv)});
      if (key == goal) {
        finish(nodes.size() - 1);
        return res;
      }
      queue.push_back(nodes.size() - 1);
    }
  }
  res.reason = "search space exhausted";
  return res;
}

/// Replays a chain and reports the first failing step.
inline std::optional<std::string> replay_chain(const ExampleSystem& sys, const FiniteCandidate& c0,
                                               const std::vector<FcOp>& steps, const FiniteCandidate& c1) {
  FiniteCandidate c = c0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      c = fc_apply(sys, c, steps[i]);
    } catch (const InvalidInput& e) {
      return "step " + std::to_string(i) + ": " + e.what();
    }
  }
  if (!(c == c1)) return std::string("chain ends at a different candidate");
  return std::nullopt;
}

}  // namespace creaturekit
