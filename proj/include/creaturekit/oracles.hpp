#pragma once

// Literal brute-force evaluators used only by tests and the --oracle mode.
// Nothing here shares code with the production searches beyond the value types.

#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "creaturekit/creature.hpp"
#include "creaturekit/measured_tree.hpp"
#include "creaturekit/partial_fn.hpp"

namespace creaturekit::oracle {

namespace detail {

using Dom = std::vector<Level>;

inline bool disjoint(const Dom& a, const Dom& b) {
  for (Level x : a)
    for (Level y : b)
      if (x == y) return false;
  return true;
}

/// Some pairwise-disjoint subfamily of `ds` covers at least `need` points.
inline bool disjoint_cover_at_least(const std::vector<Dom>& ds, std::size_t need) {
  const std::size_t n = ds.size();
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1U) pick.push_back(i);
    bool ok = true;
    std::size_t total = 0;
    for (std::size_t a = 0; a < pick.size() && ok; ++a) {
      total += ds[pick[a]].size();
      for (std::size_t b = a + 1; b < pick.size() && ok; ++b) ok = disjoint(ds[pick[a]], ds[pick[b]]);
    }
    if (ok && total >= need) return true;
  }
  return false;
}

inline std::vector<Dom> domains(const std::vector<PartialFn>& fs) {
  std::vector<Dom> ds;
  for (const auto& f : fs) ds.push_back(f.domain());
  return ds;
}

}  // namespace detail

/// Hall norm straight from the definition: the largest k + 1 such that every subfamily D has a
/// disjoint subfamily covering at least k * |D| points.
inline int hall_norm(const std::vector<PartialFn>& fs) {
  const auto ds = detail::domains(fs);
  const std::size_t n = ds.size();
  int k = 0;
  while (true) {
    const std::size_t next = static_cast<std::size_t>(k + 1);
    bool all = true;
    for (std::size_t s = 1; s < (std::size_t{1} << n) && all; ++s) {
      std::vector<detail::Dom> sub;
      for (std::size_t i = 0; i < n; ++i)
        if ((s >> i) & 1U) sub.push_back(ds[i]);
      all = detail::disjoint_cover_at_least(sub, next * sub.size());
    }
    if (!all) return k + 1;
    ++k;
  }
}

namespace detail {

struct FamilyHash {
  std::size_t operator()(const std::vector<PartialFn>& fs) const {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& f : fs) {
      for (const auto& [lv, v] : f.entries()) h = (h ^ static_cast<std::size_t>(lv * 131 + v + 7)) * 1099511628211ULL;
      h = (h ^ 0xffU) * 1099511628211ULL;
    }
    return h;
  }
};

/// Memoised literal Hall norm.
inline int cached_hall_norm(const std::vector<PartialFn>& fs) {
  thread_local std::unordered_map<std::vector<PartialFn>, int, FamilyHash> cache;
  if (cache.size() > 2000000) cache.clear();
  auto it = cache.find(fs);
  if (it != cache.end()) return it->second;
  const int v = hall_norm(fs);
  cache.emplace(fs, v);
  return v;
}

}  // namespace detail

/// Selector norm by backtracking over explicit k-subsets of each domain.
inline int selector_norm(const std::vector<PartialFn>& fs) {
  const auto ds = detail::domains(fs);
  auto exists = [&](std::size_t k) {
    std::set<Level> used;
    std::function<bool(std::size_t)> member = [&](std::size_t i) -> bool {
      if (i == ds.size()) return true;
      std::vector<Level> free;
      for (Level x : ds[i])
        if (!used.count(x)) free.push_back(x);
      std::vector<Level> cur;
      std::function<bool(std::size_t)> choose = [&](std::size_t from) -> bool {
        if (cur.size() == k) return member(i + 1);
        for (std::size_t a = from; a < free.size(); ++a) {
          cur.push_back(free[a]);
          used.insert(free[a]);
          if (choose(a + 1)) return true;
          used.erase(free[a]);
          cur.pop_back();
        }
        return false;
      };
      return choose(0);
    };
    return member(0);
  };
  std::size_t k = 0;
  while (exists(k + 1)) ++k;
  return static_cast<int>(k) + 1;
}

/// Maximum Hall norm over refinements.
///
/// Every refinement contains, for each member f, some g contained in f; keeping only those chosen
/// g gives a refinement with no smaller Hall norm. So the maximum ranges over images of choice
/// functions f -> nonempty restriction of f, which are enumerated exhaustively here.
inline int refined_hall_norm(const std::vector<PartialFn>& fs) {
  std::size_t total = 0;
  for (const auto& f : fs) total += f.size();
  if (total > 12) throw CapExceeded("brute-force refined norm limited to total domain 12");
  std::vector<std::vector<PartialFn>> options;
  for (const auto& f : fs) {
    std::vector<PartialFn> rs;
    const auto& es = f.entries();
    for (std::size_t s = 1; s < (std::size_t{1} << es.size()); ++s) {
      std::vector<PartialFn::Entry> sub;
      for (std::size_t i = 0; i < es.size(); ++i)
        if ((s >> i) & 1U) sub.push_back(es[i]);
      rs.push_back(PartialFn::from_sorted(std::move(sub)));
    }
    options.push_back(std::move(rs));
  }
  int best = 0;
  std::vector<PartialFn> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) {
      std::set<PartialFn> uniq(cur.begin(), cur.end());
      best = std::max(best, detail::cached_hall_norm(std::vector<PartialFn>(uniq.begin(), uniq.end())));
      return;
    }
    for (const auto& g : options[i]) {
      cur.push_back(g);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return best;
}

/// pos(w, t_0, ..., t_n) by testing every sequence of the final length against each creature.
inline std::vector<Seq> pos_bruteforce(const HSpec& h, const Seq& w, std::span<const Creature> ts) {
  const std::size_t len = ts.empty() ? w.size() : static_cast<std::size_t>(ts.back().m_up());
  if (h.product(static_cast<Level>(w.size()), static_cast<Level>(len), 4097) > 4096)
    throw CapExceeded("brute-force pos limited to 4096 candidate sequences");
  std::vector<Seq> out;
  Seq v(len, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == len) {
      if (!std::equal(w.begin(), w.end(), v.begin())) return;
      for (const auto& t : ts) {
        const Seq a(v.begin(), v.begin() + t.m_dn());
        const Seq b(v.begin(), v.begin() + t.m_up());
        if (!t.val_contains(a, b)) return;
      }
      out.push_back(v);
      return;
    }
    for (Value x = 0; x < h.size(static_cast<Level>(i)); ++x) {
      v[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Every front of the tree, listed explicitly.
inline std::vector<Front> enumerate_fronts(const MeasuredTree& t) {
  if (t.is_empty()) return {};
  std::function<std::vector<Front>(const Seq&)> rec = [&](const Seq& eta) {
    std::vector<Front> out{Front{eta}};
    if (t.is_leaf(eta)) return out;
    std::vector<Front> acc{Front{}};
    for (Value k : t.children(eta)) {
      Seq c = eta;
      c.push_back(k);
      const auto sub = rec(c);
      std::vector<Front> next;
      for (const auto& a : acc)
        for (const auto& b : sub) {
          Front u = a;
          u.insert(b.begin(), b.end());
          next.push_back(std::move(u));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
    return out;
  };
  return rec(Seq{});
}

/// Minimum over all fronts A of mu_A(root), each front evaluated by downward induction. At every
/// node the set of values mu_A(eta) over fronts A of the subtree is formed from all combinations
/// of the children's value sets, plus 1 for the front {eta}.
inline Rational mu_F_fronts(const MeasuredTree& t) {
  if (t.depth() > 4) throw CapExceeded("front enumeration limited to depth 4");
  if (t.is_empty()) return 0;
  std::function<std::set<Rational>(Seq&)> rec = [&](Seq& eta) {
    std::set<Rational> out{Rational(1)};
    if (t.is_leaf(eta)) return out;
    const auto& w = t.weights(eta);
    std::set<Rational> acc{Rational(0)};
    for (Value k : t.children(eta)) {
      eta.push_back(k);
      const auto sub = rec(eta);
      eta.pop_back();
      std::set<Rational> next;
      for (const auto& a : acc)
        for (const auto& b : sub) next.insert(a + w[static_cast<std::size_t>(k)] * b);
      acc = std::move(next);
    }
    out.insert(acc.begin(), acc.end());
    return out;
  };
  Seq root;
  return *rec(root).begin();
}

}  // namespace creaturekit::oracle
