#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "creaturekit/partial_fn.hpp"

namespace creaturekit {

/// Size limits for the exponential searches.
struct Caps {
  std::size_t max_members = 12;
  std::size_t max_domain_total = 40;
  std::size_t max_refined_domain_total = 24;

  /// Defaults overridden by CREATUREKIT_CAPS, e.g. "members=14,domain=48,refined=28".
  static Caps from_env() {
    Caps c;
    const char* env = std::getenv("CREATUREKIT_CAPS");
    if (env == nullptr) return c;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      require(eq != std::string::npos, "malformed CREATUREKIT_CAPS entry '" + item + "'");
      const std::string key = item.substr(0, eq);
      const std::size_t val = std::stoul(item.substr(eq + 1));
      if (key == "members") c.max_members = val;
      else if (key == "domain") c.max_domain_total = val;
      else if (key == "refined") c.max_refined_domain_total = val;
      else throw InvalidInput("unknown cap '" + key + "'");
    }
    return c;
  }
};

/// Per-member chosen levels: picks[i] are sorted k-subsets of dom of members()[i], pairwise disjoint.
struct Selector {
  int k = 0;
  std::vector<std::vector<Level>> picks;
};

/// A subfamily whose domains jointly have fewer than k * |subfamily| points.
struct HallViolation {
  int k = 0;
  std::vector<std::size_t> members;  // indices into Family::members()
  std::size_t union_size = 0;
};

namespace detail {

struct DomainMasks {
  std::vector<Level> levels;          // sorted union of all domains
  std::vector<std::uint64_t> masks;   // bit j set when levels[j] is in the member's domain
};

inline DomainMasks index_domains(std::span<const PartialFn> fs) {
  DomainMasks dm;
  for (const auto& f : fs)
    for (const auto& e : f.entries()) dm.levels.push_back(e.first);
  std::sort(dm.levels.begin(), dm.levels.end());
  dm.levels.erase(std::unique(dm.levels.begin(), dm.levels.end()), dm.levels.end());
  if (dm.levels.size() > 64) throw CapExceeded("union of domains exceeds 64 levels");
  for (const auto& f : fs) {
    std::uint64_t m = 0;
    for (const auto& e : f.entries()) {
      const auto j = std::lower_bound(dm.levels.begin(), dm.levels.end(), e.first) - dm.levels.begin();
      m |= std::uint64_t{1} << j;
    }
    dm.masks.push_back(m);
  }
  return dm;
}

inline int pc(std::uint64_t m) { return std::popcount(m); }

inline int max_disjoint_cover_masks(std::vector<std::uint64_t> masks) {
  std::sort(masks.begin(), masks.end(), [](auto a, auto b) { return pc(a) > pc(b); });
  const std::size_t n = masks.size();
  std::vector<std::uint64_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] | masks[i];
  int best = 0;
  std::function<void(std::size_t, std::uint64_t, int)> rec = [&](std::size_t i, std::uint64_t used, int cur) {
    if (cur + pc(suffix[i] & ~used) <= best) return;
    if (i == n) {
      best = cur;
      return;
    }
    if ((masks[i] & used) == 0) rec(i + 1, used | masks[i], cur + pc(masks[i]));
    rec(i + 1, used, cur);
  };
  rec(0, 0, 0);
  return best;
}

inline void check_caps(const Family& d, std::size_t members_cap, std::size_t domain_cap, const char* what) {
  if (d.size() > members_cap)
    throw CapExceeded(std::string(what) + ": family has " + std::to_string(d.size()) + " members, cap is " +
                      std::to_string(members_cap));
  if (d.total_domain() > domain_cap)
    throw CapExceeded(std::string(what) + ": total domain size " + std::to_string(d.total_domain()) +
                      " exceeds cap " + std::to_string(domain_cap));
}

/// Bipartite matching of member copies (demand[i] copies of member i) into allowed levels.
class CopyMatcher {
 public:
  CopyMatcher(const std::vector<std::uint64_t>& masks, const std::vector<int>& demand, std::uint64_t allowed)
      : masks_(masks), allowed_(allowed) {
    for (std::size_t i = 0; i < demand.size(); ++i)
      for (int c = 0; c < demand[i]; ++c) owner_.push_back(i);
    match_.assign(64, -1);
  }

  /// Runs augmenting paths; on failure records the members reached from the stuck copy.
  bool run(std::vector<std::size_t>* stuck_members = nullptr, std::uint64_t* stuck_levels = nullptr) {
    for (std::size_t u = 0; u < owner_.size(); ++u) {
      std::uint64_t seen = 0;
      if (!augment(static_cast<int>(u), seen)) {
        if (stuck_members != nullptr) {
          std::vector<std::size_t> ms{owner_[u]};
          for (int r = 0; r < 64; ++r)
            if ((seen >> r) & 1U) ms.push_back(owner_[static_cast<std::size_t>(match_[static_cast<std::size_t>(r)])]);
          std::sort(ms.begin(), ms.end());
          ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
          *stuck_members = std::move(ms);
        }
        if (stuck_levels != nullptr) *stuck_levels = seen;
        return false;
      }
    }
    return true;
  }

  /// Levels (bit positions) matched to copies of member i.
  std::uint64_t levels_of(std::size_t i) const {
    std::uint64_t m = 0;
    for (int r = 0; r < 64; ++r) {
      const int u = match_[static_cast<std::size_t>(r)];
      if (u >= 0 && owner_[static_cast<std::size_t>(u)] == i) m |= std::uint64_t{1} << r;
    }
    return m;
  }

 private:
  bool augment(int u, std::uint64_t& seen) {
    std::uint64_t cand = masks_[owner_[static_cast<std::size_t>(u)]] & allowed_ & ~seen;
    while (cand != 0) {
      const int r = std::countr_zero(cand);
      cand &= cand - 1;
      seen |= std::uint64_t{1} << r;
      int& m = match_[static_cast<std::size_t>(r)];
      if (m < 0 || augment(m, seen)) {
        m = u;
        return true;
      }
      cand &= ~seen;
    }
    return false;
  }

  const std::vector<std::uint64_t>& masks_;
  std::uint64_t allowed_;
  std::vector<std::size_t> owner_;
  std::vector<int> match_;
};

inline bool selector_feasible(const std::vector<std::uint64_t>& masks, const std::vector<int>& demand,
                              std::uint64_t allowed) {
  CopyMatcher cm(masks, demand, allowed);
  return cm.run();
}

}  // namespace detail

/// Largest total domain size of a pairwise-disjoint subfamily.
inline int max_disjoint_cover(std::span<const PartialFn> fs) {
  return detail::max_disjoint_cover_masks(detail::index_domains(fs).masks);
}

/// Hall norm: 1 + min over nonempty subfamilies of floor(max disjoint cover / size).
inline int hall_norm(const Family& d, const Caps& caps = {}) {
  detail::check_caps(d, caps.max_members, caps.max_domain_total, "hall norm");
  const auto dm = detail::index_domains(d.members());
  const std::size_t n = d.size();
  int best = INT32_MAX;
  std::vector<std::uint64_t> sub;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n) && best > 0; ++s) {
    sub.clear();
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1U) sub.push_back(dm.masks[i]);
    const int q = detail::max_disjoint_cover_masks(sub) / static_cast<int>(sub.size());
    best = std::min(best, q);
  }
  return best + 1;
}

/// Selector norm by the closed formula: 1 + min over subfamilies of floor(|union of domains| / size).
inline int selector_norm(const Family& d, const Caps& caps = {}) {
  detail::check_caps(d, caps.max_members, caps.max_domain_total, "selector norm");
  const auto dm = detail::index_domains(d.members());
  const std::size_t n = d.size();
  int best = INT32_MAX;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n) && best > 0; ++s) {
    std::uint64_t u = 0;
    for (std::size_t i = 0; i < n; ++i)
      if ((s >> i) & 1U) u |= dm.masks[i];
    best = std::min(best, detail::pc(u) / std::popcount(s));
  }
  return best + 1;
}

/// Lexicographically least k-selector, or nothing when none exists.
inline std::optional<Selector> find_selector(const Family& d, int k) {
  require(k >= 0, "selector size must be nonnegative");
  const auto dm = detail::index_domains(d.members());
  const std::size_t n = d.size();
  std::vector<int> demand(n, k);
  std::uint64_t allowed = ~std::uint64_t{0};
  if (!detail::selector_feasible(dm.masks, demand, allowed)) return std::nullopt;
  Selector sel;
  sel.k = k;
  sel.picks.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    int last = -1;
    for (int slot = 0; slot < k; ++slot) {
      bool placed = false;
      std::uint64_t cand = dm.masks[i] & allowed;
      if (last >= 0) cand &= ~((std::uint64_t{2} << last) - 1);
      while (cand != 0 && !placed) {
        const int r = std::countr_zero(cand);
        cand &= cand - 1;
        const std::uint64_t bit = std::uint64_t{1} << r;
        --demand[i];
        if (detail::selector_feasible(dm.masks, demand, allowed & ~bit)) {
          allowed &= ~bit;
          sel.picks[i].push_back(dm.levels[static_cast<std::size_t>(r)]);
          last = r;
          placed = true;
        } else {
          ++demand[i];
        }
      }
      if (!placed) throw PropertyFailure("selector extension lost feasibility");
    }
  }
  return sel;
}

/// A subfamily certifying that no k-selector exists, or nothing when one does.
inline std::optional<HallViolation> hall_violation(const Family& d, int k) {
  const auto dm = detail::index_domains(d.members());
  std::vector<int> demand(d.size(), k);
  detail::CopyMatcher cm(dm.masks, demand, ~std::uint64_t{0});
  std::vector<std::size_t> ms;
  std::uint64_t lv = 0;
  if (cm.run(&ms, &lv)) return std::nullopt;
  HallViolation hv;
  hv.k = k;
  hv.members = std::move(ms);
  std::uint64_t u = 0;
  for (auto i : hv.members) u |= dm.masks[i];
  hv.union_size = static_cast<std::size_t>(detail::pc(u));
  return hv;
}

inline bool is_selector(const Family& d, const Selector& s) {
  if (s.picks.size() != d.size()) return false;
  std::vector<Level> all;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& p = s.picks[i];
    if (static_cast<int>(p.size()) != s.k) return false;
    for (Level lv : p) {
      if (!d.members()[i].at(lv)) return false;
      all.push_back(lv);
    }
  }
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

struct SelectorWitness {
  int value = 1;                          // selector norm
  Selector selector;                      // of size value - 1
  std::optional<HallViolation> obstruction;  // for size value
};

/// Selector norm by matching: largest k admitting a k-selector, plus one, with both certificates.
inline SelectorWitness selector_norm_by_matching(const Family& d, const Caps& caps = {}) {
  detail::check_caps(d, caps.max_members, caps.max_domain_total, "selector norm");
  SelectorWitness w;
  int k = 0;
  w.selector = Selector{0, std::vector<std::vector<Level>>(d.size())};
  while (true) {
    auto s = find_selector(d, k + 1);
    if (!s) break;
    w.selector = std::move(*s);
    ++k;
  }
  w.value = k + 1;
  w.obstruction = hall_violation(d, k + 1);
  return w;
}

struct RefinedNorm {
  int value = 1;
  std::optional<Family> refinement;  // pairwise-disjoint refinement attaining the value, when above 1
};

/// Maximum of the Hall norm over all refinements of d.
///
/// The maximum is attained by a refinement whose members have pairwise disjoint domains of a common
/// size k, giving value k + 1; when no disjoint refinement exists the value is 1.
inline RefinedNorm refined_hall_norm(const Family& d, const Caps& caps = {}) {
  if (d.total_domain() > caps.max_refined_domain_total)
    throw CapExceeded("refined norm: total domain size " + std::to_string(d.total_domain()) + " exceeds cap " +
                      std::to_string(caps.max_refined_domain_total));
  const auto& fs = d.members();
  const auto dm = detail::index_domains(fs);
  std::size_t ub = SIZE_MAX;
  for (const auto& f : fs) ub = std::min(ub, f.size());

  std::vector<PartialFn> chosen;
  std::vector<std::uint64_t> chosen_masks;
  std::function<bool(std::size_t, std::uint64_t, int)> search = [&](std::size_t i, std::uint64_t used, int k) {
    if (i == fs.size()) return true;
    for (const auto& g : chosen)
      if (g.subfunction_of(fs[i])) return search(i + 1, used, k);
    std::vector<int> avail;
    for (std::uint64_t a = dm.masks[i] & ~used; a != 0; a &= a - 1) avail.push_back(std::countr_zero(a));
    if (static_cast<int>(avail.size()) < k) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::function<bool(int, int, std::uint64_t)> pick = [&](int slot, int from, std::uint64_t m) {
      if (slot == k) {
        std::vector<Level> lv;
        for (int b = 0; b < 64; ++b)
          if ((m >> b) & 1U) lv.push_back(dm.levels[static_cast<std::size_t>(b)]);
        chosen.push_back(restrict_to(fs[i], lv));
        if (search(i + 1, used | m, k)) return true;
        chosen.pop_back();
        return false;
      }
      for (int a = from; a + (k - slot) <= static_cast<int>(avail.size()); ++a)
        if (pick(slot + 1, a + 1, m | (std::uint64_t{1} << avail[static_cast<std::size_t>(a)]))) return true;
      return false;
    };
    return pick(0, 0, 0);
  };

  for (int k = static_cast<int>(ub); k >= 1; --k) {
    chosen.clear();
    if (search(0, 0, k)) return RefinedNorm{k + 1, Family(chosen, d.hspec_ptr())};
  }
  return RefinedNorm{1, std::nullopt};
}

/// All three norms with witnesses.
struct NormReport {
  int hn = 1;
  int hn_plus = 1;
  int HN = 1;
  Selector selector;
  std::optional<HallViolation> obstruction;
  std::optional<Family> refinement;
};

inline NormReport hall_report(const Family& d, const Caps& caps = {}) {
  NormReport r;
  r.hn = hall_norm(d, caps);
  r.hn_plus = selector_norm(d, caps);
  auto w = selector_norm_by_matching(d, caps);
  if (w.value != r.hn_plus)
    throw PropertyFailure("selector norm formula (" + std::to_string(r.hn_plus) + ") disagrees with matching (" +
                          std::to_string(w.value) + ")");
  r.selector = std::move(w.selector);
  r.obstruction = std::move(w.obstruction);
  auto rn = refined_hall_norm(d, caps);
  r.HN = rn.value;
  r.refinement = std::move(rn.refinement);
  return r;
}

}  // namespace creaturekit
