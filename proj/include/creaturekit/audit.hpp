#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "creaturekit/partial_fn.hpp"

namespace creaturekit {

/// Outcome of one clause; `witness` names the first violation.
struct ClauseResult {
  std::string clause;
  bool pass = true;
  std::string witness;
};

/// Finite-prefix audit. A passing report means "prefix-valid": the clauses quantifying over
/// infinite objects are not checked.
struct AuditReport {
  std::string subject;
  std::vector<ClauseResult> clauses;

  bool prefix_valid() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.pass; });
  }
  const ClauseResult* first_failure() const {
    for (const auto& c : clauses)
      if (!c.pass) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string seq_str(const Seq& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ">";
}

/// All 0-1 sequences of length n, lexicographically.
inline std::vector<Seq> binary_sequences(int n) {
  require(n >= 0 && n < 24, "binary sequence length out of range");
  std::vector<Seq> out;
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    Seq s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<int>((m >> (n - 1 - i)) & 1U);
    out.push_back(std::move(s));
  }
  return out;
}

inline bool is_binary(const Seq& s) {
  return std::all_of(s.begin(), s.end(), [](int x) { return x == 0 || x == 1; });
}

class ClauseBuilder {
 public:
  explicit ClauseBuilder(std::string name) { r_.clause = std::move(name); }
  void fail(const std::string& w) {
    if (r_.pass) {
      r_.pass = false;
      r_.witness = w;
    }
  }
  bool ok() const { return r_.pass; }
  ClauseResult done() const { return r_; }

 private:
  ClauseResult r_;
};

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// 1-norming systems

/// Prefix K_0, ..., K_{L-1} of index sets with g_rho for rho in 2^l, l < L, each a function on K_l.
struct NormingSystem1 {
  std::vector<std::vector<int>> K;
  std::map<Seq, std::map<int, Value>> g;
};

inline AuditReport audit_norming1(const HSpec& h, const NormingSystem1& ns) {
  AuditReport rep{"norming1", {}};
  const int L = static_cast<int>(ns.K.size());
  detail::ClauseBuilder alpha("alpha");
  std::map<int, int> owner;
  for (int l = 0; l < L; ++l) {
    const auto& k = ns.K[static_cast<std::size_t>(l)];
    if (k.empty()) alpha.fail("K_" + std::to_string(l) + " is empty");
    for (int m : k) {
      if (m < l) alpha.fail("min K_" + std::to_string(l) + " = " + std::to_string(m) + " < " + std::to_string(l));
      if (m < 0 || static_cast<std::size_t>(m) >= h.length())
        alpha.fail("index " + std::to_string(m) + " outside the alphabet window");
      auto [it, fresh] = owner.emplace(m, l);
      if (!fresh && it->second != l)
        alpha.fail("index " + std::to_string(m) + " lies in K_" + std::to_string(it->second) + " and K_" +
                   std::to_string(l));
    }
  }
  rep.clauses.push_back(alpha.done());

  detail::ClauseBuilder beta("beta");
  for (int l = 0; l < L && l < 24; ++l)
    for (const auto& rho : detail::binary_sequences(l))
      if (!ns.g.count(rho)) beta.fail("g" + detail::seq_str(rho) + " missing");
  for (const auto& [rho, f] : ns.g)
    if (!detail::is_binary(rho) || static_cast<int>(rho.size()) >= L)
      beta.fail("g" + detail::seq_str(rho) + " indexed outside 2^{<" + std::to_string(L) + "}");
  rep.clauses.push_back(beta.done());

  detail::ClauseBuilder gamma("gamma");
  for (const auto& [rho, f] : ns.g) {
    if (static_cast<int>(rho.size()) >= L) continue;
    const auto& k = ns.K[rho.size()];
    const std::set<int> want(k.begin(), k.end());
    std::set<int> have;
    for (const auto& [m, v] : f) {
      have.insert(m);
      if (m < 0 || static_cast<std::size_t>(m) >= h.length() || !h.contains(m, v))
        gamma.fail("g" + detail::seq_str(rho) + "(" + std::to_string(m) + ") = " + std::to_string(v) +
                   " outside H(" + std::to_string(m) + ")");
    }
    if (have != want) gamma.fail("g" + detail::seq_str(rho) + " is not defined exactly on K_" + std::to_string(rho.size()));
  }
  rep.clauses.push_back(gamma.done());

  detail::ClauseBuilder delta("delta");
  for (int l = 0; l < L && l < 24; ++l)
    for (int m : ns.K[static_cast<std::size_t>(l)]) {
      std::map<Value, Seq> seen;
      for (const auto& rho : detail::binary_sequences(l)) {
        auto it = ns.g.find(rho);
        if (it == ns.g.end()) continue;
        auto v = it->second.find(m);
        if (v == it->second.end()) continue;
        auto [at, fresh] = seen.emplace(v->second, rho);
        if (!fresh)
          delta.fail("g" + detail::seq_str(at->second) + "(" + std::to_string(m) + ") = g" + detail::seq_str(rho) +
                     "(" + std::to_string(m) + ") = " + std::to_string(v->second));
      }
    }
  rep.clauses.push_back(delta.done());
  return rep;
}

// ---------------------------------------------------------------------------------------------
// 2-norming systems

/// Prefixes of the index sets U_{rho,k}.
struct NormingSystem2 {
  std::map<std::pair<Seq, int>, std::vector<int>> U;
};

inline AuditReport audit_norming2(const NormingSystem2& ns) {
  AuditReport rep{"norming2", {}};
  detail::ClauseBuilder disjoint("disjoint");
  detail::ClauseBuilder least("min");
  std::map<int, std::pair<Seq, int>> owner;
  for (const auto& [key, u] : ns.U) {
    const auto& [rho, k] = key;
    const std::string name = "U_{" + detail::seq_str(rho) + "," + std::to_string(k) + "}";
    if (!detail::is_binary(rho) || k < 0) disjoint.fail(name + " has a malformed index");
    if (u.empty()) least.fail(name + " is empty");
    for (int m : u) {
      if (m < static_cast<int>(rho.size()))
        least.fail("min " + name + " = " + std::to_string(m) + " < lh(rho) = " + std::to_string(rho.size()));
      auto [it, fresh] = owner.emplace(m, key);
      if (!fresh && it->second != key)
        disjoint.fail("index " + std::to_string(m) + " lies in U_{" + detail::seq_str(it->second.first) + "," +
                      std::to_string(it->second.second) + "} and " + name);
    }
  }
  rep.clauses.push_back(disjoint.done());
  rep.clauses.push_back(least.done());
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Sourness systems

/// Levels l_0 < l_1 < ... and, for rho in 2^k, g_rho: a list of l_k value sets.
struct SournessSystem {
  std::vector<int> ell;
  std::map<Seq, std::vector<std::vector<Value>>> g;
};

inline AuditReport audit_sourness(const HSpec& h, const SournessSystem& ss) {
  AuditReport rep{"sourness", {}};
  const int K = static_cast<int>(ss.ell.size());
  detail::ClauseBuilder alpha("alpha");
  if (ss.ell.empty()) alpha.fail("no levels given");
  for (int k = 0; k < K; ++k) {
    if (ss.ell[static_cast<std::size_t>(k)] < 0) alpha.fail("negative level");
    if (k > 0 && ss.ell[static_cast<std::size_t>(k)] <= ss.ell[static_cast<std::size_t>(k - 1)])
      alpha.fail("l_" + std::to_string(k) + " = " + std::to_string(ss.ell[static_cast<std::size_t>(k)]) +
                 " does not exceed l_" + std::to_string(k - 1));
  }
  if (K > 0 && static_cast<std::size_t>(ss.ell.back()) > h.length()) alpha.fail("levels exceed the alphabet window");
  rep.clauses.push_back(alpha.done());
  if (!alpha.ok()) return rep;

  detail::ClauseBuilder beta("beta");
  for (int k = 0; k < K && k < 24; ++k)
    for (const auto& rho : detail::binary_sequences(k)) {
      auto it = ss.g.find(rho);
      if (it == ss.g.end()) {
        beta.fail("g" + detail::seq_str(rho) + " missing");
        continue;
      }
      const auto& gr = it->second;
      if (static_cast<int>(gr.size()) != ss.ell[static_cast<std::size_t>(k)]) {
        beta.fail("g" + detail::seq_str(rho) + " has length " + std::to_string(gr.size()) + ", expected l_" +
                  std::to_string(k));
        continue;
      }
      for (std::size_t i = 0; i < gr.size(); ++i)
        for (Value v : gr[i])
          if (!h.contains(static_cast<Level>(i), v))
            beta.fail("g" + detail::seq_str(rho) + "(" + std::to_string(i) + ") contains " + std::to_string(v) +
                      " outside H(" + std::to_string(i) + ")");
      if (k > 0) {
        const Seq parent(rho.begin(), rho.end() - 1);
        auto p = ss.g.find(parent);
        if (p != ss.g.end()) {
          for (std::size_t i = 0; i < p->second.size() && i < gr.size(); ++i) {
            std::set<Value> a(p->second[i].begin(), p->second[i].end()), b(gr[i].begin(), gr[i].end());
            if (a != b) {
              beta.fail("g" + detail::seq_str(parent) + " is not an initial segment of g" + detail::seq_str(rho) +
                        " (level " + std::to_string(i) + ")");
              break;
            }
          }
        }
      }
    }
  for (const auto& [rho, gr] : ss.g)
    if (!detail::is_binary(rho) || static_cast<int>(rho.size()) >= K)
      beta.fail("g" + detail::seq_str(rho) + " indexed outside 2^{<" + std::to_string(K) + "}");
  rep.clauses.push_back(beta.done());

  detail::ClauseBuilder gamma("gamma");
  for (int k = 0; k + 1 < K && k + 1 < 24; ++k) {
    const auto rhos = detail::binary_sequences(k + 1);
    for (int n = ss.ell[static_cast<std::size_t>(k)]; n < ss.ell[static_cast<std::size_t>(k + 1)]; ++n) {
      std::map<Value, Seq> owner;
      for (const auto& rho : rhos) {
        auto it = ss.g.find(rho);
        if (it == ss.g.end() || static_cast<std::size_t>(n) >= it->second.size()) continue;
        const auto& set = it->second[static_cast<std::size_t>(n)];
        if (set.empty()) gamma.fail("g" + detail::seq_str(rho) + "(" + std::to_string(n) + ") is empty");
        for (Value v : std::set<Value>(set.begin(), set.end())) {
          auto [at, fresh] = owner.emplace(v, rho);
          if (!fresh)
            gamma.fail("g" + detail::seq_str(at->second) + "(" + std::to_string(n) + ") and g" +
                       detail::seq_str(rho) + "(" + std::to_string(n) + ") share " + std::to_string(v));
        }
      }
      if (static_cast<int>(owner.size()) >= h.size(n))
        gamma.fail("the sets g_rho(" + std::to_string(n) + ") cover H(" + std::to_string(n) + ")");
    }
  }
  rep.clauses.push_back(gamma.done());
  return rep;
}

/// l_0 = 0, l_{k+1} = l_k + 2^(2^k), for k <= k_max.
inline std::vector<int> sourness_levels(int k_max) {
  require(0 <= k_max && k_max <= 4, "k_max must lie in [0, 4]");
  std::vector<int> ell{0};
  for (int k = 0; k < k_max; ++k) ell.push_back(ell.back() + (1 << (1 << k)));
  return ell;
}

/// The sourness system for the eventually-different creatures: on block k every rho in 2^{k+1}
/// gets the singleton of its binary value, so the sets are distinct and miss the top values.
inline SournessSystem gen_edrf_sourness(int k_max, const HSpec& h) {
  SournessSystem ss;
  ss.ell = sourness_levels(k_max);
  require(h.length() >= static_cast<std::size_t>(ss.ell.back()),
          "alphabet window shorter than l_" + std::to_string(k_max) + " = " + std::to_string(ss.ell.back()));
  for (int k = 0; k < k_max; ++k)
    for (int n = ss.ell[static_cast<std::size_t>(k)]; n < ss.ell[static_cast<std::size_t>(k + 1)]; ++n)
      if (h.size(n) < (1 << (k + 1)) + 1)
        throw InvalidInput("H(" + std::to_string(n) + ") has " + std::to_string(h.size(n)) + " values; block " +
                           std::to_string(k) + " needs " + std::to_string((1 << (k + 1)) + 1));
  for (int k = 0; k <= k_max; ++k)
    for (const auto& rho : detail::binary_sequences(k)) {
      std::vector<std::vector<Value>> gr;
      for (int j = 0; j < k; ++j) {
        int code = 0;
        for (int i = 0; i <= j; ++i) code = 2 * code + rho[static_cast<std::size_t>(i)];
        for (int n = ss.ell[static_cast<std::size_t>(j)]; n < ss.ell[static_cast<std::size_t>(j + 1)]; ++n)
          gr.push_back({code});
      }
      ss.g.emplace(rho, std::move(gr));
    }
  return ss;
}

/// Finite-window look at the bounds for a pure candidate with excluded sets E_n, starting at l_{k0}.
/// Not authoritative: the real clause quantifies over infinite candidates.
struct HeuristicWindow {
  int block = 0;
  int small_count = 0;      // rho in 2^{k+1} meeting pos on fewer than 2^{k+1} levels of the block
  bool pos_escapes = true;  // every level of the block has a possibility outside all g_rho(n)
};

inline std::vector<HeuristicWindow> heuristic_delta(const HSpec& h, const SournessSystem& ss, int k0,
                                                    const std::vector<std::vector<Value>>& excluded) {
  require(0 <= k0 && static_cast<std::size_t>(k0) < ss.ell.size(), "k0 outside the level list");
  const int start = ss.ell[static_cast<std::size_t>(k0)];
  std::vector<HeuristicWindow> out;
  for (int k = k0; k + 1 < static_cast<int>(ss.ell.size()); ++k) {
    const int lo = ss.ell[static_cast<std::size_t>(k)], hi = ss.ell[static_cast<std::size_t>(k + 1)];
    if (hi - start > static_cast<int>(excluded.size())) break;
    HeuristicWindow w{k, 0, true};
    auto allowed = [&](int n, Value v) {
      const auto& e = excluded[static_cast<std::size_t>(n - start)];
      return std::find(e.begin(), e.end(), v) == e.end();
    };
    const auto rhos = detail::binary_sequences(k + 1);
    for (const auto& rho : rhos) {
      int hits = 0;
      for (int n = lo; n < hi; ++n)
        for (Value v : ss.g.at(rho)[static_cast<std::size_t>(n)])
          if (allowed(n, v)) {
            ++hits;
            break;
          }
      if (hits < (1 << (k + 1))) ++w.small_count;
    }
    for (int n = lo; n < hi; ++n) {
      std::set<Value> covered;
      for (const auto& rho : rhos)
        for (Value v : ss.g.at(rho)[static_cast<std::size_t>(n)]) covered.insert(v);
      bool escape = false;
      for (Value v = 0; v < h.size(n) && !escape; ++v) escape = allowed(n, v) && !covered.count(v);
      if (!escape) w.pos_escapes = false;
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace creaturekit
