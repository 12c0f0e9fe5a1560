#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "creaturekit/norm.hpp"
#include "creaturekit/partial_fn.hpp"
#include "creaturekit/tree_creature.hpp"

namespace creaturekit {

/// A finite tree S of height lev with a local tree creature at every non-maximal node whose
/// possibilities are exactly the successors of that node in S.
class FiniteTreeCandidate {
 public:
  FiniteTreeCandidate(HSpecPtr h, int lev, std::set<Seq> nodes, std::map<Seq, TreeCreature> creatures)
      : h_(std::move(h)), lev_(lev), nodes_(std::move(nodes)), creatures_(std::move(creatures)) {
    require(h_ != nullptr, "tree candidate without alphabet");
    require(lev_ >= 0 && static_cast<std::size_t>(lev_) <= h_->length(), "tree height outside the alphabet window");
    require(!nodes_.empty(), "tree candidate needs a nonempty tree");
    require(nodes_.count(Seq{}) == 1, "tree must contain the empty sequence");
    for (const auto& eta : nodes_) {
      require(static_cast<int>(eta.size()) <= lev_, "node above the last level");
      for (std::size_t i = 0; i < eta.size(); ++i)
        require(h_->contains(static_cast<Level>(i), eta[i]), "node value outside the alphabet");
      if (!eta.empty()) require(nodes_.count(Seq(eta.begin(), eta.end() - 1)) == 1, "node set not closed under prefixes");
    }
    for (const auto& eta : nodes_) {
      if (static_cast<int>(eta.size()) == lev_) continue;
      const auto succ = successors(eta);
      require(!succ.empty(), "node without a successor at the last level");
      auto it = creatures_.find(eta);
      require(it != creatures_.end(), "missing creature at a non-maximal node");
      require(it->second.eta == eta, "creature root differs from its node");
      require(it->second.successors == succ, "creature possibilities differ from the successors in the tree");
    }
    for (const auto& [eta, t] : creatures_)
      require(nodes_.count(eta) == 1 && static_cast<int>(eta.size()) < lev_, "creature at a node outside S-hat");
  }

  const HSpecPtr& hspec() const { return h_; }
  int lev() const { return lev_; }
  const std::set<Seq>& nodes() const { return nodes_; }
  const std::map<Seq, TreeCreature>& creatures() const { return creatures_; }

  std::vector<Value> successors(const Seq& eta) const {
    std::vector<Value> out;
    if (static_cast<int>(eta.size()) >= lev_) return out;
    Seq c = eta;
    c.push_back(0);
    for (Value k = 0; k < h_->size(static_cast<Level>(eta.size())); ++k) {
      c.back() = k;
      if (nodes_.count(c)) out.push_back(k);
    }
    return out;
  }

  std::size_t count_at(int level) const {
    std::size_t n = 0;
    for (const auto& eta : nodes_) n += static_cast<std::size_t>(static_cast<int>(eta.size()) == level);
    return n;
  }

 private:
  HSpecPtr h_;
  int lev_;
  std::set<Seq> nodes_;
  std::map<Seq, TreeCreature> creatures_;
};

/// Universal-meager tree creature at eta with possibility set A: its norm is |A|.
inline TreeCreature um_creature(const HSpec& h, Seq eta, std::vector<Value> a) {
  const auto n = static_cast<int>(std::set<Value>(a.begin(), a.end()).size());
  return make_tabulated_tree_creature(h, std::move(eta), std::move(a), Norm::linear(n));
}

/// The unique candidate over S made of universal-meager creatures.
inline FiniteTreeCandidate um_candidate(HSpecPtr h, int lev, std::set<Seq> nodes) {
  std::map<Seq, TreeCreature> ts;
  for (const auto& eta : nodes) {
    if (static_cast<int>(eta.size()) >= lev) continue;
    std::vector<Value> succ;
    Seq c = eta;
    c.push_back(0);
    for (Value k = 0; k < h->size(static_cast<Level>(eta.size())); ++k) {
      c.back() = k;
      if (nodes.count(c)) succ.push_back(k);
    }
    if (!succ.empty()) ts.emplace(eta, um_creature(*h, eta, succ));
  }
  return FiniteTreeCandidate(std::move(h), lev, std::move(nodes), std::move(ts));
}

/// c0 <= c1: c1 is at least as high, and below lev(S0) its nodes lie in S0 with creatures in Sigma
/// of those of c0 (same root, fewer possibilities).
inline bool tree_fc_leq(const FiniteTreeCandidate& c0, const FiniteTreeCandidate& c1) {
  require(*c0.hspec() == *c1.hspec(), "tree candidates over different alphabets");
  if (c0.lev() > c1.lev()) return false;
  for (const auto& eta : c1.nodes()) {
    if (static_cast<int>(eta.size()) >= c0.lev()) continue;
    if (!c0.nodes().count(eta)) return false;
    const auto& t0 = c0.creatures().at(eta);
    const auto& t1 = c1.creatures().at(eta);
    if (!std::includes(t0.successors.begin(), t0.successors.end(), t1.successors.begin(), t1.successors.end()))
      return false;
  }
  return true;
}

enum class GKind { um, cmz };

inline GKind parse_gkind(const std::string& s) {
  if (s == "um" || s == "UM") return GKind::um;
  if (s == "cmz" || s == "CMZ") return GKind::cmz;
  throw InvalidInput("unknown universality kind '" + s + "' (expected um or cmz)");
}

using RBar = std::map<int, long long>;

/// Membership of (fc, n_dn, n_up, r) in the universality set G of the given kind.
inline bool g_check(GKind kind, const FiniteTreeCandidate& fc, int n_dn, int n_up, const RBar& r) {
  require(0 <= n_dn && n_dn <= n_up && n_up <= fc.lev(), "need n_dn <= n_up <= lev(S)");
  for (const auto& [i, v] : r) {
    require(n_dn <= i && i <= n_up, "dom(r) must lie inside [n_dn, n_up]");
    require(v >= 0, "r values must be non-negative");
  }
  const HSpec& h = *fc.hspec();
  if (kind == GKind::cmz) {
    Rational bound = 0;
    for (const auto& [i, v] : r) bound += Rational(1, (i + 1) * (i + 1));
    BigInt total = 1;
    for (int i = 0; i < n_up; ++i) total *= h.size(i);
    return Rational(BigInt(fc.count_at(n_up)), total) <= bound;
  }
  for (const auto& eta : fc.nodes()) {
    if (static_cast<int>(eta.size()) != n_dn) continue;
    bool found = false;
    for (const auto& [nu, t] : fc.creatures()) {
      if (static_cast<int>(nu.size()) >= n_up || nu.size() < eta.size()) continue;
      if (!std::equal(eta.begin(), eta.end(), nu.begin())) continue;
      if (t.nor < Norm::linear(h.size(static_cast<Level>(nu.size())))) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace creaturekit
