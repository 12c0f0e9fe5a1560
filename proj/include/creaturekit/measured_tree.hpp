#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "creaturekit/norm.hpp"
#include "creaturekit/partial_fn.hpp"

namespace creaturekit {

using Weights = std::vector<Rational>;

/// A finite tree of sequences with uniform leaf depth and additive weights: the value at an internal
/// node is sum_k s_k * value(child k), missing children counting 0. An empty node set is the empty tree.
class MeasuredTree {
 public:
  MeasuredTree(HSpecPtr h, int depth, std::set<Seq> nodes, std::vector<Weights> level_weights,
               std::map<Seq, Weights> node_weights = {})
      : h_(std::move(h)),
        depth_(depth),
        nodes_(std::move(nodes)),
        level_weights_(std::move(level_weights)),
        node_weights_(std::move(node_weights)) {
    require(h_ != nullptr, "measured tree without alphabet");
    require(depth_ >= 0 && static_cast<std::size_t>(depth_) <= h_->length(), "tree depth outside the alphabet window");
    require(level_weights_.size() == static_cast<std::size_t>(depth_), "need one weight list per internal level");
    for (int lv = 0; lv < depth_; ++lv) check_weights(level_weights_[static_cast<std::size_t>(lv)], lv);
    for (const auto& [eta, w] : node_weights_) {
      require(static_cast<int>(eta.size()) < depth_, "node weights given for a leaf or deeper node");
      check_weights(w, static_cast<int>(eta.size()));
    }
    if (nodes_.empty()) return;
    require(nodes_.count(Seq{}) == 1, "tree must contain the root");
    for (const auto& eta : nodes_) {
      require(static_cast<int>(eta.size()) <= depth_, "node deeper than the tree depth");
      for (std::size_t i = 0; i < eta.size(); ++i)
        require(h_->contains(static_cast<Level>(i), eta[i]), "node value outside the alphabet");
      if (!eta.empty()) require(nodes_.count(Seq(eta.begin(), eta.end() - 1)) == 1, "node set not closed under prefixes");
      if (static_cast<int>(eta.size()) < depth_) require(!children(eta).empty(), "branch ends above the leaf depth");
    }
  }

  static MeasuredTree empty(HSpecPtr h, int depth, std::vector<Weights> level_weights) {
    return MeasuredTree(std::move(h), depth, {}, std::move(level_weights));
  }

  const HSpecPtr& hspec() const { return h_; }
  int depth() const { return depth_; }
  const std::set<Seq>& nodes() const { return nodes_; }
  const std::vector<Weights>& level_weights() const { return level_weights_; }
  const std::map<Seq, Weights>& node_weights() const { return node_weights_; }
  bool is_empty() const { return nodes_.empty(); }
  bool contains(const Seq& eta) const { return nodes_.count(eta) == 1; }
  bool is_leaf(const Seq& eta) const { return static_cast<int>(eta.size()) == depth_; }

  const Weights& weights(const Seq& eta) const {
    auto it = node_weights_.find(eta);
    if (it != node_weights_.end()) return it->second;
    return level_weights_.at(eta.size());
  }

  /// Values k with eta^k in the tree.
  std::vector<Value> children(const Seq& eta) const {
    std::vector<Value> out;
    if (static_cast<int>(eta.size()) >= depth_) return out;
    Seq c = eta;
    c.push_back(0);
    for (Value k = 0; k < h_->size(static_cast<Level>(eta.size())); ++k) {
      c.back() = k;
      if (nodes_.count(c)) out.push_back(k);
    }
    return out;
  }

  std::vector<Seq> leaves() const {
    std::vector<Seq> out;
    for (const auto& eta : nodes_)
      if (is_leaf(eta)) out.push_back(eta);
    return out;
  }

  bool same_space(const MeasuredTree& o) const {
    return *h_ == *o.h_ && depth_ == o.depth_ && level_weights_ == o.level_weights_ && node_weights_ == o.node_weights_;
  }

 private:
  void check_weights(const Weights& w, int lv) const {
    require(static_cast<int>(w.size()) == h_->size(lv), "weights at level " + std::to_string(lv) +
                                                             " must cover the whole alphabet");
    Rational sum = 0;
    for (const auto& x : w) {
      require(x > 0 && x < 1, "weights must lie strictly between 0 and 1");
      sum += x;
    }
    require(sum == 1, "weights at level " + std::to_string(lv) + " do not sum to 1");
  }

  HSpecPtr h_;
  int depth_;
  std::set<Seq> nodes_;
  std::vector<Weights> level_weights_;
  std::map<Seq, Weights> node_weights_;
};

inline std::vector<Weights> uniform_weights(const HSpec& h, int depth) {
  std::vector<Weights> w;
  for (int lv = 0; lv < depth; ++lv) w.emplace_back(static_cast<std::size_t>(h.size(lv)), Rational(1, h.size(lv)));
  return w;
}

using Front = std::set<Seq>;

/// Empty when A is a front of the tree, otherwise the reason it is not.
inline std::optional<std::string> front_violation(const MeasuredTree& t, const Front& a) {
  for (const auto& eta : a)
    if (!t.contains(eta)) return "front node is not in the tree";
  for (const auto& leaf : t.leaves()) {
    int hits = 0;
    for (std::size_t len = 0; len <= leaf.size(); ++len)
      hits += static_cast<int>(a.count(Seq(leaf.begin(), leaf.begin() + static_cast<long>(len))));
    if (hits != 1) return "a branch meets the front " + std::to_string(hits) + " times";
  }
  return std::nullopt;
}

/// mu_{A}(root): 1 on the front, weighted sums above it.
inline Rational mu_front(const MeasuredTree& t, const Front& a) {
  if (auto v = front_violation(t, a)) throw InvalidInput("invalid front: " + *v);
  if (t.is_empty()) return 0;
  std::function<Rational(Seq&)> rec = [&](Seq& eta) -> Rational {
    if (a.count(eta)) return 1;
    Rational s = 0;
    const auto& w = t.weights(eta);
    for (Value k : t.children(eta)) {
      eta.push_back(k);
      s += w[static_cast<std::size_t>(k)] * rec(eta);
      eta.pop_back();
    }
    return s;
  };
  Seq root;
  return rec(root);
}

/// DP values g(eta) for every node: 1 at leaves, weighted sums above.
inline std::map<Seq, Rational> mu_values(const MeasuredTree& t) {
  std::map<Seq, Rational> g;
  for (auto it = t.nodes().rbegin(); it != t.nodes().rend(); ++it) {
    const Seq& eta = *it;
    if (t.is_leaf(eta)) {
      g[eta] = 1;
      continue;
    }
    Rational s = 0;
    const auto& w = t.weights(eta);
    Seq c = eta;
    c.push_back(0);
    for (Value k : t.children(eta)) {
      c.back() = k;
      s += w[static_cast<std::size_t>(k)] * g.at(c);
    }
    g[eta] = s;
  }
  return g;
}

/// Minimum of mu_front over all fronts; the leaf front attains it because every value is at most 1.
inline Rational mu_F(const MeasuredTree& t) {
  if (t.is_empty()) return 0;
  return mu_values(t).at(Seq{});
}

/// mu(eta) <= sum_k s_k mu(eta^k) at every internal node, values in [0, 1].
inline bool is_semi_measure(const MeasuredTree& t, const std::map<Seq, Rational>& mu) {
  for (const auto& eta : t.nodes()) {
    auto it = mu.find(eta);
    if (it == mu.end()) throw InvalidInput("semi-measure has no value at a tree node");
    if (it->second < 0 || it->second > 1) return false;
  }
  for (const auto& eta : t.nodes()) {
    if (t.is_leaf(eta)) continue;
    Rational s = 0;
    const auto& w = t.weights(eta);
    Seq c = eta;
    c.push_back(0);
    for (Value k : t.children(eta)) {
      c.back() = k;
      s += w[static_cast<std::size_t>(k)] * mu.at(c);
    }
    if (mu.at(eta) > s) return false;
  }
  return true;
}

/// Keeps only nodes that still reach the leaf depth.
inline std::set<Seq> prune_branchless(const std::set<Seq>& nodes, int depth) {
  std::set<Seq> alive;
  for (const auto& eta : nodes)
    if (static_cast<int>(eta.size()) == depth)
      for (std::size_t len = 0; len <= eta.size(); ++len) alive.emplace(eta.begin(), eta.begin() + static_cast<long>(len));
  std::set<Seq> out;
  for (const auto& eta : nodes)
    if (alive.count(eta)) out.insert(eta);
  return out;
}

inline void require_same_space(const MeasuredTree& a, const MeasuredTree& b) {
  require(*a.hspec() == *b.hspec() && a.depth() == b.depth(), "trees over different alphabets or depths");
  require(a.level_weights() == b.level_weights() && a.node_weights() == b.node_weights(),
          "trees carry different weights");
}

inline MeasuredTree tree_intersect(const MeasuredTree& a, const MeasuredTree& b) {
  require_same_space(a, b);
  std::set<Seq> both;
  std::set_intersection(a.nodes().begin(), a.nodes().end(), b.nodes().begin(), b.nodes().end(),
                        std::inserter(both, both.end()));
  return MeasuredTree(a.hspec(), a.depth(), prune_branchless(both, a.depth()), a.level_weights(), a.node_weights());
}

inline MeasuredTree tree_union(const MeasuredTree& a, const MeasuredTree& b) {
  require_same_space(a, b);
  std::set<Seq> all = a.nodes();
  all.insert(b.nodes().begin(), b.nodes().end());
  return MeasuredTree(a.hspec(), a.depth(), std::move(all), a.level_weights(), a.node_weights());
}

inline MeasuredTree tree_union(const std::vector<MeasuredTree>& ts) {
  require(!ts.empty(), "union of no trees");
  MeasuredTree u = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) u = tree_union(u, ts[i]);
  return u;
}

struct MixReport {
  Rational union_mu;
  Rational sum_mu;
  Rational pair_sum;        // sum of mu over pairwise intersections
  bool disjoint = false;    // no two trees share a leaf
  bool subadditive = false; // mu(union) <= sum
  bool additive = false;    // disjoint implies equality
  bool bonferroni = false;  // mu(union) >= sum - pair_sum
  bool compatible = false;  // sum > 1 implies some intersection of positive measure
};

/// Inclusion-exclusion laws for a list of trees in one space.
inline MixReport mix_report(const std::vector<MeasuredTree>& ts) {
  require(!ts.empty(), "no trees given");
  for (std::size_t i = 1; i < ts.size(); ++i) require_same_space(ts[0], ts[i]);
  MixReport r;
  r.union_mu = mu_F(tree_union(ts));
  bool some_overlap = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    r.sum_mu += mu_F(ts[i]);
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const auto m = tree_intersect(ts[i], ts[j]);
      if (!m.is_empty()) some_overlap = true;
      r.pair_sum += mu_F(m);
    }
  }
  r.disjoint = !some_overlap;
  r.subadditive = r.union_mu <= r.sum_mu;
  r.additive = !r.disjoint || r.union_mu == r.sum_mu;
  r.bonferroni = r.union_mu >= r.sum_mu - r.pair_sum;
  r.compatible = r.sum_mu <= 1 || r.pair_sum > 0;
  return r;
}

/// The subtree of nodes comparable with eta, as a tree in the same space.
inline MeasuredTree restrict_to_node(const MeasuredTree& t, const Seq& eta) {
  require(t.contains(eta), "node not in tree");
  std::set<Seq> out;
  for (const auto& nu : t.nodes()) {
    const std::size_t l = std::min(nu.size(), eta.size());
    if (std::equal(nu.begin(), nu.begin() + static_cast<long>(l), eta.begin())) out.insert(nu);
  }
  return MeasuredTree(t.hspec(), t.depth(), std::move(out), t.level_weights(), t.node_weights());
}

}  // namespace creaturekit
