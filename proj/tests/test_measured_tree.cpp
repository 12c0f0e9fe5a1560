#include <gtest/gtest.h>

#include <random>

#include "creaturekit/measured_tree.hpp"
#include "creaturekit/oracles.hpp"

using namespace creaturekit;

namespace {

HSpecPtr binary(int n) { return make_hspec(std::vector<int>(static_cast<std::size_t>(n), 2)); }

std::set<Seq> closure(std::initializer_list<Seq> leaves) {
  std::set<Seq> out;
  for (const auto& l : leaves)
    for (std::size_t i = 0; i <= l.size(); ++i) out.emplace(l.begin(), l.begin() + static_cast<long>(i));
  return out;
}

MeasuredTree binary_tree(std::initializer_list<Seq> leaves) {
  auto h = binary(2);
  return MeasuredTree(h, 2, closure(leaves), uniform_weights(*h, 2));
}

MeasuredTree random_tree(std::mt19937& rng, const HSpecPtr& h, int depth, const std::vector<Weights>& w, int keep) {
  std::set<Seq> leaves;
  std::function<void(Seq&)> rec = [&](Seq& eta) {
    if (static_cast<int>(eta.size()) == depth) {
      leaves.insert(eta);
      return;
    }
    for (Value k = 0; k < h->size(static_cast<Level>(eta.size())); ++k)
      if (static_cast<int>(rng() % 100) < keep) {
        eta.push_back(k);
        rec(eta);
        eta.pop_back();
      }
  };
  Seq root;
  rec(root);
  std::set<Seq> nodes;
  for (const auto& l : leaves)
    for (std::size_t i = 0; i <= l.size(); ++i) nodes.emplace(l.begin(), l.begin() + static_cast<long>(i));
  return MeasuredTree(h, depth, nodes, w);
}

}  // namespace

TEST(MuFront, Examples) {
  auto full = binary_tree({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  EXPECT_EQ(mu_front(full, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), 1);
  auto pruned = binary_tree({{0, 0}, {0, 1}, {1, 0}});
  EXPECT_EQ(mu_front(pruned, {{0, 0}, {0, 1}, {1, 0}}), Rational(3, 4));
  EXPECT_EQ(mu_front(pruned, {{}}), 1);
  EXPECT_THROW(mu_front(pruned, {{0}, {0, 0}, {1}}), InvalidInput);
  EXPECT_THROW(mu_front(pruned, {{0}}), InvalidInput);
}

TEST(MuF, Examples) {
  EXPECT_EQ(mu_F(binary_tree({{0, 0}, {0, 1}, {1, 0}, {1, 1}})), 1);
  auto pruned = binary_tree({{0, 0}, {0, 1}, {1, 0}});
  EXPECT_EQ(mu_F(pruned), Rational(3, 4));
  EXPECT_EQ(oracle::enumerate_fronts(pruned).size(), 5U);
  EXPECT_EQ(oracle::mu_F_fronts(pruned), Rational(3, 4));
  auto h = binary(5);
  MeasuredTree branch(h, 5, closure({{1, 0, 1, 1, 0}}), uniform_weights(*h, 5));
  EXPECT_EQ(mu_F(branch), Rational(1, 32));
}

TEST(MuF, NonUniformWeights) {
  auto h = make_hspec({3, 2});
  std::vector<Weights> w{{Rational(1, 2), Rational(1, 3), Rational(1, 6)}, {Rational(1, 4), Rational(3, 4)}};
  MeasuredTree t(h, 2, closure({{0, 1}, {2, 0}, {2, 1}}), w);
  EXPECT_EQ(mu_F(t), Rational(1, 2) * Rational(3, 4) + Rational(1, 6));
  for (const auto& a : oracle::enumerate_fronts(t)) EXPECT_GE(mu_front(t, a), mu_F(t));
  EXPECT_THROW(MeasuredTree(h, 2, closure({{0, 1}}), uniform_weights(*binary(2), 2)), InvalidInput);
  std::vector<Weights> bad{{Rational(1, 2), Rational(1, 2), Rational(0)}, {Rational(1, 2), Rational(1, 2)}};
  EXPECT_THROW(MeasuredTree(h, 2, closure({{0, 1}}), bad), InvalidInput);
}

TEST(MuF, ShapeChecks) {
  auto h = binary(2);
  EXPECT_THROW(MeasuredTree(h, 2, {{}, {0}}, uniform_weights(*h, 2)), InvalidInput);
  EXPECT_THROW(MeasuredTree(h, 2, {{}, {0, 1}}, uniform_weights(*h, 2)), InvalidInput);
  EXPECT_EQ(mu_F(MeasuredTree::empty(h, 2, uniform_weights(*h, 2))), 0);
}

TEST(SemiMeasure, Examples) {
  auto pruned = binary_tree({{0, 0}, {0, 1}, {1, 0}});
  std::map<Seq, Rational> zero;
  for (const auto& eta : pruned.nodes()) zero[eta] = 0;
  EXPECT_TRUE(is_semi_measure(pruned, zero));
  auto g = mu_values(pruned);
  EXPECT_TRUE(is_semi_measure(pruned, g));
  auto bad = g;
  bad[Seq{}] = 1;
  EXPECT_FALSE(is_semi_measure(pruned, bad));
  bad.erase(Seq{0});
  EXPECT_THROW(is_semi_measure(pruned, bad), InvalidInput);
}

TEST(TreeOps, Examples) {
  auto t = binary_tree({{0, 0}, {0, 1}, {1, 0}});
  EXPECT_EQ(tree_intersect(t, t).nodes(), t.nodes());
  auto a = binary_tree({{0, 0}});
  auto b = binary_tree({{1, 1}});
  EXPECT_TRUE(tree_intersect(a, b).is_empty());
  EXPECT_EQ(mu_F(tree_union(a, b)), Rational(1, 2));
  auto c = binary_tree({{0, 1}});
  EXPECT_TRUE(tree_intersect(a, c).is_empty());
  auto r = mix_report({a, b});
  EXPECT_TRUE(r.disjoint);
  EXPECT_TRUE(r.additive);
  auto h3 = make_hspec({3, 3});
  MeasuredTree other(h3, 2, closure({{0, 0}}), uniform_weights(*h3, 2));
  EXPECT_THROW(tree_union(a, other), InvalidInput);
}

TEST(Laws, Randomized) {
  std::mt19937 rng(11);
  auto h = make_hspec({2, 3, 2, 2});
  std::vector<Weights> w{{Rational(1, 3), Rational(2, 3)},
                         {Rational(1, 5), Rational(2, 5), Rational(2, 5)},
                         {Rational(1, 2), Rational(1, 2)},
                         {Rational(3, 7), Rational(4, 7)}};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MeasuredTree> ts;
    const int m = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < m; ++i) {
      auto t = random_tree(rng, h, 4, w, 60);
      if (!t.is_empty()) ts.push_back(t);
    }
    if (ts.empty()) continue;
    auto r = mix_report(ts);
    EXPECT_TRUE(r.subadditive);
    EXPECT_TRUE(r.additive);
    EXPECT_TRUE(r.bonferroni);
    EXPECT_TRUE(r.compatible);
    const auto& t = ts[0];
    EXPECT_EQ(mu_F(t), oracle::mu_F_fronts(t));
    const auto g = mu_values(t);
    for (const auto& eta : t.nodes()) EXPECT_EQ(g.at(eta), mu_values(restrict_to_node(t, eta)).at(eta));
  }
}

TEST(Laws, SemiMeasureDominated) {
  std::mt19937 rng(5);
  auto h = make_hspec({3, 2, 2});
  auto w = uniform_weights(*h, 3);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = random_tree(rng, h, 3, w, 70);
    if (t.is_empty()) continue;
    std::map<Seq, Rational> mu;
    for (auto it = t.nodes().rbegin(); it != t.nodes().rend(); ++it) {
      Rational cap = 1;
      if (!t.is_leaf(*it)) {
        cap = 0;
        for (Value k : t.children(*it)) {
          Seq c = *it;
          c.push_back(k);
          cap += t.weights(*it)[static_cast<std::size_t>(k)] * mu.at(c);
        }
      }
      mu[*it] = cap * Rational(static_cast<int>(rng() % 5), 4);
    }
    ASSERT_TRUE(is_semi_measure(t, mu));
    const auto g = mu_values(t);
    for (const auto& eta : t.nodes()) EXPECT_LE(mu.at(eta), g.at(eta));
  }
}
