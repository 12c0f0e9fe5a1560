#include <gtest/gtest.h>

#include <random>

#include "creaturekit/audit.hpp"
#include "creaturekit/tree_candidate.hpp"

using namespace creaturekit;

namespace {

std::set<Seq> closure(std::initializer_list<Seq> leaves) {
  std::set<Seq> out;
  for (const auto& l : leaves)
    for (std::size_t i = 0; i <= l.size(); ++i) out.emplace(l.begin(), l.begin() + static_cast<long>(i));
  return out;
}

NormingSystem1 good_norming1() {
  NormingSystem1 ns;
  ns.K = {{0}, {1, 2}};
  ns.g[{}] = {{0, 3}};
  ns.g[{0}] = {{1, 0}, {2, 1}};
  ns.g[{1}] = {{1, 2}, {2, 3}};
  return ns;
}

}  // namespace

TEST(Norming1, Passes) {
  auto h = make_hspec({4, 4, 4});
  auto rep = audit_norming1(*h, good_norming1());
  EXPECT_TRUE(rep.prefix_valid());
  EXPECT_EQ(rep.clauses.size(), 4U);
}

TEST(Norming1, SharedIndex) {
  auto h = make_hspec({4, 4, 4});
  auto ns = good_norming1();
  ns.K = {{1}, {1, 2}};
  ns.g[{}] = {{1, 0}};
  auto rep = audit_norming1(*h, ns);
  ASSERT_FALSE(rep.prefix_valid());
  EXPECT_EQ(rep.first_failure()->clause, "alpha");
}

TEST(Norming1, Repetition) {
  auto h = make_hspec({4, 4, 4});
  auto ns = good_norming1();
  ns.g[{1}] = {{1, 0}, {2, 3}};
  auto rep = audit_norming1(*h, ns);
  ASSERT_FALSE(rep.prefix_valid());
  EXPECT_EQ(rep.first_failure()->clause, "delta");
  EXPECT_FALSE(rep.first_failure()->witness.empty());
}

TEST(Norming1, WrongDomainAndMissing) {
  auto h = make_hspec({4, 4, 4});
  auto ns = good_norming1();
  ns.g[{0}] = {{1, 0}};
  EXPECT_EQ(audit_norming1(*h, ns).first_failure()->clause, "gamma");
  ns = good_norming1();
  ns.g.erase(Seq{1});
  EXPECT_EQ(audit_norming1(*h, ns).first_failure()->clause, "beta");
}

TEST(Norming2, Clauses) {
  NormingSystem2 ns;
  ns.U[{Seq{}, 0}] = {0, 3};
  ns.U[{Seq{1}, 0}] = {1, 5};
  ns.U[{Seq{0, 1}, 2}] = {2, 7};
  EXPECT_TRUE(audit_norming2(ns).prefix_valid());
  ns.U[{Seq{0, 1}, 2}] = {1, 7};
  auto rep = audit_norming2(ns);
  EXPECT_FALSE(rep.clauses[0].pass);
  EXPECT_FALSE(rep.clauses[1].pass);
}

TEST(Sourness, Levels) {
  EXPECT_EQ(sourness_levels(4), (std::vector<int>{0, 2, 6, 22, 278}));
  EXPECT_THROW(sourness_levels(5), InvalidInput);
}

TEST(Sourness, GeneratedPasses) {
  auto h = make_hspec(std::vector<int>(2, 4));
  auto ss = gen_edrf_sourness(1, *h);
  EXPECT_EQ(ss.ell, (std::vector<int>{0, 2}));
  EXPECT_TRUE(audit_sourness(*h, ss).prefix_valid());
  std::vector<int> sizes;
  for (int k = 0; k < 4; ++k)
    for (int n = sourness_levels(4)[static_cast<std::size_t>(k)]; n < sourness_levels(4)[static_cast<std::size_t>(k + 1)]; ++n)
      sizes.push_back((1 << (k + 1)) + 1);
  auto big = make_hspec(sizes);
  for (int k = 0; k <= 4; ++k) EXPECT_TRUE(audit_sourness(*big, gen_edrf_sourness(k, *big)).prefix_valid()) << k;
}

TEST(Sourness, Errors) {
  EXPECT_THROW(gen_edrf_sourness(1, *make_hspec({2, 2})), InvalidInput);
  EXPECT_THROW(gen_edrf_sourness(2, *make_hspec({4, 4})), InvalidInput);
}

TEST(Sourness, Violations) {
  auto h = make_hspec({4, 4});
  auto ss = gen_edrf_sourness(1, *h);
  ss.g[{1}][0] = {0, 1};
  auto rep = audit_sourness(*h, ss);
  ASSERT_FALSE(rep.prefix_valid());
  EXPECT_EQ(rep.first_failure()->clause, "gamma");
  ss = gen_edrf_sourness(1, *h);
  ss.g[{0}][1] = {0, 2, 3};
  ss.g[{1}][1] = {1};
  EXPECT_EQ(audit_sourness(*h, ss).first_failure()->clause, "gamma");
  ss = gen_edrf_sourness(1, *h);
  ss.ell = {0, 0};
  EXPECT_EQ(audit_sourness(*h, ss).first_failure()->clause, "alpha");
}

TEST(Sourness, Heuristic) {
  auto h = make_hspec({3, 3, 5, 5, 5, 5});
  auto ss = gen_edrf_sourness(2, *h);
  std::vector<std::vector<Value>> none(6);
  auto w = heuristic_delta(*h, ss, 0, none);
  ASSERT_EQ(w.size(), 2U);
  EXPECT_TRUE(w[0].pos_escapes);
  EXPECT_EQ(w[1].small_count, 0);
  std::vector<std::vector<Value>> drop0(6, std::vector<Value>{0});
  auto v = heuristic_delta(*h, ss, 0, drop0);
  EXPECT_EQ(v[1].small_count, 1);
  std::vector<std::vector<Value>> most(6, std::vector<Value>{4});
  most[0] = {2};
  EXPECT_FALSE(heuristic_delta(*h, ss, 0, most)[0].pos_escapes);
}

TEST(GCheck, CmzExamples) {
  auto h = make_hspec({2, 2, 2});
  auto fc = um_candidate(h, 3, closure({{0, 0, 0}, {0, 1, 1}}));
  EXPECT_TRUE(g_check(GKind::cmz, fc, 1, 3, {{1, 0}, {2, 0}}));
  EXPECT_FALSE(g_check(GKind::cmz, fc, 1, 3, {{2, 0}}));
  EXPECT_THROW(g_check(GKind::cmz, fc, 2, 1, {}), InvalidInput);
  EXPECT_THROW(g_check(GKind::cmz, fc, 2, 3, {{1, 0}}), InvalidInput);
}

TEST(GCheck, UmExamples) {
  auto h = make_hspec({2, 2, 2});
  auto full = um_candidate(h, 3, closure({{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}}));
  EXPECT_FALSE(g_check(GKind::um, full, 1, 3, {}));
  EXPECT_TRUE(g_check(GKind::um, full, 0, 3, {}));
  auto thin = um_candidate(h, 3, closure({{0, 0, 0}, {1, 0, 1}}));
  EXPECT_TRUE(g_check(GKind::um, thin, 1, 3, {}));
}

TEST(TreeCandidate, OrderAndShape) {
  auto h = make_hspec({2, 2, 2});
  auto c0 = um_candidate(h, 2, closure({{0, 0}, {0, 1}, {1, 1}}));
  auto c1 = um_candidate(h, 3, closure({{0, 1, 0}, {1, 1, 0}, {1, 1, 1}}));
  EXPECT_TRUE(tree_fc_leq(c0, c1));
  EXPECT_FALSE(tree_fc_leq(c1, c0));
  auto c2 = um_candidate(h, 3, closure({{1, 0, 0}}));
  EXPECT_FALSE(tree_fc_leq(c0, c2));
  EXPECT_THROW(um_candidate(h, 3, {{}, {0}}), InvalidInput);
}

TEST(GCheck, CmzMonotoneRandomized) {
  std::mt19937 rng(2);
  auto h = make_hspec({2, 2, 2, 2});
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int lev0 = 1 + static_cast<int>(rng() % 4);
    std::set<Seq> s0;
    while (s0.empty()) {
      std::set<Seq> leaves;
      for (int i = 0; i < 4; ++i) {
        Seq l;
        for (int j = 0; j < lev0; ++j) l.push_back(static_cast<int>(rng() % 2));
        leaves.insert(l);
      }
      for (const auto& l : leaves)
        for (std::size_t i = 0; i <= l.size(); ++i) s0.emplace(l.begin(), l.begin() + static_cast<long>(i));
    }
    auto c0 = um_candidate(h, lev0, s0);
    const int n0_up = static_cast<int>(rng() % (lev0 + 1));
    const int n0_dn = static_cast<int>(rng() % (n0_up + 1));
    RBar r0;
    for (int i = n0_dn; i <= n0_up; ++i)
      if (rng() % 2) r0[i] = static_cast<long long>(rng() % 3);
    if (!g_check(GKind::cmz, c0, n0_dn, n0_up, r0)) continue;
    const int lev1 = lev0 + static_cast<int>(rng() % (5 - lev0));
    std::set<Seq> leaves1;
    for (const auto& eta : s0)
      if (static_cast<int>(eta.size()) == lev0 && rng() % 3) {
        Seq l = eta;
        while (static_cast<int>(l.size()) < lev1) l.push_back(static_cast<int>(rng() % 2));
        leaves1.insert(l);
      }
    if (leaves1.empty()) continue;
    std::set<Seq> s1;
    for (const auto& l : leaves1)
      for (std::size_t i = 0; i <= l.size(); ++i) s1.emplace(l.begin(), l.begin() + static_cast<long>(i));
    auto c1 = um_candidate(h, lev1, s1);
    ASSERT_TRUE(tree_fc_leq(c0, c1));
    const int n1_dn = static_cast<int>(rng() % (n0_dn + 1));
    const int n1_up = n0_up + static_cast<int>(rng() % (lev1 - n0_up + 1));
    RBar r1 = r0;
    for (int i = n1_dn; i <= n1_up; ++i)
      if (rng() % 3 == 0) r1[i] = r1.count(i) ? r1[i] + 1 : 0;
    EXPECT_TRUE(g_check(GKind::cmz, c1, n1_dn, n1_up, r1));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}
