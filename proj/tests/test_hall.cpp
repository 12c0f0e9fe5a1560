#include <gtest/gtest.h>

#include <random>

#include "creaturekit/hall.hpp"
#include "creaturekit/oracles.hpp"
#include "test_util.hpp"

using namespace creaturekit;
using cktest::fam;
using cktest::pf;

namespace {

HSpecPtr h8() { return make_hspec(std::vector<int>(8, 2)); }

}  // namespace

TEST(SelectorNorm, Examples) {
  auto h = h8();
  EXPECT_EQ(selector_norm(fam({{{3, 0}, {4, 0}, {5, 0}, {6, 0}}}, h)), 5);
  auto overlap = fam({{{0, 0}, {1, 0}}, {{1, 1}, {2, 0}}}, h);
  EXPECT_EQ(selector_norm(overlap), 2);
  auto disj = fam({{{0, 0}, {1, 0}, {2, 0}}, {{3, 0}, {4, 0}, {5, 0}, {6, 0}, {7, 0}}}, h);
  EXPECT_EQ(selector_norm(disj), 4);
}

TEST(MaxDisjointCover, Examples) {
  auto h = h8();
  EXPECT_EQ(max_disjoint_cover(fam({{{0, 0}, {1, 0}}, {{1, 1}, {2, 0}}}, h).members()), 2);
  EXPECT_EQ(max_disjoint_cover(fam({{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}}, h).members()), 4);
  EXPECT_EQ(max_disjoint_cover(fam({{{0, 0}, {1, 0}, {2, 0}, {3, 0}}}, h).members()), 4);
}

TEST(HallNorm, Examples) {
  auto h = h8();
  EXPECT_EQ(hall_norm(fam({{{2, 0}, {3, 0}, {4, 0}, {5, 0}}}, h)), 5);
  EXPECT_EQ(hall_norm(fam({{{0, 0}, {1, 0}}, {{1, 1}, {2, 0}}}, h)), 2);
  EXPECT_EQ(hall_norm(fam({{{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {2, 1}}}, h)), 2);
}

TEST(RefinedNorm, Examples) {
  auto h = h8();
  auto single = fam({{{2, 0}, {3, 0}, {4, 0}, {5, 0}}}, h);
  EXPECT_EQ(refined_hall_norm(single).value, 5);
  auto agree = fam({{{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {2, 1}}}, h);
  auto r = refined_hall_norm(agree);
  EXPECT_EQ(r.value, 3);
  ASSERT_TRUE(r.refinement);
  EXPECT_EQ(*r.refinement, fam({{{0, 0}, {1, 0}}}, h));
  EXPECT_EQ(hall_norm(agree), 2);
  EXPECT_EQ(selector_norm(agree), 2);
  auto disj = fam({{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}, {4, 0}}}, h);
  EXPECT_EQ(refined_hall_norm(disj).value, 3);
}

TEST(RefinedNorm, NoDisjointRefinement) {
  auto h = h8();
  auto d = fam({{{0, 0}}, {{0, 1}}}, h);
  auto r = refined_hall_norm(d);
  EXPECT_EQ(r.value, 1);
  EXPECT_FALSE(r.refinement);
  EXPECT_EQ(oracle::refined_hall_norm(d.members()), 1);
}

TEST(Oracle, Examples) {
  auto h = h8();
  auto single = fam({{{0, 0}, {1, 0}, {2, 0}}}, h);
  EXPECT_EQ(oracle::hall_norm(single.members()), 4);
  EXPECT_EQ(oracle::selector_norm(single.members()), 4);
  EXPECT_EQ(oracle::refined_hall_norm(single.members()), 4);
  auto agree = fam({{{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {2, 1}}}, h);
  EXPECT_EQ(oracle::hall_norm(agree.members()), 2);
  EXPECT_EQ(oracle::selector_norm(agree.members()), 2);
  EXPECT_EQ(oracle::refined_hall_norm(agree.members()), 3);
  auto disj = fam({{{0, 0}, {1, 0}}, {{2, 0}, {3, 0}, {4, 0}}}, h);
  EXPECT_EQ(oracle::hall_norm(disj.members()), 3);
  EXPECT_EQ(oracle::selector_norm(disj.members()), 3);
  EXPECT_EQ(oracle::refined_hall_norm(disj.members()), 3);
}

TEST(Selector, WitnessesValidate) {
  auto h = h8();
  auto d = fam({{{0, 0}, {1, 0}, {2, 0}}, {{1, 1}, {2, 1}, {3, 0}}, {{0, 1}, {3, 1}, {4, 0}}}, h);
  auto w = selector_norm_by_matching(d);
  EXPECT_EQ(w.value, selector_norm(d));
  EXPECT_TRUE(is_selector(d, w.selector));
  EXPECT_EQ(w.selector.k, w.value - 1);
  ASSERT_TRUE(w.obstruction);
  EXPECT_LT(w.obstruction->union_size, static_cast<std::size_t>(w.value) * w.obstruction->members.size());
  EXPECT_FALSE(find_selector(d, w.value));
}

TEST(Selector, LexicographicallyLeast) {
  auto h = h8();
  auto d = fam({{{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 1}}}, h);
  auto s = find_selector(d, 1);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->picks[0], std::vector<Level>{0});
  EXPECT_EQ(s->picks[1], std::vector<Level>{1});
}

TEST(Caps, Exceeded) {
  auto h = make_hspec(std::vector<int>(30, 2));
  std::vector<PartialFn> v;
  for (int i = 0; i < 13; ++i) v.push_back(pf({{i, 0}}, *h));
  Family d(v, h);
  EXPECT_THROW(hall_norm(d), CapExceeded);
  Caps big;
  big.max_members = 13;
  EXPECT_EQ(hall_norm(d, big), 2);
  std::vector<PartialFn> w;
  for (int i = 0; i < 5; ++i) {
    std::vector<PartialFn::Entry> es;
    for (int j = 0; j < 5; ++j) es.emplace_back(i * 5 + j, 0);
    w.emplace_back(es, *h);
  }
  EXPECT_THROW(refined_hall_norm(Family(w, h)), CapExceeded);
}

TEST(HallReport, ChainAndWitnessesRandom) {
  std::mt19937_64 rng(7);
  auto h = make_hspec({2, 3, 2, 2, 3, 2});
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<PartialFn> v;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
      std::vector<PartialFn::Entry> es;
      for (int lv = 0; lv < 6; ++lv)
        if (rng() % 2) es.emplace_back(lv, static_cast<int>(rng() % static_cast<unsigned>(h->size(lv))));
      if (es.empty()) es.emplace_back(static_cast<int>(rng() % 6), 0);
      v.emplace_back(es, *h);
    }
    Family d(v, h);
    if (d.total_domain() > 12) continue;
    auto r = hall_report(d);
    ASSERT_LE(1, r.hn);
    ASSERT_LE(r.hn, r.hn_plus);
    ASSERT_LE(r.hn_plus, r.HN);
    ASSERT_EQ(r.hn, oracle::hall_norm(d.members()));
    ASSERT_EQ(r.hn_plus, oracle::selector_norm(d.members()));
    ASSERT_EQ(r.HN, oracle::refined_hall_norm(d.members()));
    ASSERT_TRUE(is_selector(d, r.selector));
    if (r.refinement) {
      ASSERT_TRUE(refines(d, *r.refinement));
      ASSERT_TRUE(pairwise_disjoint_domains(r.refinement->members()));
      ASSERT_EQ(hall_norm(*r.refinement), r.HN);
    } else {
      ASSERT_EQ(r.HN, 1);
    }
  }
}
