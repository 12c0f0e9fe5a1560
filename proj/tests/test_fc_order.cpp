#include <gtest/gtest.h>

#include <random>

#include "creaturekit/fc_order.hpp"
#include "creaturekit/oracles.hpp"
#include "test_util.hpp"

using namespace creaturekit;
using cktest::fam;

namespace {

HSpecPtr binary(int n) { return make_hspec(std::vector<int>(static_cast<std::size_t>(n), 2)); }

Creature full(Level a, Level b) { return Creature(CreatureKind::generic, a, b, Norm::linear(1), GenericPayload{}); }

}  // namespace

TEST(Pos, Examples) {
  auto h = binary(3);
  std::vector<Creature> one{full(1, 2)};
  EXPECT_EQ(pos(*h, {0}, one), (std::vector<Seq>{{0, 0}, {0, 1}}));
  auto e = edrf_system(make_hspec({4, 4}));
  std::vector<Creature> forb{make_excluded_creature(e, 1, {1, 2, 3})};
  EXPECT_EQ(pos(e.h(), {0}, forb), (std::vector<Seq>{{0, 0}}));
  std::vector<Creature> two{full(1, 2), full(2, 3)};
  EXPECT_EQ(pos(*h, {0}, two).size(), 4U);
  EXPECT_THROW(pos(*h, {0, 0}, two), InvalidInput);
}

TEST(Pos, Closure) {
  auto h = binary(2);
  FiniteCandidate c{{0}, {full(1, 2)}};
  EXPECT_EQ(pos_closure(*h, c), (std::set<Seq>{{}, {0}, {0, 0}, {0, 1}}));
}

TEST(Pos, MatchesBruteForce) {
  auto h = binary(6);
  auto sys = bas628_system(h);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Creature> ts;
    Level at = 1;
    while (at < 6) {
      const Level to = std::min<Level>(6, at + 1 + static_cast<Level>(rng() % 2));
      std::vector<PartialFn> fs;
      for (int i = 0; i < 2; ++i) {
        std::vector<PartialFn::Entry> es;
        for (Level lv = at; lv < to; ++lv)
          if (rng() % 2) es.emplace_back(lv, static_cast<int>(rng() % 2));
        if (!es.empty()) fs.emplace_back(es, *h);
      }
      try {
        ts.push_back(fs.empty() ? make_family_creature(sys, at, to, std::nullopt)
                                : make_family_creature(sys, at, to, Family(fs, h)));
      } catch (const InvalidInput&) {
        ts.push_back(make_family_creature(sys, at, to, std::nullopt));
      }
      at = to;
    }
    const Seq w{static_cast<int>(rng() % 2)};
    EXPECT_EQ(pos(*h, w, ts), oracle::pos_bruteforce(*h, w, ts));
  }
}

TEST(FcApply, DecideIdentity) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  FiniteCandidate c{{0}, {make_family_creature(sys, 1, 4, std::nullopt)}};
  EXPECT_EQ(fc_apply(sys, c, Decide{{0}, 0}), c);
  EXPECT_THROW(fc_apply(sys, c, Decide{{1}, 0}), InvalidInput);
}

TEST(FcApply, Bas628Compose) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  auto t0 = make_family_creature(sys, 0, 2, fam({{{0, 0}, {1, 0}}}, h));
  auto t1 = make_family_creature(sys, 2, 4, fam({{{2, 1}, {3, 1}}}, h));
  auto s = make_family_creature(sys, 0, 4, fam({{{0, 0}, {1, 0}}, {{2, 1}, {3, 1}}}, h));
  FiniteCandidate c{{}, {t0, t1}};
  auto r = fc_apply(sys, c, Compose{{2}, {s}});
  EXPECT_EQ(r.creatures.size(), 1U);
  EXPECT_THROW(fc_apply(sys, c, Compose{{2}, {t0}}), InvalidInput);
}

TEST(FcApply, Bas628Decompose) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  auto t = make_family_creature(sys, 0, 4, fam({{{0, 1}, {1, 0}}}, h));
  auto l = make_family_creature(sys, 0, 2, fam({{{0, 1}, {1, 0}}}, h));
  auto r = make_family_creature(sys, 2, 4, std::nullopt);
  FiniteCandidate c{{}, {t}};
  auto out = fc_apply(sys, c, Decompose{{{l, r}}});
  EXPECT_EQ(out.creatures.size(), 2U);
  auto bad = make_family_creature(sys, 0, 2, fam({{{0, 0}}}, h));
  EXPECT_THROW(fc_apply(sys, c, Decompose{{{bad, r}}}), InvalidInput);
}

TEST(FcLeq, Reflexive) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  FiniteCandidate c{{0}, {make_family_creature(sys, 1, 4, std::nullopt)}};
  auto r = fc_leq_witness(sys, c, c, 1);
  EXPECT_TRUE(r.found);
  EXPECT_TRUE(r.steps.empty());
  EXPECT_THROW(fc_leq_witness(sys, c, c, 0), InvalidInput);
}

TEST(FcLeq, SingleDecide) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  auto t0 = make_family_creature(sys, 1, 2, std::nullopt);
  auto t1 = make_family_creature(sys, 2, 4, std::nullopt);
  FiniteCandidate c0{{0}, {t0, t1}};
  FiniteCandidate c1{{0, 1}, {t1}};
  auto r = fc_leq_witness(sys, c0, c1, 100);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.steps.size(), 1U);
  EXPECT_FALSE(replay_chain(sys, c0, r.steps, c1));
}

TEST(FcLeq, PosObstruction) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  FiniteCandidate c0{{0}, {make_family_creature(sys, 1, 4, fam({{{1, 0}, {2, 0}, {3, 0}}}, h))}};
  FiniteCandidate c1{{0}, {make_family_creature(sys, 1, 4, std::nullopt)}};
  auto r = fc_leq_witness(sys, c0, c1, 1000);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.reason, "POS(c1) is not contained in POS(c0)");
}

TEST(FcLeq, ComposeThenDecide) {
  auto h = binary(5);
  auto sys = bas628_system(h);
  auto t0 = make_family_creature(sys, 1, 3, fam({{{1, 0}, {2, 0}}}, h));
  auto t1 = make_family_creature(sys, 3, 5, fam({{{3, 1}, {4, 1}}}, h));
  auto s = make_family_creature(sys, 1, 5, fam({{{1, 0}, {2, 0}}, {{3, 1}, {4, 1}}, {{1, 1}, {4, 0}}}, h));
  FiniteCandidate c0{{1}, {t0, t1}};
  FiniteCandidate c1{{1}, {s}};
  auto r = fc_leq_witness(sys, c0, c1, 2000);
  ASSERT_TRUE(r.found) << r.reason;
  EXPECT_FALSE(replay_chain(sys, c0, r.steps, c1));
}

TEST(FcLeq, EdrfRefinement) {
  auto sys = edrf_system(make_hspec({8, 8, 8}));
  FiniteCandidate c0{{}, {make_excluded_creature(sys, 0, {1}), make_excluded_creature(sys, 1, {2})}};
  FiniteCandidate c1{{3}, {make_excluded_creature(sys, 1, {2, 5, 6})}};
  auto r = fc_leq_witness(sys, c0, c1, 5000);
  ASSERT_TRUE(r.found) << r.reason;
  EXPECT_FALSE(replay_chain(sys, c0, r.steps, c1));
  EXPECT_TRUE(detail::seq_subset(pos_closure(sys.h(), c1), pos_closure(sys.h(), c0)));
}
