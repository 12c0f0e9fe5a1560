#include <gtest/gtest.h>

#include <random>

#include "creaturekit/systems.hpp"
#include "test_util.hpp"

using namespace creaturekit;
using cktest::fam;
using cktest::pf;

namespace {

HSpecPtr binary(int n) { return make_hspec(std::vector<int>(static_cast<std::size_t>(n), 2)); }

std::shared_ptr<const ExampleSystem> shared(ExampleSystem s) { return std::make_shared<const ExampleSystem>(std::move(s)); }

}  // namespace

TEST(Norms, Edrf) {
  auto sys = edrf_system(make_hspec({16, 16}));
  EXPECT_EQ(make_excluded_creature(sys, 0, {1, 2, 3}).nor(), Norm::linear(13));
  EXPECT_EQ(make_excluded_creature(sys, 0, {1, 2, 3, 4}).nor(), Norm::linear(1));
  EXPECT_THROW(make_excluded_creature(sys, 0, {}), InvalidInput);
  std::vector<Value> all;
  for (int i = 0; i < 16; ++i) all.push_back(i);
  EXPECT_THROW(make_excluded_creature(sys, 0, all), InvalidInput);
  EXPECT_THROW(edrf_system(make_hspec({3})), InvalidInput);
}

TEST(Norms, EdrfEffectiveSize) {
  auto sys = edrf_system(make_hspec({32}), std::vector<int>{16});
  EXPECT_EQ(make_excluded_creature(sys, 0, {0}).nor(), Norm::linear(15));
  std::vector<Value> e;
  for (int i = 0; i < 16; ++i) e.push_back(i);
  EXPECT_THROW(make_excluded_creature(sys, 0, e), InvalidInput);
}

TEST(Norms, Bas628EmptyFamily) {
  auto sys = bas628_system(binary(8));
  auto t = make_family_creature(sys, 3, 5, std::nullopt);
  EXPECT_EQ(t.nor(), Norm::logarithmic(NormScale::log8, pow_int(8, 4)));
  EXPECT_NEAR(t.nor().value(), 4.0, 1e-12);
}

TEST(Norms, BisEmptyFamily) {
  auto sys = bas628bis_system(binary(8));
  auto t = make_family_creature(sys, 0, 8, std::nullopt);
  EXPECT_NEAR(t.nor().value(), 2.0, 1e-12);
}

TEST(Norms, FamilyCreature) {
  auto h = binary(8);
  auto sys = bas628_system(h);
  auto t = make_family_creature(sys, 0, 4, fam({{{0, 0}, {1, 0}, {2, 0}, {3, 0}}}, h));
  EXPECT_EQ(t.nor().pre(), 5);
  EXPECT_THROW(make_family_creature(sys, 0, 4, fam({{{0, 0}}, {{0, 1}}}, h)), InvalidInput);
  EXPECT_THROW(make_family_creature(sys, 0, 2, fam({{{3, 0}}}, h)), InvalidInput);
  auto bis = bas628bis_system(h);
  auto agree = fam({{{0, 0}, {1, 0}, {2, 0}}, {{0, 0}, {1, 0}, {2, 1}}}, h);
  EXPECT_EQ(make_family_creature(sys, 0, 3, agree).nor().pre(), 2);
  EXPECT_EQ(make_family_creature(bis, 0, 3, agree).nor().pre(), 3);
}

TEST(Norms, Loctree) {
  auto sys = loctree_system(make_hspec({16, 16}));
  auto t = make_loctree_creature(sys, {}, {0, 1, 2, 3});
  EXPECT_NEAR(t.nor.value(), 1.0, 1e-12);
  EXPECT_EQ(t.successors.size(), 12U);
  EXPECT_THROW(make_loctree_creature(sys, {}, {}), InvalidInput);
}

TEST(Norms, Loc628) {
  auto sys = loc628_system(binary(6), {0, 2, 6});
  EXPECT_EQ(sys.h().sizes(), (std::vector<int>{4, 16}));
  auto t = make_family_creature(sys, 1, 2, std::nullopt);
  EXPECT_EQ(t.nor().pre(), 5);
  auto fine = sys.codec->fine;
  auto d = fam({{{2, 0}, {3, 0}, {4, 0}, {5, 0}}}, fine);
  auto s = make_family_creature(sys, 1, 2, d);
  EXPECT_EQ(s.nor().pre(), 5);
  EXPECT_EQ(s.segments(sys.h()).size(), 15U);
}

TEST(Omitex, Tmin) {
  auto sys = omitex_system(make_hspec({4, 4}));
  auto t = omitex_tmin(sys, 1);
  EXPECT_EQ(t.excluded().excluded, (std::vector<Value>{1, 2, 3}));
  EXPECT_EQ(t.extensions({2}, sys.h()), (std::vector<Seq>{{2, 0}}));
  EXPECT_EQ(t.nor().pre(), Rational(4, 3));
  for (Value a = 1; a < 4; ++a)
    EXPECT_TRUE(sigma_member(sys, t, make_excluded_creature(sys, 1, {a})));
  EXPECT_THROW(make_excluded_creature(sys, 1, {0}), InvalidInput);
}

TEST(Sigma, Bas628Union) {
  auto h = binary(8);
  auto sys = bas628_system(h);
  auto t0 = make_family_creature(sys, 0, 2, fam({{{0, 0}, {1, 0}}}, h));
  auto t1 = make_family_creature(sys, 2, 4, fam({{{2, 1}, {3, 1}}}, h));
  auto s = make_family_creature(sys, 0, 4, fam({{{0, 0}, {1, 0}}, {{2, 1}, {3, 1}}}, h));
  EXPECT_TRUE(sigma_member(sys, s, std::vector<Creature>{t0, t1}));
  auto narrow = make_family_creature(sys, 0, 4, fam({{{0, 0}, {1, 0}}}, h));
  EXPECT_FALSE(sigma_member(sys, narrow, std::vector<Creature>{t0, t1}));
  EXPECT_THROW(sigma_member(sys, s, std::vector<Creature>{t0}), InvalidInput);
  EXPECT_TRUE(sigma_member(sys, s, s));
}

TEST(Sigma, Local) {
  auto sys = edrf_system(make_hspec({16, 16}));
  auto t = make_excluded_creature(sys, 0, {1});
  EXPECT_TRUE(sigma_member(sys, make_excluded_creature(sys, 0, {1, 5}), t));
  EXPECT_FALSE(sigma_member(sys, make_excluded_creature(sys, 0, {5}), t));
  EXPECT_THROW(sigma_member(sys, make_excluded_creature(sys, 1, {1, 5}), t), InvalidInput);
}

TEST(SigmaBot, Clauses) {
  auto h = binary(4);
  auto sys = bas628_system(h);
  auto t = make_family_creature(sys, 0, 4, fam({{{0, 0}, {1, 1}}}, h));
  EXPECT_TRUE(sigma_bot_member(sys, std::vector<Creature>{t}, t));
  auto l = make_family_creature(sys, 0, 2, fam({{{0, 0}, {1, 1}}}, h));
  auto r = make_family_creature(sys, 2, 4, std::nullopt);
  EXPECT_TRUE(sigma_bot_member(sys, std::vector<Creature>{l, r}, t));
  auto straddle = make_family_creature(sys, 0, 4, fam({{{1, 0}, {2, 0}}}, h));
  auto l2 = make_family_creature(sys, 0, 2, fam({{{0, 1}}}, h));
  auto r2 = make_family_creature(sys, 2, 4, fam({{{3, 1}}}, h));
  EXPECT_FALSE(sigma_bot_member(sys, std::vector<Creature>{l2, r2}, straddle));
  EXPECT_THROW(sigma_bot_member(sys, std::vector<Creature>{l2}, straddle), InvalidInput);
}

TEST(Edrf, HFunction) {
  EXPECT_EQ(edrf_h_value(16, 20), 19);
  EXPECT_EQ(edrf_h_value(16, 15), 14);
  EXPECT_EQ(edrf_h_value(16, 10), 1);
  EXPECT_FALSE(regressive_audit([](long long, long long k) { return edrf_h_value(16, k); }, 4, 64));
}

TEST(Link, Edrf) {
  auto sys = edrf_system(make_hspec({16}));
  auto r = link(sys, make_excluded_creature(sys, 0, {1}), make_excluded_creature(sys, 0, {2}));
  EXPECT_EQ(r.s.excluded().excluded, (std::vector<Value>{1, 2}));
  EXPECT_EQ(r.s.nor(), Norm::linear(14));
  auto t = make_excluded_creature(sys, 0, {3});
  EXPECT_EQ(link(sys, t, t).s, t);
  auto small = edrf_system(make_hspec({4}));
  EXPECT_THROW(link(small, make_excluded_creature(small, 0, {0, 1, 2}), make_excluded_creature(small, 0, {3})),
               NoLink);
}

TEST(Link, Bas628DisjointSupports) {
  auto h = binary(8);
  auto sys = bas628_system(h);
  auto t0 = make_family_creature(sys, 0, 8, fam({{{0, 0}, {1, 0}, {2, 0}}}, h));
  auto t1 = make_family_creature(sys, 0, 8, fam({{{4, 1}, {5, 1}}}, h));
  auto r = link(sys, t0, t1);
  EXPECT_EQ(r.s.delta()->size(), 2U);
  EXPECT_EQ(r.s.nor().pre(), 3);
  EXPECT_TRUE(sigma_member(sys, r.s, t0));
  EXPECT_TRUE(sigma_member(sys, r.s, t1));
}

TEST(Escape, EmptyTarget) {
  auto h = binary(3);
  auto sys = bas628bis_system(h);
  auto t = make_family_creature(sys, 0, 3, std::nullopt);
  auto s = make_family_creature(sys, 0, 3, fam({{{0, 1}, {1, 0}, {2, 1}}}, h));
  auto r = escape_value(sys, s, t, {});
  EXPECT_EQ(r.v, (Seq{1, 0, 1}));
  EXPECT_EQ(r.route, "constructive");
  EXPECT_THROW(escape_value(sys, s, s, {}), InvalidInput);
}

TEST(Escape, RandomInstances) {
  auto h = binary(4);
  auto sys = bas628bis_system(h);
  std::mt19937 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto random_creature = [&]() -> std::optional<Creature> {
      std::vector<PartialFn> fs;
      const int n = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) {
        std::vector<PartialFn::Entry> es;
        for (int lv = 0; lv < 4; ++lv)
          if (rng() % 2) es.emplace_back(lv, static_cast<int>(rng() % 2));
        if (!es.empty()) fs.emplace_back(es, *h);
      }
      if (fs.empty()) return std::nullopt;
      try {
        return make_family_creature(sys, 0, 4, Family(fs, h));
      } catch (const InvalidInput&) {
        return std::nullopt;
      }
    };
    auto s = random_creature();
    auto t = random_creature();
    if (!s || !t || !(s->nor() < t->nor())) continue;
    auto r = escape_value(sys, *s, *t, {});
    EXPECT_TRUE(t->val_contains({}, r.v));
    EXPECT_FALSE(s->val_contains({}, r.v));
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Cut, SingleTotalFunction) {
  auto h = binary(4);
  auto sys = bas628bis_system(h);
  auto t = make_family_creature(sys, 0, 4, fam({{{0, 1}, {1, 0}, {2, 1}, {3, 1}}}, h));
  auto r = cut(sys, t, 2);
  EXPECT_EQ(*r.s0.delta(), fam({{{0, 1}, {1, 0}}}, h));
  EXPECT_EQ(*r.s1.delta(), fam({{{2, 1}, {3, 1}}}, h));
  EXPECT_EQ(r.construction, "split");
  EXPECT_TRUE(check_cut(sys, t, 2, r.s0, r.s1).all());
}

TEST(Cut, EmptyFamily) {
  auto sys = bas628bis_system(binary(6));
  auto t = make_family_creature(sys, 1, 5, std::nullopt);
  auto r = cut(sys, t, 3);
  EXPECT_FALSE(r.s0.delta());
  EXPECT_FALSE(r.s1.delta());
  EXPECT_TRUE(check_cut(sys, t, 3, r.s0, r.s1).all());
  EXPECT_THROW(cut(sys, t, 1), InvalidInput);
}

TEST(Dual, Complement) {
  auto base = shared(edrf_system(make_hspec({8, 8})));
  std::vector<Creature> top{make_excluded_creature(*base, 0, {0}), make_excluded_creature(*base, 1, {0})};
  auto sys = dual_system(base, top);
  auto t = make_excluded_creature(*base, 0, {0, 3});
  auto c = dual_creature(sys, t);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->segments(sys.h()), (std::vector<Seq>{{0}, {3}}));
  EXPECT_EQ(c->nor(), Norm::linear(6));
  auto same = dual_creature(sys, top[0]);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->nor(), Norm::linear(0));
  EXPECT_THROW(dual_creature(sys, make_excluded_creature(*base, 0, {3})), InvalidInput);
}

TEST(Dual, LinkIntersects) {
  auto base = shared(edrf_system(make_hspec({8})));
  auto top = make_excluded_creature(*base, 0, {0});
  auto sys = dual_system(base, {top});
  auto a = *dual_creature(sys, make_excluded_creature(*base, 0, {0, 1}));
  auto b = *dual_creature(sys, make_excluded_creature(*base, 0, {0, 2}));
  auto r = link(sys, a, b);
  EXPECT_TRUE(sigma_member(sys, r.s, a));
  EXPECT_TRUE(sigma_member(sys, r.s, b));
  EXPECT_EQ(r.s.segments(sys.h()), (std::vector<Seq>{{0}}));
}

TEST(Cohen, SmallAlphabets) {
  EXPECT_TRUE(cohen_audit(edrf_system(make_hspec({16})), 0).ok);
  EXPECT_TRUE(cohen_audit(loctree_system(make_hspec({16})), 0).ok);
  EXPECT_TRUE(cohen_audit(loc628_system(binary(8), {0, 8}), 0).ok);
}

TEST(Windows, FastAudit) {
  EXPECT_FALSE(fast_audit([](long long k, long long l) { return (l + 1) << (2 * k); }, 8, 8));
  auto v = fast_audit([](long long k, long long) { return k + 1; }, 4, 4);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->clause, "2 f(k,l) < f(k+1,l)");
}

TEST(Additive, ReportsWitness) {
  auto base = edrf_system(make_hspec({8}));
  auto rep = additive_audit(base, make_excluded_creature(base, 0, {0}));
  EXPECT_GT(rep.pairs_checked, 0U);
}
