#include <gtest/gtest.h>

#include "support.hpp"

using namespace pcsreg;
using namespace pcsreg::test;

namespace {

CandidateExpression candidate(const ExpressionTree& t, std::vector<FrameKind> kinds) {
  Strategy s;
  for (FrameKind k : kinds) s.steps.push_back({k, std::nullopt});
  return {t, s, realize(t)};
}

}  // namespace

TEST(Optimizer, SquareScores) {
  const Scene s = square_scene();
  const Score a = score(square_expression(), idx(s, "A"), s, square_prefs());
  EXPECT_EQ(a.appropriateness, 1);
  EXPECT_NEAR(a.effectiveness, 0.6, 1e-12);
  EXPECT_NEAR(a.total(), 1.6, 1e-12);
  const Score d = score(square_expression(), idx(s, "D"), s, square_prefs());
  EXPECT_EQ(d.appropriateness, 0);
  EXPECT_NEAR(d.total(), 0.4, 1e-12);
  const Score u = score(Denotation::unresolvable(s.size()), 0);
  EXPECT_EQ(u.total(), 0.0);
}

TEST(Optimizer, TiedTargetIsAppropriate) {
  const Denotation d = Denotation::from_mass({0.5, 0.5, 0.0});
  EXPECT_EQ(score(d, 0).appropriateness, 1);
  EXPECT_EQ(score(d, 1).appropriateness, 1);
  EXPECT_EQ(score(d, 2).appropriateness, 0);
}

TEST(Optimizer, StrictArgmax) {
  // Targets A (1.6), D (0.4) and a flat expression scoring 1.25 for A.
  const Scene s = square_scene();
  AttributePhrase object;
  object.category = "object";
  const ExpressionTree flat = ExpressionTree::leaf(object);
  AttributePhrase square;
  square.shape = "square";
  const ExpressionTree behind = ExpressionTree::compound(object, Preposition::kBehind, ExpressionTree::leaf(square));
  const std::vector<CandidateExpression> c = {candidate(behind, {FrameKind::kEgocentric}),
                                              candidate(square_expression(), {FrameKind::kAddresseeCentered}),
                                              candidate(flat, {})};
  const auto scores = score_all(c, idx(s, "A"), s, square_prefs());
  EXPECT_NEAR(scores[0].total(), 0.4, 1e-12);
  EXPECT_NEAR(scores[1].total(), 1.6, 1e-12);
  EXPECT_NEAR(scores[2].total(), 1.25, 1e-12);
  EXPECT_EQ(select_best(c, idx(s, "A"), s, square_prefs()).index, 1u);
  EXPECT_THROW(select_best({}, 0, s, square_prefs()), Error);
}

TEST(Optimizer, TiePrefersConsistentStrategy) {
  const Scene s = square_scene();
  const ExpressionTree t = square_expression();
  const std::vector<CandidateExpression> c = {
      candidate(t, {FrameKind::kEgocentric, FrameKind::kAddresseeCentered}),
      candidate(t, {FrameKind::kAddresseeCentered, FrameKind::kAddresseeCentered})};
  EXPECT_EQ(select_best(c, idx(s, "A"), s, square_prefs()).index, 1u);
}

TEST(Optimizer, CarPcsregPicksEgocentric) {
  const Scene s = car_scene();
  const PreferenceTable prefs = default_preferences();
  const LandmarkChain chain = build_landmark_chain(idx(s, "A"), s, prefs);
  const auto space = expression_space(chain, s);
  ASSERT_EQ(space.size(), 4u);
  const auto scores = score_all(space, idx(s, "A"), s, prefs);
  const Selection sel = select_best(space, idx(s, "A"), s, prefs);
  EXPECT_EQ(space[sel.index].surface, "the yellow block to the left of the car");
  EXPECT_EQ(space[sel.index].strategy.kinds(), std::vector<FrameKind>{FrameKind::kEgocentric});
  EXPECT_NEAR(sel.score.effectiveness, 0.955, 1e-12);
  for (const Score& sc : scores) EXPECT_LE(sc.total(), sel.score.total() + kScoreTieTolerance);
}

TEST(Optimizer, GreedyMaxPerLandmarkType) {
  const PreferenceTable prefs = default_preferences();
  const Scene f1 = car_scene();
  const LandmarkChain c1 = build_landmark_chain(idx(f1, "A"), f1, prefs);
  EXPECT_EQ(select_greedy_max(c1, f1, prefs).strategy.kinds(), std::vector<FrameKind>{FrameKind::kIntrinsic});

  const Scene u({speaker(), listener(), object("a", "block", {-0.4, 0}, "yellow"),
                 object("b", "block", {0.4, 0}, "yellow"), object("k", "cuboid", {0, 0})});
  const LandmarkChain cu = build_landmark_chain(idx(u, "a"), u, prefs);
  EXPECT_EQ(select_greedy_max(cu, u, prefs).strategy.kinds(), std::vector<FrameKind>{FrameKind::kEgocentric});

  // Only the listener can separate the two blocks.
  const Scene l({speaker({0, -1}), listener({0, 0.2}, -kHalfPi), object("a", "block", {-0.5, 0.2}, "yellow"),
                 object("b", "block", {0.5, 0.2}, "yellow")});
  const LandmarkChain cl = build_landmark_chain(idx(l, "a"), l, prefs);
  ASSERT_EQ(cl.landmarks(), std::vector<std::size_t>{l.listener_index()});
  const CandidateExpression g = select_greedy_max(cl, l, prefs);
  EXPECT_EQ(g.strategy.kinds(), std::vector<FrameKind>{FrameKind::kAddresseeCentered});
  EXPECT_EQ(g.surface, "the yellow block on your right");
}

TEST(Optimizer, Baselines) {
  const Scene s = car_scene();
  const PreferenceTable prefs = default_preferences();
  const LandmarkChain chain = build_landmark_chain(idx(s, "A"), s, prefs);
  EXPECT_EQ(select_baseline(Method::kRobot, chain, s).surface, "the yellow block to the left of the car");
  EXPECT_EQ(select_baseline(Method::kHuman, chain, s).surface, "the yellow block to the right of the car");
  EXPECT_EQ(select_baseline(Method::kRandom, chain, s, 11).strategy.kinds(),
            select_baseline(Method::kRandom, chain, s, 11).strategy.kinds());
  try {
    select_baseline(Method::kRandom, chain, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kConfig);
  }
  std::set<std::vector<FrameKind>> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed)
    seen.insert(select_baseline(Method::kRandom, chain, s, seed).strategy.kinds());
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Optimizer, OptimalityAndDominance) {
  const PreferenceTable prefs = default_preferences();
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Scene sc = harness::sample_scene(harness::derive_seed(31, {i}));
    for (std::size_t t : harness::ambiguous_targets(sc)) {
      std::optional<LandmarkChain> chain;
      try {
        chain = build_landmark_chain(t, sc, prefs);
      } catch (const AmbiguityError&) {
        continue;
      }
      const auto space = expression_space(*chain, sc);
      const Selection sel = select_best(space, t, sc, prefs);
      for (const auto& c : space) EXPECT_LE(score(c.tree, t, sc, prefs).total(), sel.score.total());
      const Score greedy = score(select_greedy_max(*chain, sc, prefs).tree, t, sc, prefs);
      EXPECT_GE(sel.score.total(), greedy.total());
      EXPECT_GE(sel.score.effectiveness, 0.0);
      EXPECT_LE(sel.score.total(), 2.0);
    }
  }
}

TEST(Optimizer, ArgmaxInvariantUnderCommonScaling) {
  // Scaling every nonzero entry by the same constant and renormalizing.
  const PreferenceTable base = default_preferences();
  std::array<FrameDistribution, kLandmarkTypeCount> rows;
  for (std::size_t r = 0; r < kLandmarkTypeCount; ++r) {
    rows[r] = base.row(static_cast<LandmarkType>(r));
    for (double& v : rows[r]) v *= 3.7;
    rows[r] = renormalized(rows[r]);
  }
  const PreferenceTable scaled(rows);
  for (std::uint64_t i = 0; i < 60; ++i) {
    const Scene sc = harness::sample_scene(harness::derive_seed(41, {i}));
    for (std::size_t t : harness::ambiguous_targets(sc)) {
      try {
        const LandmarkChain chain = build_landmark_chain(t, sc, base);
        const auto space = expression_space(chain, sc);
        EXPECT_EQ(select_best(space, t, sc, base).index, select_best(space, t, sc, scaled).index);
      } catch (const AmbiguityError&) {
      }
    }
  }
}

TEST(Optimizer, UniformIndexInRange) {
  std::mt19937_64 rng(3);
  std::array<int, 5> counts{};
  for (int i = 0; i < 5000; ++i) ++counts[uniform_index(rng, 5)];
  for (int c : counts) EXPECT_GT(c, 800);
  for (Method m : kAllMethods) EXPECT_EQ(method_from_string(to_string(m)), m);
}
