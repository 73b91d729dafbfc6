#include <cmath>

#include <gtest/gtest.h>

#include "ninf/game.hpp"

using namespace ninf;

namespace {

ConvexDomain interval() { return ConvexDomain::interval(-1, 1); }

ScalarField exact_guide() {
  return ScalarField::sample(build_grid(interval(), 1.0 / 16), [](const Point& x) { return 0.5 * (1 - x[0] * x[0]); }, true);
}

}  // namespace

TEST(Chain, ExactValues) {
  const auto c = chain_value_1d(1.0, 0.25, 1.0);
  ASSERT_EQ(c.u.size(), 9);
  EXPECT_NEAR(c.u[4], 0.5, 1e-15);
  for (int k = 0; k < c.u.size(); ++k) EXPECT_NEAR(c.u[k], 0.5 * (1 - c.x[k] * c.x[k]), 1e-15);
  EXPECT_NEAR(chain_value_1d(1.0, 0.25, 2.0).u[4], 1.0, 1e-15);
  for (double v : chain_value_1d(1.0, 0.1, 0.0).u) EXPECT_EQ(v, 0.0);
}

TEST(Chain, Guards) {
  EXPECT_THROW(chain_value_1d(1.0, 0.3, 1.0), std::invalid_argument);
  EXPECT_THROW(chain_value_1d(1.0, 1e-5, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(chain_value_1d(1.0, 1e-4, 1.0));
}

TEST(Splitmix, ReferenceValue) { EXPECT_EQ(splitmix64(0), 16294208416658607535ULL); }

TEST(Play, StartOnBoundary) {
  const auto guide = exact_guide();
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 50;
  const auto r = play(interval(), Point(1, 0), SourceTerm::constant(1.0), cfg, &guide);
  EXPECT_EQ(r.mean_payoff, 0.0);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_EQ(r.exit_rate, 1.0);
}

TEST(Play, OneDimensionalMatchesChain) {
  const auto guide = exact_guide();
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 20000;
  cfg.seed = 3;
  const auto r = play(interval(), Point(0, 0), SourceTerm::constant(1.0), cfg, &guide);
  EXPECT_LE(std::abs(r.mean_payoff - 0.5), 3 * r.std_error);
  EXPECT_EQ(r.exit_rate, 1.0);
  EXPECT_NEAR(r.mean_steps, 64.0, 2.0);
}

TEST(Play, FrozenSeed) {
  SchemeParams p;
  p.eps = 0.125;
  const auto guide = solve(interval(), SourceTerm::constant(1.0), p);
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 2000;
  cfg.seed = 42;
  const auto r = play(interval(), Point(0, 0), SourceTerm::constant(1.0), cfg, &guide);
  EXPECT_DOUBLE_EQ(r.mean_payoff, 0.49627343750000003);
  EXPECT_DOUBLE_EQ(r.std_error, 0.0090978341751670501);
  EXPECT_DOUBLE_EQ(r.mean_steps, 63.523);
}

TEST(Play, ThreadCountDoesNotMatter) {
  const auto guide = exact_guide();
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 3000;
  cfg.seed = 11;
  const auto a = play(interval(), Point(0.25, 0), SourceTerm::constant(1.0), cfg, &guide);
  cfg.threads = 4;
  const auto b = play(interval(), Point(0.25, 0), SourceTerm::constant(1.0), cfg, &guide);
  EXPECT_EQ(a.mean_payoff, b.mean_payoff);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Play, RadialBall) {
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 2000;
  cfg.seed = 42;
  cfg.strategy = Strategy::radial;
  const auto r = play(ConvexDomain::ball(Point(0, 0), 1), Point(0, 0), SourceTerm::constant(1.0), cfg);
  EXPECT_DOUBLE_EQ(r.mean_payoff, 0.52383593750000002);
  EXPECT_LE(std::abs(r.mean_payoff - 0.5), 3 * r.std_error + cfg.eps);
}

TEST(Play, NonExitWhenCapped) {
  const auto guide = exact_guide();
  GameConfig cfg;
  cfg.eps = 0.125;
  cfg.trials = 500;
  cfg.max_steps = 10;
  const auto r = play(interval(), Point(0, 0), SourceTerm::constant(1.0), cfg, &guide);
  EXPECT_LT(r.exit_rate, 1.0);
  EXPECT_TRUE(r.non_exit());
  EXPECT_LE(r.mean_payoff, 10 * 0.125 * 0.125 / 2 + 1e-15);
}

TEST(Play, Guards) {
  const auto guide = exact_guide();
  GameConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(play(interval(), Point(0, 0), SourceTerm::constant(1.0), cfg, &guide), std::invalid_argument);
  cfg.trials = 1;
  EXPECT_THROW(play(interval(), Point(0, 0), SourceTerm::constant(1.0), cfg, nullptr), std::invalid_argument);
  EXPECT_THROW(play(interval(), Point(2, 0), SourceTerm::constant(1.0), cfg, &guide), std::invalid_argument);
}
