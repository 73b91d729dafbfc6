#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ninf/envelope.hpp"
#include "ninf/game.hpp"
#include "ninf/solver.hpp"

using namespace ninf;

namespace {

ConvexDomain square() { return ConvexDomain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
ConvexDomain pentagon() {
  std::vector<Point> v;
  for (int k = 0; k < 5; ++k) {
    const double a = M_PI / 2 + 2 * M_PI * k / 5;
    v.emplace_back(std::cos(a), std::sin(a));
  }
  return ConvexDomain::polygon(v);
}

std::vector<ConvexDomain> domains() {
  return {square(), pentagon(), ConvexDomain::ball(Point(0.2, -0.1), 0.8),
          ConvexDomain::ellipse(Point(0, 0), Eigen::Vector2d(1.5, 0.6)), square().outer_parallel_body(0.15)};
}

Point random_point(std::mt19937_64& rng, const BoundingBox& box) {
  std::uniform_real_distribution<double> ux(box.min[0] - 0.5, box.max[0] + 0.5), uy(box.min[1] - 0.5, box.max[1] + 0.5);
  return Point(ux(rng), uy(rng));
}

ScalarField random_field(std::shared_ptr<const Grid> grid, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return ScalarField::sample(std::move(grid), [&](const Point&) { return u(rng); }, true);
}

ScalarField apply_dpp(const ScalarField& u, const RingStencil& ring, const SourceTerm& f) {
  ScalarField next = u;
  for (int n : u.grid().inside_nodes()) next[n] = dpp_update(u, ring, f, n);
  return next;
}

}  // namespace

TEST(Property, SignedDistanceIsOneLipschitz) {
  std::mt19937_64 rng(1);
  for (const auto& d : domains()) {
    const auto box = d.bounding_box();
    for (int k = 0; k < 2000; ++k) {
      const Point x = random_point(rng, box), y = random_point(rng, box);
      EXPECT_LE(std::abs(d.signed_distance(x) - d.signed_distance(y)), (x - y).norm() + 1e-12);
    }
  }
}

TEST(Property, ContainmentAgreesWithSignedDistance) {
  std::mt19937_64 rng(2);
  for (const auto& d : domains()) {
    const auto box = d.bounding_box();
    for (int k = 0; k < 2000; ++k) {
      const Point x = random_point(rng, box);
      const double s = d.signed_distance(x);
      if (std::abs(s) > 1e-9) EXPECT_EQ(d.contains(x), s < 0);
    }
  }
}

TEST(Property, ParallelBodyIsMonotone) {
  std::mt19937_64 rng(3);
  for (const auto& d : domains()) {
    const auto wide = d.outer_parallel_body(0.1), wider = d.outer_parallel_body(0.3);
    const auto box = wider.bounding_box();
    for (int k = 0; k < 2000; ++k) {
      const Point x = random_point(rng, box);
      if (d.contains(x)) EXPECT_TRUE(wide.contains(x));
      if (wide.contains(x)) EXPECT_TRUE(wider.contains(x));
      if (d.signed_distance(x) > 0) EXPECT_NEAR(wide.signed_distance(x), d.signed_distance(x) - 0.1, 1e-9);
    }
  }
}

TEST(Property, RingExtremaMonotoneAndOdd) {
  std::mt19937_64 rng(4);
  const auto grid = build_grid(pentagon(), 0.05);
  const auto ring = build_ring(grid, 0.125, 16);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_field(grid, rng, 0, 1);
    auto b = a;
    std::uniform_real_distribution<double> bump(0, 0.5);
    for (int n : grid->inside_nodes()) b[n] += bump(rng);
    auto neg = a;
    for (auto& v : neg.values()) v = -v;
    for (int n : grid->inside_nodes()) {
      const auto ea = ring_extrema(a, ring, n), eb = ring_extrema(b, ring, n), en = ring_extrema(neg, ring, n);
      EXPECT_LE(ea.max, eb.max + 1e-15);
      EXPECT_LE(ea.min, eb.min + 1e-15);
      EXPECT_LE(ea.min, ea.max);
      EXPECT_DOUBLE_EQ(en.max, -ea.min);
      EXPECT_DOUBLE_EQ(en.min, -ea.max);
    }
  }
}

TEST(Property, IteratesFromZeroAreNondecreasing) {
  for (const auto& d : {square(), pentagon()}) {
    const auto grid = build_grid(d, 0.04);
    const auto ring = build_ring(grid, 0.1, 16);
    const auto f = SourceTerm::constant(1.0);
    ScalarField u(grid, 0.0, true);
    for (int k = 0; k < 40; ++k) {
      const auto next = apply_dpp(u, ring, f);
      for (int n : grid->inside_nodes()) ASSERT_GE(next[n], u[n]) << "sweep " << k;
      u = next;
    }
  }
}

TEST(Property, UpdateIsMonotone) {
  std::mt19937_64 rng(5);
  const auto grid = build_grid(square(), 0.04);
  const auto ring = build_ring(grid, 0.1, 16);
  const auto f = SourceTerm::constant(1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_field(grid, rng, 0, 1);
    auto b = a;
    for (int n : grid->inside_nodes()) b[n] += 0.1;
    for (int n : grid->inside_nodes()) EXPECT_LE(dpp_update(a, ring, f, n), dpp_update(b, ring, f, n));
  }
}

TEST(Property, DiscreteComparison) {
  SchemeParams p;
  p.eps = 0.1;
  for (const auto& d : {square(), pentagon()}) {
    const auto u1 = solve(d, SourceTerm::constant(1.0), p);
    const auto u2 = solve(d, SourceTerm::constant(2.0), p);
    const auto u0 = solve(d, SourceTerm::constant(0.0), p);
    for (int n : u1.grid().inside_nodes()) {
      EXPECT_GT(u1[n], 0.0);
      EXPECT_LE(u1[n], u2[n]);
      EXPECT_EQ(u0[n], 0.0);
    }
  }
}

TEST(Property, LinearInSource) {
  SchemeParams p;
  p.eps = 0.1;
  p.tol = 1e-13;
  const auto u1 = solve(square(), SourceTerm::constant(1.0), p);
  const auto u3 = solve(square(), SourceTerm::constant(3.0), p);
  for (int n : u1.grid().inside_nodes()) EXPECT_NEAR(u3[n], 3 * u1[n], 1e-9);
}

TEST(Property, ExactOnQuadraticsInOneDimension) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> coef(0.1, 3.0);
  const auto grid = build_grid(ConvexDomain::interval(-1, 1), 1.0 / 32);
  const auto ring = build_ring(grid, 1.0 / 8, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const double c = coef(rng), a = coef(rng);
    const auto q = ScalarField::sample(grid, [&](const Point& x) { return a - 0.5 * c * x[0] * x[0]; });
    const auto f = SourceTerm::constant(c);
    for (int n : grid->inside_nodes()) {
      if (grid->boundary_dist(n) < 1.0 / 8) continue;
      EXPECT_NEAR(dpp_update(q, ring, f, n), q[n], 1e-13);
    }
  }
}

TEST(Property, DilationScaling) {
  SchemeParams p;
  p.eps = 0.1;
  p.tol = 1e-14;
  const auto u = solve(pentagon(), SourceTerm::constant(1.0), p);
  for (double s : {0.5, 2.0}) {
    SchemeParams ps = p;
    ps.eps = s * p.eps;
    ps.tol = s * s * p.tol;
    const auto us = solve(pentagon().scaled(s, Point(0, 0)), SourceTerm::constant(1.0), ps);
    ASSERT_EQ(us.grid().size(), u.grid().size());
    for (int n : u.grid().inside_nodes()) EXPECT_NEAR(us[n], s * s * u[n], 1e-9 * s * s);
  }
}

TEST(Property, EnvelopeIsIdempotentAndBelow) {
  std::mt19937_64 rng(7);
  const auto grid = build_grid(square(), 0.1);
  for (int trial = 0; trial < 3; ++trial) {
    const auto w = random_field(grid, rng, -1, 0);
    const auto e = convex_envelope(w);
    const auto ee = convex_envelope(e.values);
    for (int n : grid->inside_nodes()) {
      EXPECT_LE(e.values[n], w[n] + 1e-12);
      EXPECT_NEAR(ee.values[n], e.values[n], 1e-9);
    }
  }
}

TEST(Property, EnvelopeIsMonotone) {
  std::mt19937_64 rng(8);
  const auto grid = build_grid(square(), 0.1);
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = random_field(grid, rng, -1, 0);
    auto b = a;
    std::uniform_real_distribution<double> bump(0, 0.3);
    for (int n : grid->inside_nodes()) b[n] += bump(rng);
    const auto ea = convex_envelope(a), eb = convex_envelope(b);
    for (int n : grid->inside_nodes()) EXPECT_LE(ea.values[n], eb.values[n] + 1e-9);
  }
}

TEST(Property, WitnessWeightsAreConvex) {
  std::mt19937_64 rng(9);
  const auto grid = build_grid(square(), 0.1);
  const auto e = convex_envelope(random_field(grid, rng, -1, 0));
  for (const auto& nw : e.witness.nodes) {
    ASSERT_LE(nw.points.size(), 3u);
    double total = 0;
    Point x = Point::Zero();
    for (const auto& wp : nw.points) {
      EXPECT_GT(wp.lambda, 0.0);
      total += wp.lambda;
      x += wp.lambda * grid->position(wp.node);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR((x - grid->position(nw.node)).norm(), 0.0, 1e-9);
  }
}

TEST(Property, GameSeedDeterminismAndNonnegativePayoff) {
  const auto d = ConvexDomain::ball(Point(0, 0), 1);
  GameConfig cfg;
  cfg.eps = 0.2;
  cfg.trials = 300;
  cfg.strategy = Strategy::radial;
  for (std::uint64_t seed : {0ULL, 1ULL, 77ULL}) {
    cfg.seed = seed;
    const auto a = play(d, Point(0.3, 0.1), SourceTerm::constant(1.0), cfg);
    const auto b = play(d, Point(0.3, 0.1), SourceTerm::constant(1.0), cfg);
    EXPECT_EQ(a.mean_payoff, b.mean_payoff);
    EXPECT_EQ(a.mean_steps, b.mean_steps);
    EXPECT_GE(a.mean_payoff, 0.0);
  }
}

TEST(Property, FieldFileRoundTrip) {
  std::mt19937_64 rng(10);
  for (const auto& d : domains()) {
    const auto field = random_field(build_grid(d, 0.07), rng, -1e3, 1e3);
    std::stringstream s;
    write_field(s, field);
    const auto file = read_field_file(s);
    EXPECT_EQ(file.spec.nx, field.grid().nx());
    EXPECT_EQ(file.spec.ny, field.grid().ny());
    EXPECT_EQ(file.values, field.values());
  }
}
