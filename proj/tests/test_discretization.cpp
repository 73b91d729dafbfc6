#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "ninf/discretization.hpp"

using namespace ninf;

namespace {

ConvexDomain square() { return ConvexDomain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
ConvexDomain interval() { return ConvexDomain::interval(-1, 1); }

double half_parabola(const Point& x) { return 0.5 * (1 - x[0] * x[0]); }

}  // namespace

TEST(Grid, IntervalNodes) {
  const auto g = build_grid(interval(), 0.25);
  ASSERT_EQ(g->inside_nodes().size(), 7u);
  EXPECT_DOUBLE_EQ(g->position(g->inside_nodes().front())[0], -0.75);
  EXPECT_DOUBLE_EQ(g->position(g->inside_nodes()[3])[0], 0.0);
  EXPECT_DOUBLE_EQ(g->position(g->inside_nodes().back())[0], 0.75);
  EXPECT_EQ(g->ny(), 1);
}

TEST(Grid, BallMask) {
  const auto ball = ConvexDomain::ball(Point(0, 0), 1);
  const auto g = build_grid(ball, 0.25);
  for (int n = 0; n < static_cast<int>(g->size()); ++n) EXPECT_EQ(g->inside(n), g->position(n).norm() < 1.0);
  for (int n : g->inside_nodes()) EXPECT_GT(g->boundary_dist(n), 0.0);
}

TEST(Grid, Guards) {
  EXPECT_THROW(build_grid(square(), 1.0), std::invalid_argument);
  EXPECT_THROW(build_grid(square(), 0.0), std::invalid_argument);
  EXPECT_THROW(build_grid(square(), 0.5), std::invalid_argument);  // too few inside nodes
}

TEST(Grid, LocateSnaps) {
  const auto g = build_grid(square(), 0.125);
  const auto c = g->locate(Point(0.25, 0.5 + 1e-14));
  EXPECT_EQ(g->ix(c.base), 2);
  EXPECT_EQ(g->iy(c.base), 4);
  EXPECT_DOUBLE_EQ(c.fx, 0.0);
  EXPECT_DOUBLE_EQ(c.fy, 0.0);
}

TEST(Field, BilinearInterpolation) {
  const auto g = build_grid(square(), 0.125);
  const auto f = ScalarField::sample(g, [](const Point& x) { return 2 * x[0] - 3 * x[1] + 1; });
  EXPECT_NEAR(f.interpolate(Point(0.3, 0.71)), 2 * 0.3 - 3 * 0.71 + 1, 1e-14);
}

TEST(Ring, OneDimensionalExactSamples) {
  const auto g = build_grid(interval(), 0.125);
  const auto ring = build_ring(g, 0.25, 2);
  const int node = g->locate(Point(0, 0)).base;
  const RingSample* s = ring.samples(node);
  EXPECT_DOUBLE_EQ(std::abs(s[0].point[0]), 0.25);
  EXPECT_DOUBLE_EQ(std::abs(s[1].point[0]), 0.25);
  EXPECT_DOUBLE_EQ(s[0].cell.fx, 0.0);
  EXPECT_FALSE(s[0].on_boundary);
}

TEST(Ring, ClippedAtBoundary) {
  const auto g = build_grid(interval(), 0.05);
  const auto ring = build_ring(g, 0.25, 2);
  const int node = g->locate(Point(0.9, 0)).base;
  ASSERT_NEAR(g->position(node)[0], 0.9, 1e-12);
  const RingSample* s = ring.samples(node);
  const RingSample& right = s[0].point[0] > 0.9 ? s[0] : s[1];
  EXPECT_TRUE(right.on_boundary);
  EXPECT_NEAR(right.point[0], 1.0, 1e-9 * g->h());
}

TEST(Ring, BallCenterInterior) {
  const auto g = build_grid(ConvexDomain::ball(Point(0, 0), 1), 0.02);
  const auto ring = build_ring(g, 0.05, 16);
  const int node = g->locate(Point(0, 0)).base;
  const RingSample* s = ring.samples(node);
  for (int k = 0; k < 16; ++k) {
    EXPECT_FALSE(s[k].on_boundary);
    EXPECT_NEAR(s[k].point.norm(), 0.05, 1e-15);
  }
}

TEST(Ring, Guards) {
  const auto g = build_grid(square(), 0.05);
  EXPECT_THROW(build_ring(g, 0.09, 16), std::invalid_argument);  // eps < 2h
  EXPECT_THROW(build_ring(g, 0.15, 7), std::invalid_argument);
  EXPECT_THROW(build_ring(g, 0.15, 6), std::invalid_argument);
  EXPECT_THROW(build_ring(build_grid(interval(), 0.05), 0.15, 4), std::invalid_argument);
}

TEST(Ring, Directions) {
  const auto d = ring_directions(16);
  ASSERT_EQ(d.size(), 16u);
  for (int k = 0; k < 8; ++k) EXPECT_TRUE((d[k] + d[k + 8]).isZero(1e-15));
  EXPECT_EQ(d[4][0], 0.0);
}

TEST(Ring, Extrema) {
  const auto g = build_grid(interval(), 0.125);
  const auto ring = build_ring(g, 0.25, 2);
  const auto u = ScalarField::sample(g, half_parabola, true);
  const auto at0 = ring_extrema(u, ring, g->locate(Point(0, 0)).base);
  EXPECT_DOUBLE_EQ(at0.max, 0.46875);
  EXPECT_DOUBLE_EQ(at0.min, 0.46875);
  const auto at5 = ring_extrema(u, ring, g->locate(Point(0.5, 0)).base);
  EXPECT_DOUBLE_EQ(at5.max, 0.46875);
  EXPECT_DOUBLE_EQ(at5.min, 0.21875);

  const auto c = ScalarField(g, 0.7, false);
  const auto ec = ring_extrema(c, ring, g->inside_nodes()[2]);
  EXPECT_DOUBLE_EQ(ec.max, 0.7);
  EXPECT_DOUBLE_EQ(ec.min, 0.7);
}

TEST(FieldFile, HeaderAndRoundTrip) {
  const auto g = build_grid(square(), 0.1);
  const auto u = ScalarField::sample(g, [](const Point& x) { return std::sin(3 * x[0]) * std::exp(x[1]) / 7.0; }, true);
  std::ostringstream out;
  write_field(out, u);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "# grid nx=11 ny=11 h=0.10000000000000001 ox=0 oy=0");
  std::istringstream in(text);
  const auto file = read_field_file(in);
  ASSERT_EQ(file.values.size(), u.values().size());
  for (std::size_t k = 0; k < file.values.size(); ++k) EXPECT_EQ(file.values[k], u.values()[k]);
  EXPECT_EQ(file.spec.nx, 11);
  EXPECT_EQ(file.spec.h, 0.1);
}

TEST(FieldFile, RejectsMalformed) {
  std::istringstream bad("# grid nx=2 ny=1\n");
  EXPECT_THROW(read_field_file(bad), std::invalid_argument);
  std::istringstream empty("");
  EXPECT_THROW(read_field_file(empty), std::invalid_argument);
}
