#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "ninf/discretization.hpp"
#include "ninf/solver.hpp"

namespace ninf {

enum class Strategy {
  greedy_on_field,  // players push the token to the ring point with the largest / smallest guide value
  radial,           // towards / away from the domain centroid
};

struct GameConfig {
  double eps = 0.05;
  long trials = 10000;
  std::uint64_t seed = 0;
  long max_steps = 0;  // 0 selects 50 (diam/eps)^2
  Strategy strategy = Strategy::greedy_on_field;
  int m = 16;          // move directions in 2D; 1D always uses 2
  int threads = 1;
};

struct GameResult {
  double mean_payoff = 0.0;
  double std_error = 0.0;
  double exit_rate = 1.0;
  long trials = 0;
  double mean_steps = 0.0;

  /// Trajectories cut off at max_steps contribute their truncated payoff.
  bool non_exit() const { return exit_rate < 1.0; }
};

/// Monte Carlo value of the eps-tug-of-war with running payoff eps^2/2 f.
/// Each step a fair coin picks the player; the winner moves the token to one
/// of the ring points (clipped at the boundary) chosen greedily on `guide`.
/// Ties are broken uniformly at random. Trajectory i draws from its own
/// stream seeded with splitmix64(seed ^ i), so results do not depend on the
/// thread count.
GameResult play(const ConvexDomain& domain, const Point& start, const SourceTerm& f, const GameConfig& cfg,
                const ScalarField* guide = nullptr);

struct ChainValues {
  Eigen::VectorXd x;  // -R, -R + eps, ..., R
  Eigen::VectorXd u;
};

/// Exact solution of u(x) = (u(x - eps) + u(x + eps))/2 + eps^2 f/2 on the
/// lattice -R + k eps with u(+-R) = 0, by a tridiagonal solve.
/// Rejects R/eps that is not an integer or exceeds 1e4.
ChainValues chain_value_1d(double R, double eps, double f);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ninf
