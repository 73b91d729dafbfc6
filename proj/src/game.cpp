#include "ninf/game.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "parallel.hpp"

namespace ninf {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

struct Trajectory {
  double payoff = 0.0;
  long steps = 0;
  bool exited = false;
};

class Mover {
 public:
  Mover(const ConvexDomain& domain, const GameConfig& cfg, const ScalarField* guide)
      : domain_(domain), eps_(cfg.eps), strategy_(cfg.strategy), guide_(guide),
        dirs_(ring_directions(domain.dimension() == 1 ? 2 : cfg.m)), centroid_(domain.centroid()) {
    targets_.resize(dirs_.size());
    exits_.resize(dirs_.size());
    scores_.resize(dirs_.size());
  }

  // Moves x in place; returns true when the token lands on the boundary.
  bool step(Point& x, bool maximize, std::mt19937_64& rng) {
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
      const auto hit = domain_.ray_exit(x, dirs_[k], eps_);
      exits_[k] = hit.has_value();
      targets_[k] = x + (hit ? *hit : eps_) * dirs_[k];
      scores_[k] = score(targets_[k], exits_[k]);
    }
    double best = maximize ? -INFINITY : INFINITY;
    for (double s : scores_) best = maximize ? std::max(best, s) : std::min(best, s);
    const double slack = 1e-12 * std::max(1.0, std::abs(best));
    ties_.clear();
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
      if (std::abs(scores_[k] - best) <= slack) ties_.push_back(k);
    }
    const std::size_t pick = ties_.size() == 1 ? ties_[0] : ties_[rng() % ties_.size()];
    x = targets_[pick];
    return exits_[pick];
  }

 private:
  double score(const Point& y, bool on_boundary) const {
    if (strategy_ == Strategy::radial) return -(y - centroid_).norm();
    if (on_boundary && guide_->dirichlet_zero()) return 0.0;
    return guide_->interpolate(y);
  }

  const ConvexDomain& domain_;
  double eps_;
  Strategy strategy_;
  const ScalarField* guide_;
  std::vector<Eigen::Vector2d> dirs_;
  Point centroid_;
  std::vector<Point> targets_;
  std::vector<char> exits_;
  std::vector<double> scores_;
  std::vector<std::size_t> ties_;
};

}  // namespace

GameResult play(const ConvexDomain& domain, const Point& start, const SourceTerm& f, const GameConfig& cfg,
                const ScalarField* guide) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("game eps must be positive");
  if (cfg.trials < 1) throw std::invalid_argument("game needs at least one trial");
  if (cfg.max_steps < 0) throw std::invalid_argument("max_steps must be positive");
  if (cfg.strategy == Strategy::greedy_on_field && guide == nullptr)
    throw std::invalid_argument("greedy strategy needs a guide field");
  const double sd = domain.signed_distance(start);
  if (sd > 1e-12 * domain.diameter()) throw std::invalid_argument("start point lies outside the domain");

  GameResult result;
  result.trials = cfg.trials;
  if (!domain.contains(start)) return result;

  const double ratio = domain.diameter() / cfg.eps;
  const long max_steps = cfg.max_steps > 0 ? cfg.max_steps : static_cast<long>(std::ceil(50.0 * ratio * ratio));
  const double step_weight = 0.5 * cfg.eps * cfg.eps;

  std::vector<Trajectory> runs(static_cast<std::size_t>(cfg.trials));
  detail::parallel_chunks(runs.size(), cfg.threads, [&](std::size_t begin, std::size_t end, int) {
    Mover mover(domain, cfg, guide);
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(i)));
      Trajectory& t = runs[i];
      Point x = start;
      while (t.steps < max_steps) {
        t.payoff += step_weight * f.at(x);
        ++t.steps;
        const bool heads = (rng() >> 63) != 0;
        if (mover.step(x, heads, rng)) {
          t.exited = true;
          break;
        }
      }
    }
  });

  double sum = 0.0;
  double steps = 0.0;
  long exited = 0;
  for (const auto& t : runs) {
    sum += t.payoff;
    steps += static_cast<double>(t.steps);
    exited += t.exited ? 1 : 0;
  }
  const double n = static_cast<double>(runs.size());
  result.mean_payoff = sum / n;
  double sq = 0.0;
  for (const auto& t : runs) sq += (t.payoff - result.mean_payoff) * (t.payoff - result.mean_payoff);
  result.std_error = runs.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
  result.exit_rate = static_cast<double>(exited) / n;
  result.mean_steps = steps / n;
  return result;
}

ChainValues chain_value_1d(double R, double eps, double f) {
  if (!(R > 0.0) || !(eps > 0.0)) throw std::invalid_argument("chain needs R > 0 and eps > 0");
  const double q = R / eps;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-9 * std::max(1.0, q) || n < 1.0) throw std::invalid_argument("R/eps must be an integer");
  if (n > 1e4) throw std::invalid_argument("R/eps must not exceed 1e4");
  const int half = static_cast<int>(n);
  const int count = 2 * half + 1;
  ChainValues out;
  out.x.resize(count);
  out.u = Eigen::VectorXd::Zero(count);
  for (int k = 0; k < count; ++k) out.x[k] = -R + k * eps;

  // Interior unknowns k = 1..count-2: -u[k-1]/2 + u[k] - u[k+1]/2 = eps^2 f / 2 (Thomas algorithm).
  const int unknowns = count - 2;
  if (unknowns <= 0) return out;
  std::vector<double> c(static_cast<std::size_t>(unknowns));
  std::vector<double> d(static_cast<std::size_t>(unknowns));
  const double rhs = 0.5 * eps * eps * f;
  double denom = 1.0;
  c[0] = -0.5 / denom;
  d[0] = rhs / denom;
  for (int i = 1; i < unknowns; ++i) {
    denom = 1.0 + 0.5 * c[static_cast<std::size_t>(i - 1)];
    c[static_cast<std::size_t>(i)] = -0.5 / denom;
    d[static_cast<std::size_t>(i)] = (rhs + 0.5 * d[static_cast<std::size_t>(i - 1)]) / denom;
  }
  out.u[unknowns] = d[static_cast<std::size_t>(unknowns - 1)];
  for (int i = unknowns - 2; i >= 0; --i)
    out.u[i + 1] = d[static_cast<std::size_t>(i)] - c[static_cast<std::size_t>(i)] * out.u[i + 2];
  return out;
}

}  // namespace ninf
