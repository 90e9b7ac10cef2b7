#pragma once

// The set-valued map x -> B_eps(x) ∩ X on sampled surrogates, the
// Pompeiu-Hausdorff distance between point clouds, and peacefulness estimates.

#include <cstdint>
#include <string>
#include <vector>

#include "robreg/common.hpp"
#include "robreg/domain.hpp"
#include "robreg/parallel.hpp"

namespace robreg::geom {

struct PointCloud {
  std::vector<Vec> points;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::string provenance;

  std::size_t size() const { return points.size(); }
};

/// Points of B_eps(x) ∩ X. Sample i comes from RNG stream (seed, i), so clouds
/// drawn at nearby centers with the same seed are congruent where the set
/// allows it. x itself is included when it lies in X. Per class:
///  - FullSpace, Ball, DyadicEpigraph: rejection sampling of the ball (the
///    epigraph also gets graph points);
///  - Box, Polytope: rejection sampling plus samples projected onto the nearest facet;
///  - AffineSet: uniform in the lower-dimensional ball B_eps(x) ∩ X;
///  - SmoothEquality: ball samples pulled onto the set by Gauss-Newton;
///  - Union: concatenation of the member clouds.
/// Throws NumericalError when no point is found.
PointCloud sample_ball_intersection(const DomainModel& X, const Vec& x, double eps, std::size_t n, std::uint64_t seed);

/// max of both directed max-min distances. Throws ConfigError on an empty cloud.
double hausdorff_distance(const PointCloud& C, const PointCloud& D, Exec exec = default_exec());
double directed_distance(const PointCloud& C, const PointCloud& D, Exec exec = default_exec());

struct SetmapConfig {
  std::size_t pairs = 48;
  std::size_t cloud_size = 400;
  double neighborhood = 0.25;  // pair centers within neighborhood * eps of x̄
  std::uint64_t seed = 1;
};

struct SetmapEstimate {
  double eps = 0.0;
  double value = 0.0;  // max sampled d(Phi(x), Phi(x')) / |x - x'|
  std::size_t pairs = 0;
  std::size_t min_cloud = 0;  // smallest cloud size seen, the resolution caveat
};

/// Lipschitz estimate of x -> B_eps(x) ∩ X near x̄ from matched-seed clouds.
SetmapEstimate setmap_lip_estimate(const DomainModel& X, const Vec& xbar, double eps, const SetmapConfig& cfg,
                                   Exec exec = default_exec());

struct PeacefulProfile {
  std::vector<SetmapEstimate> rows;  // in grid order
  double threshold = 0.05;
  bool one_peaceful = false;  // the two smallest-eps estimates are <= 1 + threshold
};

PeacefulProfile peaceful_profile(const DomainModel& X, const Vec& xbar, const std::vector<double>& eps_grid,
                                 const SetmapConfig& cfg, double threshold = 0.05, Exec exec = default_exec());

}  // namespace robreg::geom
