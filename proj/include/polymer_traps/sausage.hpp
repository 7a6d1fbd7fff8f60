#pragma once

#include <Eigen/Core>

#include "polymer_traps/initial_profile.hpp"
#include "polymer_traps/random.hpp"

namespace polymer_traps {

enum class SausageMethod { kVoxel, kHitOrMiss };

const char* to_string(SausageMethod method);

/// Volume of the union of radius-r balls around a point set.
struct SausageEstimate {
  double volume = 0.0;
  double standard_error = 0.0;  // zero for the deterministic voxel count
  SausageMethod method = SausageMethod::kVoxel;
  double resolution = 0.0;      // voxel edge h, or the sample count m
};

/// Default voxel edge for radius r: r / 16.
inline double default_voxel_edge(double r) { return r / 16.0; }

/// Counts voxels of edge h whose centre lies within r of some column of `points`.
/// Balls are rasterised span by span along the last axis into a bitmap over the
/// r-enlarged bounding box. Requires h <= r / 4.
SausageEstimate sausage_volume_voxel(const Eigen::Ref<const Eigen::MatrixXd>& points, double r,
                                     double h);

/// Hit-or-miss Monte Carlo over the r-enlarged bounding box; m >= 1000 samples.
SausageEstimate sausage_volume_hit_or_miss(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                           double r, Eigen::Index m, RandomStream& stream);

/// Voxel volume of the radius-Lambda sausage around {X_x : 0 <= x <= alpha J}.
/// h <= 0 selects default_voxel_edge(Lambda).
SausageEstimate bridge_sausage_volume(const InitialProfile& profile, double Lambda, double alpha,
                                      double h = 0.0);

}  // namespace polymer_traps
