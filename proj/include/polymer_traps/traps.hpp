#pragma once

#include <Eigen/Core>

#include "polymer_traps/random.hpp"
#include "polymer_traps/she_solver.hpp"

namespace polymer_traps {

/// Axis-aligned box [lower, upper] in R^d.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const { return (upper - lower).prod(); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& lo,
                const Eigen::Ref<const Eigen::VectorXd>& hi) const {
    return (lower.array() <= lo.array()).all() && (hi.array() <= upper.array()).all();
  }

  /// Tight box of the columns of `points`, enlarged by `margin` on every side.
  static Box around(const Eigen::Ref<const Eigen::MatrixXd>& points, double margin);
};

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Poisson configuration of hard traps of radius a inside `box`.
struct TrapField {
  int d = 1;
  double nu = 0.0;
  double a = 0.0;
  Box box;
  Eigen::MatrixXd points;  // d x count

  Eigen::Index count() const { return points.cols(); }
};

/// Poisson(nu vol(box)) many points, i.i.d. uniform in the box.
TrapField sample_traps(const Box& box, double nu, double a, RandomStream& stream);

/// True iff some sample u(s, y) is within distance a of some trap. Throws
/// CoverageError when the field's box does not contain range(points) enlarged by a.
bool is_killed(const Eigen::Ref<const Eigen::MatrixXd>& points, const TrapField& field);
bool is_killed(const StringPath& path, const TrapField& field);

/// exp(-nu * sausage_volume): survival of a fixed path among Poisson hard traps.
double survival_given_path_closed_form(double sausage_volume, double nu);

}  // namespace polymer_traps
