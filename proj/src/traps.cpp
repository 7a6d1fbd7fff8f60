#include "polymer_traps/traps.hpp"

#include <cmath>
#include <numbers>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/spatial_hash.hpp"

namespace polymer_traps {

namespace {
constexpr double kMaxExpectedCount = 1e9;
}

Box Box::around(const Eigen::Ref<const Eigen::MatrixXd>& points, double margin) {
  if (points.cols() == 0) throw DomainError("Box::around: empty point set");
  Box box{points.rowwise().minCoeff(), points.rowwise().maxCoeff()};
  box.lower.array() -= margin;
  box.upper.array() += margin;
  return box;
}

double unit_ball_volume(int d) {
  const double half = 0.5 * static_cast<double>(d);
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

TrapField sample_traps(const Box& box, double nu, double a, RandomStream& stream) {
  if (!(nu > 0.0)) throw DomainError("sample_traps: intensity must be positive");
  if (!(a > 0.0)) throw DomainError("sample_traps: radius must be positive");
  if (box.lower.size() == 0 || box.lower.size() != box.upper.size() ||
      !((box.upper - box.lower).array() > 0.0).all())
    throw DomainError("sample_traps: degenerate box");
  const double mean = nu * box.volume();
  if (!(mean < kMaxExpectedCount)) throw DomainError("sample_traps: expected count overflows");

  // Count = number of unit-rate arrivals in [0, mean].
  Eigen::Index count = 0;
  for (double clock = stream.exponential(); clock <= mean; clock += stream.exponential()) ++count;

  TrapField field{box.dim(), nu, a, box, Eigen::MatrixXd(box.dim(), count)};
  const Eigen::VectorXd extent = box.upper - box.lower;
  for (Eigen::Index i = 0; i < count; ++i)
    for (int c = 0; c < field.d; ++c) field.points(c, i) = box.lower(c) + extent(c) * stream.uniform();
  return field;
}

bool is_killed(const Eigen::Ref<const Eigen::MatrixXd>& points, const TrapField& field) {
  if (points.rows() != field.d) throw DomainError("is_killed: dimension mismatch");
  if (points.cols() == 0) return false;
  const Eigen::VectorXd lo = points.rowwise().minCoeff().array() - field.a;
  const Eigen::VectorXd hi = points.rowwise().maxCoeff().array() + field.a;
  if (!field.box.contains(lo, hi))
    throw CoverageError("is_killed: trap box does not cover the path range enlarged by a");
  if (field.count() == 0) return false;
  const SpatialHash hash(field.points, field.a);
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    if (hash.any_within(points.col(i), field.a)) return true;
  return false;
}

bool is_killed(const StringPath& path, const TrapField& field) {
  return is_killed(path.values, field);
}

double survival_given_path_closed_form(double sausage_volume, double nu) {
  if (sausage_volume < 0.0) throw DomainError("survival: negative sausage volume");
  if (nu < 0.0) throw DomainError("survival: negative intensity");
  return std::exp(-nu * sausage_volume);
}

}  // namespace polymer_traps
