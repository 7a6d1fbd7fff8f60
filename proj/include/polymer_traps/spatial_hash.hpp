#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace polymer_traps {

/// Uniform-grid hash over a fixed point set (one point per column) for
/// fixed-radius queries. Cells are hypercubes of edge `cell`; a query of radius
/// <= cell only needs the 3^d cells around the query's own cell.
class SpatialHash {
 public:
  static constexpr int kMaxDim = 16;

  SpatialHash(const Eigen::MatrixXd& points, double cell);

  /// True iff some stored point lies within `radius` (<= cell) of `query`.
  bool any_within(const Eigen::Ref<const Eigen::VectorXd>& query, double radius) const;

  /// Calls fn(index) for every stored point in the 3^d cells around `query`.
  /// A point may be visited more than once when neighbouring cells share a bucket.
  template <typename Fn>
  void for_each_candidate(const Eigen::Ref<const Eigen::VectorXd>& query, Fn&& fn) const {
    visit_neighbours(query, [&](std::uint64_t bucket) {
      for (std::uint32_t k = starts_[bucket]; k < starts_[bucket + 1]; ++k) fn(entries_[k]);
    });
  }

  double cell() const { return cell_; }
  Eigen::Index size() const { return points_.cols(); }

 private:
  std::uint64_t bucket_of(const std::int64_t* coords) const;

  static std::int64_t cell_coord(double x, double cell) {
    return static_cast<std::int64_t>(std::floor(x / cell));
  }

  template <typename Fn>
  void visit_neighbours(const Eigen::Ref<const Eigen::VectorXd>& query, Fn&& fn) const {
    std::int64_t base[kMaxDim];
    std::int64_t coords[kMaxDim];
    int offset[kMaxDim];
    for (int c = 0; c < d_; ++c) {
      base[c] = cell_coord(query(c), cell_);
      offset[c] = -1;
    }
    while (true) {
      for (int c = 0; c < d_; ++c) coords[c] = base[c] + offset[c];
      fn(bucket_of(coords));
      int c = 0;
      while (c < d_ && offset[c] == 1) offset[c++] = -1;
      if (c == d_) break;
      ++offset[c];
    }
  }

  Eigen::MatrixXd points_;
  double cell_;
  int d_;
  std::uint64_t mask_;
  std::vector<std::uint32_t> starts_;
  std::vector<std::uint32_t> entries_;
};

}  // namespace polymer_traps
