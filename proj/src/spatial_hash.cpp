#include "polymer_traps/spatial_hash.hpp"

#include <bit>
#include <cmath>

#include "polymer_traps/errors.hpp"

namespace polymer_traps {

SpatialHash::SpatialHash(const Eigen::MatrixXd& points, double cell)
    : points_(points), cell_(cell), d_(static_cast<int>(points.rows())) {
  if (!(cell > 0.0)) throw DomainError("SpatialHash: cell size must be positive");
  if (d_ < 1 || d_ > kMaxDim) throw ConfigurationError("SpatialHash: unsupported dimension");
  const auto n = static_cast<std::uint64_t>(points.cols());
  const std::uint64_t buckets = std::bit_ceil(std::max<std::uint64_t>(2 * n, 16));
  mask_ = buckets - 1;
  starts_.assign(buckets + 1, 0);
  entries_.resize(n);

  std::vector<std::uint64_t> bucket_of_point(n);
  std::int64_t coords[kMaxDim];
  for (std::uint64_t i = 0; i < n; ++i) {
    for (int c = 0; c < d_; ++c) coords[c] = cell_coord(points(c, static_cast<Eigen::Index>(i)), cell_);
    bucket_of_point[i] = bucket_of(coords);
    ++starts_[bucket_of_point[i] + 1];
  }
  for (std::uint64_t b = 0; b < buckets; ++b) starts_[b + 1] += starts_[b];
  std::vector<std::uint32_t> fill(starts_.begin(), starts_.end() - 1);
  for (std::uint64_t i = 0; i < n; ++i) entries_[fill[bucket_of_point[i]]++] = static_cast<std::uint32_t>(i);
}

std::uint64_t SpatialHash::bucket_of(const std::int64_t* coords) const {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (int c = 0; c < d_; ++c) {
    h ^= static_cast<std::uint64_t>(coords[c]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
  }
  h ^= h >> 31;
  return h & mask_;
}

bool SpatialHash::any_within(const Eigen::Ref<const Eigen::VectorXd>& query, double radius) const {
  const double r2 = radius * radius;
  bool found = false;
  visit_neighbours(query, [&](std::uint64_t bucket) {
    if (found) return;
    for (std::uint32_t k = starts_[bucket]; k < starts_[bucket + 1]; ++k) {
      if ((points_.col(entries_[k]) - query).squaredNorm() <= r2) {
        found = true;
        return;
      }
    }
  });
  return found;
}

}  // namespace polymer_traps
