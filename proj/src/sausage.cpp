#include "polymer_traps/sausage.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/spatial_hash.hpp"

namespace polymer_traps {

namespace {

constexpr double kMaxVoxelBits = 0x1.0p34;

// Dense bitmap over the voxel grid; rows run along the last axis.
class VoxelBitmap {
 public:
  VoxelBitmap(const Eigen::VectorXd& origin, const std::vector<std::int64_t>& dims, double h)
      : origin_(origin), dims_(dims), h_(h), d_(static_cast<int>(dims.size())) {
    words_per_row_ = (dims_.back() + 63) / 64;
    std::int64_t rows = 1;
    for (int c = 0; c + 1 < d_; ++c) rows *= dims_[c];
    bits_.assign(static_cast<std::size_t>(rows * words_per_row_), 0);
  }

  void add_ball(const double* p, double r) {
    const double r2 = r * r;
    std::vector<std::int64_t> lo(d_), hi(d_), idx(d_);
    for (int c = 0; c < d_; ++c) {
      lo[c] = std::max<std::int64_t>(0, first_index(p[c] - r, c));
      hi[c] = std::min<std::int64_t>(dims_[c] - 1, last_index(p[c] + r, c));
      if (lo[c] > hi[c]) return;
    }
    const int last = d_ - 1;
    for (int c = 0; c < last; ++c) idx[c] = lo[c];
    while (true) {
      double partial = 0.0;
      std::int64_t row = 0;
      for (int c = 0; c < last; ++c) {
        const double diff = center(idx[c], c) - p[c];
        partial += diff * diff;
        row = row * dims_[c] + idx[c];
      }
      if (partial <= r2) {
        const double reach = std::sqrt(r2 - partial);
        const std::int64_t a = std::max<std::int64_t>(0, first_index(p[last] - reach, last));
        const std::int64_t b = std::min<std::int64_t>(dims_[last] - 1, last_index(p[last] + reach, last));
        if (a <= b) set_span(row, a, b);
      }
      int c = last - 1;
      while (c >= 0 && idx[c] == hi[c]) {
        idx[c] = lo[c];
        --c;
      }
      if (c < 0) break;
      ++idx[c];
    }
  }

  std::int64_t count() const {
    std::int64_t n = 0;
    for (std::uint64_t w : bits_) n += std::popcount(w);
    return n;
  }

 private:
  double center(std::int64_t i, int c) const { return origin_(c) + (static_cast<double>(i) + 0.5) * h_; }
  // Smallest voxel index whose centre is >= x, largest whose centre is <= x.
  std::int64_t first_index(double x, int c) const {
    return static_cast<std::int64_t>(std::ceil((x - origin_(c)) / h_ - 0.5));
  }
  std::int64_t last_index(double x, int c) const {
    return static_cast<std::int64_t>(std::floor((x - origin_(c)) / h_ - 0.5));
  }

  void set_span(std::int64_t row, std::int64_t a, std::int64_t b) {
    std::uint64_t* words = bits_.data() + row * words_per_row_;
    const std::int64_t wa = a >> 6, wb = b >> 6;
    const std::uint64_t head = ~std::uint64_t{0} << (a & 63);
    const std::uint64_t tail = ~std::uint64_t{0} >> (63 - (b & 63));
    if (wa == wb) {
      words[wa] |= head & tail;
      return;
    }
    words[wa] |= head;
    for (std::int64_t w = wa + 1; w < wb; ++w) words[w] = ~std::uint64_t{0};
    words[wb] |= tail;
  }

  Eigen::VectorXd origin_;
  std::vector<std::int64_t> dims_;
  double h_;
  int d_;
  std::int64_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace

const char* to_string(SausageMethod method) {
  return method == SausageMethod::kVoxel ? "voxel" : "hit_or_miss";
}

SausageEstimate sausage_volume_voxel(const Eigen::Ref<const Eigen::MatrixXd>& points, double r,
                                     double h) {
  if (points.cols() == 0) throw DomainError("sausage_volume_voxel: empty point set");
  if (!(r > 0.0)) throw DomainError("sausage_volume_voxel: radius must be positive");
  if (!(h > 0.0) || h > r / 4.0 * (1.0 + 1e-12))
    throw ConfigurationError("sausage_volume_voxel: voxel edge must satisfy 0 < h <= r/4");
  const int d = static_cast<int>(points.rows());
  const Eigen::VectorXd lo = points.rowwise().minCoeff();
  const Eigen::VectorXd hi = points.rowwise().maxCoeff();
  const Eigen::VectorXd origin = lo.array() - r;
  std::vector<std::int64_t> dims(d);
  double bits = 1.0;
  for (int c = 0; c < d; ++c) {
    const double extent = hi(c) - lo(c) + 2.0 * r;
    dims[c] = static_cast<std::int64_t>(std::ceil(extent / h)) + 1;
    bits *= static_cast<double>(dims[c]);
  }
  if (bits > kMaxVoxelBits)
    throw ConfigurationError("sausage_volume_voxel: voxel grid too large, use hit-or-miss");

  VoxelBitmap bitmap(origin, dims, h);
  const double* data = points.data();
  const Eigen::Index stride = points.outerStride();
  const double* previous = nullptr;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double* p = data + i * stride;
    // Repeated samples (pinned ends, frozen paths) add nothing.
    if (previous != nullptr && std::equal(p, p + d, previous)) continue;
    bitmap.add_ball(p, r);
    previous = p;
  }
  SausageEstimate est;
  est.volume = static_cast<double>(bitmap.count()) * std::pow(h, d);
  est.method = SausageMethod::kVoxel;
  est.resolution = h;
  return est;
}

SausageEstimate sausage_volume_hit_or_miss(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                           double r, Eigen::Index m, RandomStream& stream) {
  if (points.cols() == 0) throw DomainError("sausage_volume_hit_or_miss: empty point set");
  if (!(r > 0.0)) throw DomainError("sausage_volume_hit_or_miss: radius must be positive");
  if (m < 1000) throw ConfigurationError("sausage_volume_hit_or_miss: need at least 1000 samples");
  const int d = static_cast<int>(points.rows());
  const Eigen::MatrixXd owned = points;
  const Eigen::VectorXd lo = owned.rowwise().minCoeff().array() - r;
  const Eigen::VectorXd extent = (owned.rowwise().maxCoeff().array() + r) - lo.array();
  const double box_volume = extent.prod();
  const SpatialHash hash(owned, r);
  Eigen::VectorXd q(d);
  Eigen::Index hits = 0;
  for (Eigen::Index s = 0; s < m; ++s) {
    for (int c = 0; c < d; ++c) q(c) = lo(c) + extent(c) * stream.uniform();
    if (hash.any_within(q, r)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(m);
  SausageEstimate est;
  est.volume = box_volume * p;
  est.standard_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(m));
  est.method = SausageMethod::kHitOrMiss;
  est.resolution = static_cast<double>(m);
  return est;
}

SausageEstimate bridge_sausage_volume(const InitialProfile& profile, double Lambda, double alpha,
                                      double h) {
  if (!(Lambda >= 1.0)) throw DomainError("bridge_sausage_volume: Lambda must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("bridge_sausage_volume: alpha must lie in (0, 1]");
  if (h <= 0.0) h = default_voxel_edge(Lambda);
  const double limit = alpha * profile.J * (1.0 + 1e-12);
  Eigen::Index count = 0;
  while (count <= profile.n_x() && profile.position(count) <= limit) ++count;
  return sausage_volume_voxel(profile.values.leftCols(count), Lambda, h);
}

}  // namespace polymer_traps
