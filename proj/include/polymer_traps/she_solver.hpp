#pragma once

// Mild solution u(t, x) = (G_t * u0)(x) + N(t, x) of the additive-noise stochastic
// heat equation du = (1/2) u_xx dt + dW on the circle [0, J).

#include <iosfwd>
#include <optional>

#include <Eigen/Core>

#include "polymer_traps/initial_profile.hpp"
#include "polymer_traps/random.hpp"

namespace polymer_traps {

/// Field sampled on (n_t + 1) x n_x space-time nodes.
///
/// `values` stores u[t][x][coord] contiguously: column i * n_x + j holds u(t_i, x_j).
/// `noise`, when kept, has the same layout and holds the stochastic convolution N.
struct StringPath {
  int d = 1;
  double J = 1.0;
  double T = 1.0;
  Eigen::Index n_t = 0;
  Eigen::Index n_x = 0;
  Eigen::MatrixXd values;
  Eigen::MatrixXd noise;

  double dt() const { return T / static_cast<double>(n_t); }
  double dx() const { return J / static_cast<double>(n_x); }
  bool has_noise() const { return noise.size() > 0; }
  Eigen::Index column(Eigen::Index i, Eigen::Index j) const { return i * n_x + j; }
  auto at(Eigen::Index i, Eigen::Index j) const { return values.col(column(i, j)); }
  auto frame(Eigen::Index i) const { return values.middleCols(i * n_x, n_x); }
  auto noise_frame(Eigen::Index i) const { return noise.middleCols(i * n_x, n_x); }
  /// Frames 0..i_last inclusive.
  auto frames_through(Eigen::Index i_last) const { return values.leftCols((i_last + 1) * n_x); }
};

/// White-noise realization behind a spectral solve, kept in physical space.
///
/// For step s and coordinate c, columns s * d + c of `xi` and `rho` hold n_x
/// independent standard normals. `xi` is the cell-averaged noise; `rho` is the
/// within-step component that makes each Fourier mode's Ornstein-Uhlenbeck
/// transition exact. Both are white in space, so restricting them to a window
/// restricts the noise to that window.
struct NoiseRecord {
  int d = 1;
  double J = 1.0;
  double T = 1.0;
  Eigen::Index n_t = 0;
  Eigen::Index n_x = 0;
  Eigen::Index n_modes = 0;
  Eigen::MatrixXd xi;
  Eigen::MatrixXd rho;

  double dt() const { return T / static_cast<double>(n_t); }
  double dx() const { return J / static_cast<double>(n_x); }
};

struct SpectralOptions {
  /// Store N separately in StringPath::noise.
  bool keep_noise_part = false;
  /// When set, the noise is drawn in physical space and saved here.
  NoiseRecord* record = nullptr;
};

/// Exact-in-law spectral sampler: each retained Fourier mode of N is an
/// Ornstein-Uhlenbeck process with rate (1/2)(2 pi k / J)^2 advanced with its exact
/// Gaussian transition. n_modes < 0 selects the grid Nyquist n_x / 2.
StringPath solve_spectral(const InitialProfile& u0, double T, Eigen::Index n_t,
                          Eigen::Index n_modes, RandomStream& stream,
                          const SpectralOptions& options = {});

/// Explicit Euler-Maruyama finite differences (cross-check only); requires dt <= dx^2.
StringPath solve_fd(const InitialProfile& u0, double T, Eigen::Index n_t, Eigen::Index n_x,
                    RandomStream& stream, bool keep_noise_part = false);

/// N(t_i, x) for t_i = i T / n_t at one position, advancing the modes without
/// forming the whole field. Returns d x (n_t + 1).
Eigen::MatrixXd sample_noise_trace(int d, double J, double x, double T, Eigen::Index n_t,
                                   Eigen::Index n_modes, RandomStream& stream);

struct LocalizedConvolution {
  double center = 0.0;
  double half_width = 0.0;
  Eigen::Index node = 0;   // grid node used for the center
  Eigen::MatrixXd values;  // d x (n_t + 1), v(t_i)
};

/// v(t) = int_0^t int_{|y - center| <= half_width} G_{t-s}(center - y) W(ds dy) on the
/// time grid, from the recorded noise. center is evaluated at its nearest grid node.
LocalizedConvolution localized_convolution(const NoiseRecord& record, double center,
                                           double half_width);

struct FourTermDecomposition {
  Eigen::Index node = 0;
  Eigen::VectorXd anchor;            // X at kappa
  Eigen::MatrixXd localized;         // v(t)
  Eigen::MatrixXd smoothing_error;   // (G_t * X)(lambda) - X_kappa
  Eigen::MatrixXd truncation_error;  // N(t, lambda) - v(t)
  Eigen::MatrixXd u;                 // u(t, lambda) from the path

  Eigen::MatrixXd sum() const;
};

/// Splits u(t, lambda) into anchor + localized convolution + smoothing error +
/// window truncation error on one noise realization.
FourTermDecomposition decompose_at(const StringPath& path, const InitialProfile& profile,
                                   const NoiseRecord& record, double lambda, double kappa,
                                   double half_width);

/// Binary dump: d, J, T, n_t, n_x as little-endian 64-bit words (d, n_t, n_x unsigned,
/// J and T IEEE-754 doubles), then the doubles u[t][x][coord].
void write_string_path(std::ostream& out, const StringPath& path);
StringPath read_string_path(std::istream& in);

}  // namespace polymer_traps
