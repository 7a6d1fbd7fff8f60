#include "polymer_traps/she_solver.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/fft.hpp"
#include "polymer_traps/heat_kernel.hpp"

namespace polymer_traps {

namespace {

using Complex = std::complex<double>;

// Per-mode constants of the exact OU step of length dt with rate lambda:
//   I = int e^{-lambda (dt - s)} dbeta(s) = c1 * dW + c2 * R,
// dW ~ N(0, dt) the step increment and R ~ N(0, 1) independent of it.
struct ModeStep {
  double decay = 1.0;
  double c1 = 1.0;
  double c2 = 0.0;
  double innovation_sd = 0.0;  // sqrt(Var I)
};

// (1 - e^{-2x}) / (2x) - ((1 - e^{-x}) / x)^2 without cancellation.
double residual_fraction(double x) {
  if (x < 1e-2) {
    const double x2 = x * x;
    return x2 / 12.0 - x2 * x / 12.0 + 17.0 * x2 * x2 / 360.0 - 7.0 * x2 * x2 * x / 360.0;
  }
  const double c1 = -std::expm1(-x) / x;
  return -std::expm1(-2.0 * x) / (2.0 * x) - c1 * c1;
}

ModeStep mode_step(double lambda, double dt) {
  ModeStep m;
  const double x = lambda * dt;
  if (x == 0.0) {
    m.innovation_sd = std::sqrt(dt);
    return m;
  }
  m.decay = std::exp(-x);
  m.c1 = -std::expm1(-x) / x;
  m.c2 = std::sqrt(dt * std::max(residual_fraction(x), 0.0));
  m.innovation_sd = std::sqrt(dt * (-std::expm1(-2.0 * x) / (2.0 * x)));
  return m;
}

bool real_mode(Eigen::Index k, Eigen::Index n) { return k == 0 || (n % 2 == 0 && 2 * k == n); }

// Standard complex Gaussian with E|z|^2 = 1, or a real N(0, 1) for self-conjugate modes.
Complex unit_mode_normal(RandomStream& stream, bool is_real) {
  if (is_real) return {stream.normal(), 0.0};
  const double a = stream.normal();
  const double b = stream.normal();
  return {a * M_SQRT1_2, b * M_SQRT1_2};
}

std::vector<ModeStep> mode_steps(double J, double dt, Eigen::Index half, Eigen::Index n_modes) {
  std::vector<ModeStep> steps(static_cast<std::size_t>(half));
  for (Eigen::Index k = 0; k < half; ++k) {
    if (k > n_modes) {
      steps[static_cast<std::size_t>(k)] = ModeStep{0.0, 0.0, 0.0, 0.0};
      continue;
    }
    steps[static_cast<std::size_t>(k)] = mode_step(mode_rate(k, J), dt);
  }
  return steps;
}

}  // namespace

StringPath solve_spectral(const InitialProfile& u0, double T, Eigen::Index n_t,
                          Eigen::Index n_modes, RandomStream& stream,
                          const SpectralOptions& options) {
  const Eigen::Index n = u0.n_x();
  const int d = u0.d;
  if (n < 8) throw ConfigurationError("solve_spectral: n_x must be >= 8");
  if (n_t < 1) throw ConfigurationError("solve_spectral: n_t must be >= 1");
  if (!(T > 0.0)) throw DomainError("solve_spectral: T must be positive");
  if (n_modes < 0) n_modes = n / 2;
  if (n_modes > n / 2) throw ConfigurationError("solve_spectral: n_modes exceeds n_x / 2");

  const double J = u0.J;
  const double dt = T / static_cast<double>(n_t);
  RealFft<double> fft(n);
  const Eigen::Index half = fft.half_size();
  const auto steps = mode_steps(J, dt, half, n_modes);

  StringPath path{d, J, T, n_t, n, Eigen::MatrixXd(d, (n_t + 1) * n), Eigen::MatrixXd()};
  path.values.leftCols(n) = u0.periodic_values();
  if (options.keep_noise_part) path.noise = Eigen::MatrixXd::Zero(d, (n_t + 1) * n);

  NoiseRecord* record = options.record;
  if (record != nullptr) {
    *record = NoiseRecord{d, J, T, n_t, n, n_modes, Eigen::MatrixXd(n, n_t * d),
                          Eigen::MatrixXd(n, n_t * d)};
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const double dw_scale = std::sqrt(dt / J * inv_n);
  const double r_scale = std::sqrt(1.0 / J * inv_n);
  const double mode_scale = std::sqrt(1.0 / J);

  std::vector<double> row(static_cast<std::size_t>(n));
  std::vector<double> rho_row(static_cast<std::size_t>(n));
  std::vector<Complex> xi_hat(static_cast<std::size_t>(half));
  std::vector<Complex> rho_hat(static_cast<std::size_t>(half));
  std::vector<Complex> buffer(static_cast<std::size_t>(half));
  std::vector<std::vector<Complex>> profile_hat(static_cast<std::size_t>(d));
  std::vector<std::vector<Complex>> noise_hat(static_cast<std::size_t>(d),
                                              std::vector<Complex>(static_cast<std::size_t>(half)));

  for (int c = 0; c < d; ++c) {
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = u0.values(c, j);
    profile_hat[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(half));
    fft.forward(row, profile_hat[static_cast<std::size_t>(c)]);
    for (auto& v : profile_hat[static_cast<std::size_t>(c)]) v *= inv_n;
  }

  for (Eigen::Index s = 0; s < n_t; ++s) {
    const double t_next = dt * static_cast<double>(s + 1);
    for (int c = 0; c < d; ++c) {
      auto& modes = noise_hat[static_cast<std::size_t>(c)];
      if (record != nullptr) {
        auto xi_col = record->xi.col(s * d + c);
        auto rho_col = record->rho.col(s * d + c);
        for (Eigen::Index j = 0; j < n; ++j) {
          xi_col(j) = stream.normal();
          row[static_cast<std::size_t>(j)] = xi_col(j);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          rho_col(j) = stream.normal();
          rho_row[static_cast<std::size_t>(j)] = rho_col(j);
        }
        fft.forward(row, xi_hat);
        fft.forward(rho_row, rho_hat);
        for (Eigen::Index k = 0; k < half; ++k) {
          const auto& m = steps[static_cast<std::size_t>(k)];
          const auto ku = static_cast<std::size_t>(k);
          modes[ku] = m.decay * modes[ku] + m.c1 * dw_scale * xi_hat[ku] + m.c2 * r_scale * rho_hat[ku];
        }
      } else {
        for (Eigen::Index k = 0; k < half; ++k) {
          const auto& m = steps[static_cast<std::size_t>(k)];
          if (m.innovation_sd == 0.0) continue;
          const auto ku = static_cast<std::size_t>(k);
          modes[ku] = m.decay * modes[ku] +
                      (m.innovation_sd * mode_scale) * unit_mode_normal(stream, real_mode(k, n));
        }
      }

      for (Eigen::Index k = 0; k < half; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        buffer[ku] = profile_hat[static_cast<std::size_t>(c)][ku] * std::exp(-mode_rate(k, J) * t_next) +
                     modes[ku];
      }
      fft.inverse(buffer, row);
      const Eigen::Index base = (s + 1) * n;
      for (Eigen::Index j = 0; j < n; ++j) path.values(c, base + j) = row[static_cast<std::size_t>(j)];
      if (options.keep_noise_part) {
        fft.inverse(modes, row);
        for (Eigen::Index j = 0; j < n; ++j) path.noise(c, base + j) = row[static_cast<std::size_t>(j)];
      }
    }
  }
  return path;
}

StringPath solve_fd(const InitialProfile& u0, double T, Eigen::Index n_t, Eigen::Index n_x,
                    RandomStream& stream, bool keep_noise_part) {
  if (u0.n_x() != n_x) throw ConfigurationError("solve_fd: profile grid does not match n_x");
  if (n_x < 8) throw ConfigurationError("solve_fd: n_x must be >= 8");
  if (n_t < 1) throw ConfigurationError("solve_fd: n_t must be >= 1");
  const double dt = T / static_cast<double>(n_t);
  const double dx = u0.J / static_cast<double>(n_x);
  if (dt > dx * dx * (1.0 + 1e-12))
    throw ConfigurationError("solve_fd: explicit scheme needs dt <= dx^2");

  const int d = u0.d;
  const Eigen::Index n = n_x;
  StringPath path{d, u0.J, T, n_t, n, Eigen::MatrixXd(d, (n_t + 1) * n), Eigen::MatrixXd()};
  if (keep_noise_part) path.noise = Eigen::MatrixXd::Zero(d, (n_t + 1) * n);

  Eigen::MatrixXd heat = u0.periodic_values();
  Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(d, n);
  Eigen::MatrixXd next(d, n);
  Eigen::MatrixXd next_noise(d, n);
  path.values.leftCols(n) = heat;
  const double diffusion = 0.5 * dt / (dx * dx);
  const double noise_scale = std::sqrt(dt / dx);

  for (Eigen::Index s = 0; s < n_t; ++s) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index jl = (j == 0) ? n - 1 : j - 1;
      const Eigen::Index jr = (j + 1 == n) ? 0 : j + 1;
      next.col(j) = heat.col(j) + diffusion * (heat.col(jr) - 2.0 * heat.col(j) + heat.col(jl));
      next_noise.col(j) = noise.col(j) + diffusion * (noise.col(jr) - 2.0 * noise.col(j) + noise.col(jl));
      for (int c = 0; c < d; ++c) next_noise(c, j) += noise_scale * stream.normal();
    }
    heat.swap(next);
    noise.swap(next_noise);
    path.values.middleCols((s + 1) * n, n) = heat + noise;
    if (keep_noise_part) path.noise.middleCols((s + 1) * n, n) = noise;
  }
  return path;
}

Eigen::MatrixXd sample_noise_trace(int d, double J, double x, double T, Eigen::Index n_t,
                                   Eigen::Index n_modes, RandomStream& stream) {
  if (d < 1) throw DomainError("sample_noise_trace: d must be >= 1");
  if (!(J > 0.0) || !(T > 0.0)) throw DomainError("sample_noise_trace: J and T must be positive");
  if (n_t < 1 || n_modes < 0) throw ConfigurationError("sample_noise_trace: bad discretization");
  const double dt = T / static_cast<double>(n_t);
  const double mode_scale = std::sqrt(1.0 / J);
  std::vector<ModeStep> steps(static_cast<std::size_t>(n_modes + 1));
  std::vector<Complex> phase(steps.size());
  for (Eigen::Index k = 0; k <= n_modes; ++k) {
    steps[static_cast<std::size_t>(k)] = mode_step(mode_rate(k, J), dt);
    const double theta = 2.0 * M_PI * static_cast<double>(k) * x / J;
    phase[static_cast<std::size_t>(k)] = {std::cos(theta), std::sin(theta)};
  }
  Eigen::MatrixXd trace = Eigen::MatrixXd::Zero(d, n_t + 1);
  std::vector<Complex> modes(steps.size());
  for (int c = 0; c < d; ++c) {
    std::fill(modes.begin(), modes.end(), Complex{});
    for (Eigen::Index s = 1; s <= n_t; ++s) {
      double value = 0.0;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& m = steps[k];
        modes[k] = m.decay * modes[k] + (m.innovation_sd * mode_scale) * unit_mode_normal(stream, k == 0);
        value += (k == 0) ? modes[k].real() : 2.0 * (modes[k] * phase[k]).real();
      }
      trace(c, s) = value;
    }
  }
  return trace;
}

LocalizedConvolution localized_convolution(const NoiseRecord& record, double center,
                                           double half_width) {
  const double J = record.J;
  const double tol = 1e-12 * J;
  if (!(half_width > 0.0)) throw DomainError("localized_convolution: half-width must be positive");
  if (center - half_width < -tol || center + half_width > J + tol)
    throw DomainError("localized_convolution: window exceeds the circle");
  const Eigen::Index n = record.n_x;
  const Eigen::Index n_t = record.n_t;
  const int d = record.d;
  const double dx = record.dx();
  const double dt = record.dt();
  const bool full = 2.0 * half_width >= J - tol;

  LocalizedConvolution out;
  out.center = center;
  out.half_width = half_width;
  out.node = static_cast<Eigen::Index>(std::llround(center / dx)) % n;
  out.values = Eigen::MatrixXd::Zero(d, n_t + 1);

  std::vector<Eigen::Index> window;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double y = dx * static_cast<double>(j);
    const bool inside = full || (std::abs(y - center) <= half_width + tol) ||
                        (j == 0 && std::abs(J - center) <= half_width + tol);
    if (inside) window.push_back(j);
  }

  // Kernels K1[L], K2[L] over grid offsets for lag L = m - s steps; the step
  // covering [t_s, t_{s+1}] reaches t_m after an extra (L - 1) dt of decay.
  RealFft<double> fft(n);
  const Eigen::Index half = fft.half_size();
  const auto steps = mode_steps(J, dt, half, record.n_modes);
  const double dw_scale = std::sqrt(dt / (J * static_cast<double>(n)));
  const double r_scale = std::sqrt(1.0 / (J * static_cast<double>(n)));
  Eigen::MatrixXd k1(n, n_t + 1);
  Eigen::MatrixXd k2(n, n_t + 1);
  std::vector<Complex> spec(static_cast<std::size_t>(half));
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index lag = 1; lag <= n_t; ++lag) {
    const double tau = dt * static_cast<double>(lag - 1);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < half; ++k) {
        const auto& m = steps[static_cast<std::size_t>(k)];
        const double coeff = (pass == 0) ? m.c1 * dw_scale : m.c2 * r_scale;
        const double decay = (k > record.n_modes) ? 0.0 : std::exp(-mode_rate(k, J) * tau);
        spec[static_cast<std::size_t>(k)] = coeff * decay;
      }
      fft.inverse(spec, row);
      auto& dst = (pass == 0) ? k1 : k2;
      for (Eigen::Index j = 0; j < n; ++j) dst(j, lag) = row[static_cast<std::size_t>(j)];
    }
  }

  for (Eigen::Index m = 1; m <= n_t; ++m) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (Eigen::Index s = 0; s < m; ++s) {
        const auto xi = record.xi.col(s * d + c);
        const auto rho = record.rho.col(s * d + c);
        const Eigen::Index lag = m - s;
        for (Eigen::Index j : window) {
          Eigen::Index offset = out.node - j;
          if (offset < 0) offset += n;
          acc += k1(offset, lag) * xi(j) + k2(offset, lag) * rho(j);
        }
      }
      out.values(c, m) = acc;
    }
  }
  return out;
}

Eigen::MatrixXd FourTermDecomposition::sum() const {
  Eigen::MatrixXd total = localized + smoothing_error + truncation_error;
  total.colwise() += anchor;
  return total;
}

FourTermDecomposition decompose_at(const StringPath& path, const InitialProfile& profile,
                                   const NoiseRecord& record, double lambda, double kappa,
                                   double half_width) {
  if (profile.n_x() != path.n_x || record.n_x != path.n_x || record.n_t != path.n_t)
    throw ConfigurationError("decompose_at: path, profile and noise record grids differ");
  const Eigen::Index n = path.n_x;
  const double dx = path.dx();
  FourTermDecomposition out;
  const auto v = localized_convolution(record, lambda, half_width);
  out.node = v.node;
  const auto kappa_node = static_cast<Eigen::Index>(std::llround(kappa / dx)) % n;
  out.anchor = profile.values.col(kappa_node);
  out.localized = v.values;

  const Eigen::Index frames = path.n_t + 1;
  const KernelParams<double> params{path.J};
  const Eigen::MatrixXd periodic = profile.periodic_values();
  out.u.resize(path.d, frames);
  out.smoothing_error.resize(path.d, frames);
  Eigen::MatrixXd noise(path.d, frames);
  for (Eigen::Index i = 0; i < frames; ++i) {
    out.u.col(i) = path.at(i, out.node);
    const Eigen::MatrixXd smoothed =
        convolve_profile(periodic, path.dt() * static_cast<double>(i), params);
    out.smoothing_error.col(i) = smoothed.col(out.node) - out.anchor;
    noise.col(i) = path.has_noise() ? Eigen::VectorXd(path.noise.col(path.column(i, out.node)))
                                    : Eigen::VectorXd(out.u.col(i) - smoothed.col(out.node));
  }
  out.truncation_error = noise - out.localized;
  return out;
}

namespace {

void put_word(std::ostream& out, std::uint64_t w) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((w >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

std::uint64_t get_word(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw ConfigurationError("read_string_path: truncated input");
  std::uint64_t w = 0;
  for (int i = 7; i >= 0; --i) w = (w << 8) | bytes[i];
  return w;
}

}  // namespace

void write_string_path(std::ostream& out, const StringPath& path) {
  put_word(out, static_cast<std::uint64_t>(path.d));
  put_word(out, std::bit_cast<std::uint64_t>(path.J));
  put_word(out, std::bit_cast<std::uint64_t>(path.T));
  put_word(out, static_cast<std::uint64_t>(path.n_t));
  put_word(out, static_cast<std::uint64_t>(path.n_x));
  const double* data = path.values.data();
  for (Eigen::Index i = 0; i < path.values.size(); ++i) put_word(out, std::bit_cast<std::uint64_t>(data[i]));
}

StringPath read_string_path(std::istream& in) {
  StringPath path;
  path.d = static_cast<int>(get_word(in));
  path.J = std::bit_cast<double>(get_word(in));
  path.T = std::bit_cast<double>(get_word(in));
  path.n_t = static_cast<Eigen::Index>(get_word(in));
  path.n_x = static_cast<Eigen::Index>(get_word(in));
  if (path.d < 1 || path.n_x < 1) throw ConfigurationError("read_string_path: bad header");
  path.values.resize(path.d, (path.n_t + 1) * path.n_x);
  double* data = path.values.data();
  for (Eigen::Index i = 0; i < path.values.size(); ++i) data[i] = std::bit_cast<double>(get_word(in));
  return path;
}

}  // namespace polymer_traps
