#include "polymer_traps/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>

#include <Eigen/QR>

#include "polymer_traps/errors.hpp"
#include "polymer_traps/heat_kernel.hpp"
#include "polymer_traps/random.hpp"

namespace polymer_traps {

namespace {

// Index of the first grid node with position >= x (tolerant to rounding).
Eigen::Index first_node_at_or_after(const InitialProfile& profile, double x) {
  const double h = profile.spacing();
  Eigen::Index k = static_cast<Eigen::Index>(std::ceil(x / h - 1e-9));
  return std::clamp<Eigen::Index>(k, 0, profile.n_x());
}

Eigen::Index last_node_at_or_before(const InitialProfile& profile, double x) {
  const double h = profile.spacing();
  Eigen::Index k = static_cast<Eigen::Index>(std::floor(x / h + 1e-9));
  return std::clamp<Eigen::Index>(k, 0, profile.n_x());
}

double min_distance(const InitialProfile& profile, Eigen::Index k,
                    const std::vector<Eigen::Index>& selected) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index s : selected)
    best = std::min(best, (profile.values.col(k) - profile.values.col(s)).norm());
  return best;
}

// Greedy separation scan from node `start` through node `stop`; returns selected nodes
// after the start.
std::vector<Eigen::Index> separation_scan(const InitialProfile& profile, Eigen::Index start,
                                          Eigen::Index stop, double radius) {
  std::vector<Eigen::Index> selected{start};
  for (Eigen::Index k = start + 1; k <= stop; ++k)
    if (min_distance(profile, k, selected) >= radius) selected.push_back(k);
  selected.erase(selected.begin());
  return selected;
}

bool confined(const InitialProfile& profile, Eigen::Index k, Eigen::Index k_end, double radius) {
  if (k_end > profile.n_x()) return false;
  for (Eigen::Index j = k; j <= k_end; ++j)
    if ((profile.values.col(j) - profile.values.col(k)).norm() > radius) return false;
  return true;
}

void check_profile(const InitialProfile& profile, double Lambda, double alpha_star, double c0,
                   double a) {
  if (profile.n_x() < 1) throw DomainError("kappa_sequences: profile has no grid");
  if (!(Lambda >= 1.0)) throw DomainError("kappa_sequences: Lambda must be >= 1");
  if (!(a > 0.0)) throw DomainError("kappa_sequences: a must be > 0");
  if (!(c0 >= 0.0)) throw DomainError("kappa_sequences: c0 must be >= 0");
  if (!(profile.J > 1.0)) throw DomainError("kappa_sequences: J must be > 1");
  if (!(alpha_star > 0.0) || 0.75 * alpha_star * profile.J > profile.J)
    throw DomainError("kappa_sequences: window [alpha_star J/4, 3 alpha_star J/4] outside the grid");
}

std::vector<double> positions(const InitialProfile& profile, const std::vector<Eigen::Index>& nodes) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (Eigen::Index k : nodes) out.push_back(profile.position(k));
  return out;
}

}  // namespace

double default_c0(double J, double alpha_star) {
  if (!(J > 1.0)) throw DomainError("default_c0: J must be > 1");
  return alpha_star * J / (16.0 * std::sqrt(std::log(J)));
}

KappaRecord kappa_sequences(const InitialProfile& profile, double Lambda, double alpha_star,
                            double c0, double a, double alpha) {
  check_profile(profile, Lambda, alpha_star, c0, a);
  KappaRecord rec;
  rec.J = profile.J;
  rec.Lambda = Lambda;
  rec.alpha = alpha > 0.0 ? alpha : alpha_star;
  rec.alpha_star = alpha_star;
  rec.c0 = c0;
  rec.Delta = c0 * std::sqrt(std::log(profile.J));
  rec.a = a;
  const double J = profile.J;
  const Eigen::Index n = profile.n_x();

  const std::vector<Eigen::Index> k1 = separation_scan(profile, 0, n, 4.0 * Lambda);
  rec.kappa1_origin = 0.0;
  rec.kappa1 = positions(profile, k1);
  rec.n1 = std::count_if(rec.kappa1.begin(), rec.kappa1.end(),
                         [&](double x) { return x <= rec.alpha * J * (1.0 + 1e-12); });

  const Eigen::Index start = first_node_at_or_after(profile, 0.25 * alpha_star * J);
  const Eigen::Index stop = last_node_at_or_before(profile, 0.75 * alpha_star * J);
  const std::vector<Eigen::Index> k2 = separation_scan(profile, start, stop, 4.0 * Lambda);
  rec.kappa2_origin = profile.position(start);
  rec.kappa2 = positions(profile, k2);
  rec.n2 = static_cast<Eigen::Index>(k2.size());

  const Eigen::Index window = static_cast<Eigen::Index>(std::floor(2.0 * rec.Delta / profile.spacing() + 1e-9));
  std::vector<Eigen::Index> k3;
  for (Eigen::Index k : k2)
    if (confined(profile, k, k + window, a / 16.0)) k3.push_back(k);
  rec.kappa3 = positions(profile, k3);
  rec.n3 = static_cast<Eigen::Index>(k3.size());
  for (std::size_t i = 0; i + 1 < k3.size(); ++i) {
    rec.lambda.push_back(rec.kappa3[i] + rec.Delta);
    if (k3[i + 1] <= k3[i] + window) ++rec.overlaps;
  }
  for (Eigen::Index k = 0; k < n; ++k)
    rec.modulus = std::max(rec.modulus, (profile.values.col(k + 1) - profile.values.col(k)).norm());
  return rec;
}

KappaCheck verify_kappa(const KappaRecord& rec, const InitialProfile& profile) {
  KappaCheck check;
  auto fail = [&](const std::string& what) {
    check.ok = false;
    check.violations.push_back(what);
  };
  const double h = profile.spacing();
  auto node = [&](double x) { return static_cast<Eigen::Index>(std::llround(x / h)); };
  const double sep = 4.0 * rec.Lambda;

  // Each stopping value is the first node after its predecessor that is 4 Lambda away
  // from every earlier stopping value.
  auto check_scan = [&](double origin, const std::vector<double>& seq, Eigen::Index last,
                        const char* name) {
    std::vector<Eigen::Index> chosen{node(origin)};
    Eigen::Index prev = chosen.front();
    for (double x : seq) {
      const Eigen::Index k = node(x);
      if (k <= prev) fail(std::string(name) + " not strictly increasing");
      for (Eigen::Index j = prev + 1; j < k; ++j) {
        bool far = true;
        for (Eigen::Index c : chosen)
          far = far && (profile.values.col(j) - profile.values.col(c)).norm() >= sep;
        if (far) {
          fail(std::string(name) + " skipped an admissible node");
          break;
        }
      }
      for (Eigen::Index c : chosen)
        if ((profile.values.col(k) - profile.values.col(c)).norm() < sep)
          fail(std::string(name) + " closer than 4 Lambda to an earlier point");
      chosen.push_back(k);
      prev = k;
    }
    for (Eigen::Index j = prev + 1; j <= last; ++j) {
      bool far = true;
      for (Eigen::Index c : chosen)
        far = far && (profile.values.col(j) - profile.values.col(c)).norm() >= sep;
      if (far) {
        fail(std::string(name) + " stopped early");
        break;
      }
    }
  };
  check_scan(rec.kappa1_origin, rec.kappa1, profile.n_x(), "kappa1");
  const Eigen::Index last2 = static_cast<Eigen::Index>(std::floor(0.75 * rec.alpha_star * rec.J / h + 1e-9));
  if (std::abs(rec.kappa2_origin - 0.25 * rec.alpha_star * rec.J) >= h)
    fail("kappa2 origin is not the first node at alpha_star J / 4");
  check_scan(rec.kappa2_origin, rec.kappa2, std::min(last2, profile.n_x()), "kappa2");
  for (double x : rec.kappa2)
    if (x > 0.75 * rec.alpha_star * rec.J + 1e-9) fail("kappa2 beyond 3 alpha_star J / 4");

  const double reach = 2.0 * rec.Delta;
  for (double x : rec.kappa3) {
    if (std::find(rec.kappa2.begin(), rec.kappa2.end(), x) == rec.kappa2.end())
      fail("kappa3 not a subset of kappa2");
    const Eigen::Index k = node(x);
    for (Eigen::Index j = k; j <= profile.n_x() && profile.position(j) <= x + reach + 1e-9; ++j)
      if ((profile.values.col(j) - profile.values.col(k)).norm() > rec.a / 16.0)
        fail("kappa3 point violates a/16 confinement");
  }
  for (double x : rec.kappa2) {
    if (std::find(rec.kappa3.begin(), rec.kappa3.end(), x) != rec.kappa3.end()) continue;
    const Eigen::Index k = node(x);
    bool holds = x + reach <= rec.J + 1e-9;
    for (Eigen::Index j = k; holds && j <= profile.n_x() && profile.position(j) <= x + reach + 1e-9; ++j)
      holds = (profile.values.col(j) - profile.values.col(k)).norm() <= rec.a / 16.0;
    if (holds) fail("kappa3 misses a confined kappa2 point");
  }
  if (rec.n3 > rec.n2) fail("N3 > N2");
  if (rec.n2 != static_cast<Eigen::Index>(rec.kappa2.size())) fail("N2 does not match kappa2");

  const double lo = 0.25 * rec.alpha_star * rec.J, hi = 0.75 * rec.alpha_star * rec.J;
  const auto in_window = std::count_if(rec.kappa1.begin(), rec.kappa1.end(),
                                       [&](double x) { return x >= lo && x <= hi; });
  check.n2_within_kappa1 = rec.n2 <= in_window;

  check.min_separation = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> nodes{0};
  for (double x : rec.kappa1) nodes.push_back(node(x));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      check.min_separation = std::min(
          check.min_separation, (profile.values.col(nodes[i]) - profile.values.col(nodes[j])).norm());
  return check;
}

std::vector<double> log_spaced(double eps_max, double eps_min, int count) {
  if (count < 2 || !(eps_max > eps_min) || !(eps_min > 0.0))
    throw ConfigurationError("log_spaced: need count >= 2 and eps_max > eps_min > 0");
  std::vector<double> out(count);
  const double ratio = std::log(eps_min / eps_max) / (count - 1.0);
  for (int i = 0; i < count; ++i) out[i] = eps_max * std::exp(ratio * i);
  return out;
}

DimensionEstimate minkowski_dimension(const Eigen::Ref<const Eigen::MatrixXd>& trace,
                                      std::vector<double> epsilons) {
  if (trace.cols() == 0) throw DomainError("minkowski_dimension: empty trace");
  if (epsilons.size() < 4) throw ConfigurationError("minkowski_dimension: need at least 4 scales");
  for (double e : epsilons)
    if (!(e > 0.0)) throw ConfigurationError("minkowski_dimension: scales must be > 0");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
  if (std::log10(epsilons.front() / epsilons.back()) < 1.5 - 1e-12)
    throw ConfigurationError("minkowski_dimension: scales must span at least 1.5 decades");

  const Eigen::VectorXd origin = trace.rowwise().minCoeff();
  const Eigen::Index d = trace.rows(), n = trace.cols();
  DimensionEstimate est;
  est.epsilons = epsilons;
  std::vector<std::uint64_t> keys(static_cast<std::size_t>(n));
  for (double eps : epsilons) {
    for (Eigen::Index i = 0; i < n; ++i) {
      std::uint64_t key = 0x243F6A8885A308D3ULL;
      for (Eigen::Index c = 0; c < d; ++c) {
        const auto cell = static_cast<std::int64_t>(std::floor((trace(c, i) - origin(c)) / eps));
        std::uint64_t state = key ^ static_cast<std::uint64_t>(cell);
        key = splitmix64(state);
      }
      keys[i] = key;
    }
    std::sort(keys.begin(), keys.end());
    est.counts.push_back(static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  if (std::adjacent_find(est.counts.begin(), est.counts.end(), std::not_equal_to<>()) == est.counts.end())
    throw NumericalError("minkowski_dimension: fewer than 2 distinct occupied-cell counts");

  const Eigen::Index m = static_cast<Eigen::Index>(epsilons.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = std::log(1.0 / epsilons[i]);
    A(i, 1) = 1.0;
    b(i) = std::log(est.counts[i]);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  est.slope = coef(0);
  est.intercept = coef(1);
  return est;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Fn>
Panel gauss_kronrod(Fn& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double sum = f(c - h * kKronrodNodes[j]) + f(c + h * kKronrodNodes[j]);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {lo, hi, kronrod * h, std::abs((kronrod - gauss) * h)};
}

// Global adaptive Gauss-Kronrod over the panels between consecutive breakpoints.
template <typename Fn>
QuadratureResult integrate(Fn&& f, const std::vector<double>& breaks, double rel_tol,
                           const char* what, Eigen::Index max_panels = 4000) {
  std::priority_queue<Panel> panels;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gauss_kronrod(f, breaks[i], breaks[i + 1]);
    value += p.value;
    error += p.error;
    panels.push(p);
  }
  while (error > rel_tol * std::abs(value) && error > 1e-300) {
    if (static_cast<Eigen::Index>(panels.size()) >= max_panels) {
      std::ostringstream msg;
      msg << what << ": quadrature did not converge (value " << value << ", error " << error
          << ", panels " << panels.size() << ")";
      throw NumericalError(msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = gauss_kronrod(f, worst.lo, mid);
    const Panel right = gauss_kronrod(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Recompute the sums to drop accumulated update roundoff.
  QuadratureResult out;
  out.intervals = static_cast<Eigen::Index>(panels.size());
  while (!panels.empty()) {
    out.value += panels.top().value;
    out.error += panels.top().error;
    panels.pop();
  }
  return out;
}

}  // namespace

double secterm_bound(double Delta, double s, double t) {
  const double gap = t - s;
  return std::sqrt(gap) * (std::abs(std::log(gap)) + 1.0) * std::exp(-Delta * Delta / t);
}

QuadratureResult secterm_lhs(double Delta, double s, double t, double J, double rel_tol) {
  if (!(Delta > 0.0)) throw DomainError("secterm: Delta must be > 0");
  if (!(J > 0.0) || !(Delta < 0.5 * J)) throw DomainError("secterm: need 0 < Delta < J/2");
  if (!(s >= 0.0) || !(t > s) || t > 1.0) throw DomainError("secterm: need 0 <= s < t <= 1");
  if (!(rel_tol > 0.0)) throw ConfigurationError("secterm: rel_tol must be > 0");
  if (s == 0.0) return {};
  const KernelParams<double> params{J, 1e-14};
  const double gap = t - s;

  std::vector<double> z_breaks{Delta};
  for (int k = 16; k >= 0; --k) z_breaks.push_back(Delta + (0.5 * J - Delta) * std::ldexp(1.0, -k));
  std::vector<double> u_breaks{0.0};
  for (int k = 24; k >= 0; --k) u_breaks.push_back(s * std::ldexp(1.0, -k));

  // u = s - r; the window complement on the circle is Delta <= z <= J - Delta, folded
  // onto [Delta, J/2] by the reflection symmetry of the kernel.
  auto inner = [&](double u) {
    if (u <= 0.0) return 0.0;
    auto integrand = [&](double z) {
      const double diff = periodic_kernel(gap + u, z, params) - periodic_kernel(u, z, params);
      return diff * diff;
    };
    return 2.0 * integrate(integrand, z_breaks, rel_tol, "secterm inner").value;
  };
  return integrate(inner, u_breaks, rel_tol, "secterm outer");
}

SectermCheck secterm_quadrature_check(const std::vector<double>& Delta_grid,
                                      const std::vector<std::pair<double, double>>& st_grid,
                                      double J, double lambda_pos, double rel_tol) {
  if (Delta_grid.empty() || st_grid.empty()) throw ConfigurationError("secterm: empty grid");
  if (!(lambda_pos >= 0.0) || lambda_pos > J) throw DomainError("secterm: lambda_pos outside [0, J]");
  SectermCheck check;
  check.ratios.assign(Delta_grid.size(), std::vector<double>(st_grid.size(), 0.0));
  for (std::size_t i = 0; i < Delta_grid.size(); ++i) {
    double by_delta = 0.0;
    for (std::size_t j = 0; j < st_grid.size(); ++j) {
      const auto [s, t] = st_grid[j];
      const double bound = secterm_bound(Delta_grid[i], s, t);
      const double coarse = secterm_lhs(Delta_grid[i], s, t, J, rel_tol).value / bound;
      const double fine = secterm_lhs(Delta_grid[i], s, t, J, rel_tol / 100.0).value / bound;
      check.ratios[i][j] = fine;
      check.max_ratio = std::max(check.max_ratio, coarse);
      check.refined_max_ratio = std::max(check.refined_max_ratio, fine);
      by_delta = std::max(by_delta, fine);
    }
    check.max_ratio_by_delta.push_back(by_delta);
  }
  const double lo = std::min(check.max_ratio, check.refined_max_ratio);
  const double hi = std::max(check.max_ratio, check.refined_max_ratio);
  check.refinement_change = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return check;
}

}  // namespace polymer_traps
