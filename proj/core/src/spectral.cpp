#include "urnet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "urnet/errors.hpp"

namespace urnet {

namespace {

void require_square_nonnegative(const Matrix& m, const char* what) {
  if (!m.square() || m.rows() == 0)
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  for (double x : m.data())
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ValidationError(std::string(what) + ": matrix entries must be finite and non-negative");
}

std::vector<bool> reachable(const Matrix& m, bool transpose) {
  const std::size_t n = m.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < n; ++b) {
      const double e = transpose ? m(b, a) : m(a, b);
      if (e > 0.0 && !seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
    }
  }
  return seen;
}

struct PowerResult {
  std::vector<double> x;
  std::size_t iterations;
  double last_change;
};

// Leading eigenvector of (m + I), normalized to unit sum.
PowerResult shifted_power(const Matrix& m, const PowerIterationOptions& opt) {
  const std::size_t n = m.rows();
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double change = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < opt.max_iterations) {
    ++it;
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
      y[i] = s;
    }
    const double norm = std::accumulate(y.begin(), y.end(), 0.0);
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (change < opt.tolerance) break;
  }
  return {std::move(x), it, change};
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

bool is_irreducible(const Matrix& m) {
  if (!m.square() || m.rows() == 0) return false;
  if (m.rows() == 1) return true;
  const auto fwd = reachable(m, false);
  const auto bwd = reachable(m, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

SpectralSummary leading_eigen(const Matrix& gamma, const PowerIterationOptions& options) {
  require_square_nonnegative(gamma, "leading_eigen");
  if (!is_irreducible(gamma))
    throw ValidationError(
        "leading_eigen: matrix is reducible; use ode_trajectory / asymptotic_exponent for "
        "per-agent growth rates");
  const std::size_t n = gamma.rows();

  auto right = shifted_power(gamma, options);
  auto left = shifted_power(gamma.transposed(), options);

  SpectralSummary s;
  s.v = std::move(right.x);
  const auto gv = gamma * std::span<const double>(s.v);
  s.gamma_star = std::accumulate(gv.begin(), gv.end(), 0.0);  // sum(v) = 1

  const double vu = std::inner_product(s.v.begin(), s.v.end(), left.x.begin(), 0.0);
  s.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.u[i] = left.x[i] / vu;
  s.iterations = std::max(right.iterations, left.iterations);

  const auto ug = left_multiply(s.u, gamma);
  for (std::size_t i = 0; i < n; ++i) {
    s.right_residual = std::max(s.right_residual, std::abs(gv[i] - s.gamma_star * s.v[i]));
    s.left_residual = std::max(s.left_residual, std::abs(ug[i] - s.gamma_star * s.u[i]));
  }
  const double residual = std::max(s.right_residual, s.left_residual);
  if (right.last_change >= options.tolerance || left.last_change >= options.tolerance ||
      residual > options.max_residual) {
    std::ostringstream os;
    os << "leading_eigen: power iteration did not converge after " << s.iterations
       << " iterations (residual " << residual << ")";
    throw NotConvergedError(os.str(), residual);
  }

  s.ratios = Matrix(n, n);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t j = 0; j < n; ++j) s.ratios(h, j) = s.u[h] / s.u[j];
  return s;
}

Matrix matrix_exponential(const Matrix& a) {
  if (!a.square()) throw ValidationError("matrix_exponential: matrix must be square");
  const std::size_t n = a.rows();
  double norm1 = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += std::abs(a(r, c));
    norm1 = std::max(norm1, s);
  }
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix b = std::ldexp(1.0, -squarings) * a;

  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = (1.0 / k) * (term * b);
    result = result + term;
    if (term.max_abs() <= 1e-20 * result.max_abs()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

std::vector<double> ode_exact(const Matrix& gamma, std::span<const double> d0, double t0,
                              double t) {
  const Matrix e = matrix_exponential(std::log(t / t0) * gamma.transposed());
  return e * d0;
}

OdeTrajectory ode_trajectory(const Matrix& gamma, std::span<const double> d0, double t0, double t1,
                             std::size_t n_points, std::size_t min_steps) {
  require_square_nonnegative(gamma, "ode_trajectory");
  const std::size_t n = gamma.rows();
  if (d0.size() != n) throw ValidationError("ode_trajectory: d0 must have one entry per agent");
  if (!(t0 > 0.0) || !(t1 > t0)) throw ValidationError("ode_trajectory: need 0 < t0 < t1");
  if (n_points < 2) throw ValidationError("ode_trajectory: need at least 2 sample points");

  const Matrix a = gamma.transposed();
  const double z0 = std::log(t0);
  const double z1 = std::log(t1);
  const std::size_t intervals = n_points - 1;
  const std::size_t sub = std::max<std::size_t>(1, (min_steps + intervals - 1) / intervals);
  const double dz = (z1 - z0) / static_cast<double>(intervals * sub);

  OdeTrajectory out;
  out.t.reserve(n_points);
  out.d.reserve(n_points);
  std::vector<double> d(d0.begin(), d0.end());
  std::vector<double> tmp(n);
  out.t.push_back(t0);
  out.d.push_back(d);

  auto axpy = [&](const std::vector<double>& base, const std::vector<double>& k, double s) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = base[i] + s * k[i];
    return a * std::span<const double>(tmp);
  };
  for (std::size_t k = 1; k <= intervals; ++k) {
    for (std::size_t s = 0; s < sub; ++s) {
      const auto k1 = a * std::span<const double>(d);
      const auto k2 = axpy(d, k1, dz / 2);
      const auto k3 = axpy(d, k2, dz / 2);
      const auto k4 = axpy(d, k3, dz);
      for (std::size_t i = 0; i < n; ++i) d[i] += dz / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    const double z = z0 + (z1 - z0) * static_cast<double>(k) / static_cast<double>(intervals);
    out.t.push_back(k == intervals ? t1 : std::exp(z));
    out.d.push_back(d);
  }

  if (n <= 16) {
    out.expm_max_rel_diff = 0.0;
    for (std::size_t k = 0; k < out.t.size(); ++k) {
      const auto exact = ode_exact(gamma, d0, t0, out.t[k]);
      for (std::size_t i = 0; i < n; ++i)
        out.expm_max_rel_diff = std::max(out.expm_max_rel_diff, rel_diff(exact[i], out.d[k][i]));
    }
  } else {
    out.expm_max_rel_diff = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double asymptotic_exponent(const Matrix& gamma, Agent h) {
  const auto all = asymptotic_exponents(gamma);
  if (h >= all.size()) throw std::out_of_range("asymptotic_exponent: bad agent");
  return all[h];
}

std::vector<double> window_slopes(const Matrix& gamma) {
  const std::size_t n = gamma.rows();
  const std::vector<double> d0(n, 1.0);
  // 10 samples per decade over [1, 1e8].
  const auto traj = ode_trajectory(gamma, d0, 1.0, 1e8, 81);
  std::vector<double> slopes(n, 0.0);
  for (std::size_t h = 0; h < n; ++h) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
      if (traj.t[k] < 1e6 * (1 - 1e-9)) continue;
      const double x = std::log10(traj.t[k]);
      const double y = std::log10(traj.d[k][h]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      m += 1;
    }
    slopes[h] = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  }
  return slopes;
}

std::vector<double> asymptotic_exponents(const Matrix& gamma) {
  const std::size_t n = gamma.rows();
  const std::vector<double> d0(n, 1.0);
  const Matrix a = gamma.transposed();
  std::vector<std::vector<double>> d;
  for (double t : {1e6, 1e7, 1e8}) d.push_back(ode_exact(gamma, d0, 1.0, t));
  // Row and column sums both bound the spectral radius.
  double bound = std::numeric_limits<double>::infinity();
  {
    double max_row = 0.0, max_col = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_row = std::max(max_row, gamma.row_sum(i));
      max_col = std::max(max_col, gamma.col_sum(i));
    }
    bound = std::min(max_row, max_col);
  }
  std::vector<double> out(n);
  for (std::size_t h = 0; h < n; ++h) {
    double s[3];
    for (int k = 0; k < 3; ++k) {
      double num = 0.0;
      for (std::size_t j = 0; j < n; ++j) num += a(h, j) * d[k][j];
      s[k] = num / d[k][h];
    }
    const double d1 = s[1] - s[0], d2 = s[2] - s[1];
    // Below this the increments are rounding noise and s has converged.
    constexpr double kNoise = 1e-11;
    const double q = d2 / d1;
    const bool geometric = std::abs(d2) > kNoise && std::isfinite(q) && q > 0.0 && q < 1.0;
    const double extrapolated = s[2] + d2 * q / (1.0 - q);
    // Outside [s(1e8), bound] the window is still pre-asymptotic for h.
    const bool plausible = d2 > 0.0 ? extrapolated <= bound + 1e-12 : extrapolated >= 0.0;
    out[h] = geometric && plausible ? extrapolated : s[2];
  }
  return out;
}

}  // namespace urnet
