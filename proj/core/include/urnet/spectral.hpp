#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "urnet/matrix.hpp"
#include "urnet/model.hpp"

namespace urnet {

// Perron-Frobenius data of a non-negative irreducible matrix.
//   gamma * v = gamma_star * v,  sum(v) = 1
//   u^T gamma = gamma_star * u^T, v . u = 1
// ratios(h, j) = u_h / u_j is the limit of D*_{t,h} / D*_{t,j}.
struct SpectralSummary {
  double gamma_star = 0.0;
  std::vector<double> v;
  std::vector<double> u;
  Matrix ratios;
  std::size_t iterations = 0;
  double right_residual = 0.0;
  double left_residual = 0.0;
};

struct PowerIterationOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100'000;
  double max_residual = 1e-10;
};

// True iff the support digraph (edge j -> h when m(j, h) > 0) is strongly
// connected. A 1x1 matrix counts as irreducible.
bool is_irreducible(const Matrix& m);

// Power iteration on (gamma + I) and its transpose; the unit shift keeps
// periodic irreducible matrices convergent without moving eigenvectors.
// Throws ValidationError for negative or reducible input and
// NotConvergedError when the iteration stalls.
SpectralSummary leading_eigen(const Matrix& gamma, const PowerIterationOptions& options = {});

// e^A by scaling and squaring of a truncated Taylor series.
Matrix matrix_exponential(const Matrix& a);

// Mean-field trajectory of D*_t: d'(t) = gamma^T d(t) / t, i.e.
// d'(z) = gamma^T d(z) with t = e^z. Component h receives from column h of
// gamma, matching the birth probability of agent h.
struct OdeTrajectory {
  std::vector<double> t;               // log-spaced sample times
  std::vector<std::vector<double>> d;  // d[k][h] at t[k]
  // Worst relative gap between the RK4 samples and the matrix-exponential
  // solution (N <= 16; NaN otherwise).
  double expm_max_rel_diff = 0.0;
};

OdeTrajectory ode_trajectory(const Matrix& gamma, std::span<const double> d0, double t0, double t1,
                             std::size_t n_points, std::size_t min_steps = 10'000);

// Closed-form solution d(t) = exp(gamma^T ln(t / t0)) d0.
std::vector<double> ode_exact(const Matrix& gamma, std::span<const double> d0, double t0, double t);

// Growth exponent of ode component h from d0 = 1 at t0 = 1, read off the
// window t in [1e6, 1e8]. The local log-log slope s_h = (gamma^T d)_h / d_h
// at t = 1e6, 1e7, 1e8 is Aitken-extrapolated: subleading modes make s_h
// approach its limit geometrically in log t. Falls back to s_h(1e8) when
// the three slopes are not geometric or the extrapolation leaves
// [s_h(1e8), min(max row sum, max column sum)]. A heuristic; for
// irreducible gamma it estimates gamma_star once the window is past the
// transient (weakly coupled agents may not be).
double asymptotic_exponent(const Matrix& gamma, Agent h);
std::vector<double> asymptotic_exponents(const Matrix& gamma);

// Plain least-squares log-log slopes over the same window, without
// extrapolation.
std::vector<double> window_slopes(const Matrix& gamma);

}  // namespace urnet
