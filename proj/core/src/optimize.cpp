#include "urnet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "urnet/rng.hpp"

namespace urnet {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             std::span<const double> steps, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0 || steps.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
  std::vector<double> values(n + 1);
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point = [&](double coef, const std::vector<double>& worst, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + coef * (worst[i] - centroid[i]);
  };

  bool converged = false;
  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[best][i]));
    if (diameter < options.tolerance) {
      converged = true;
      break;
    }
    if (evals >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k)
      if (k != worst)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);

    point(-kReflect, simplex[worst], trial);
    const double fr = eval(trial);
    if (fr < values[best]) {
      point(-kReflect * kExpand, simplex[worst], trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    // Contraction: outside if the reflection improved on the worst vertex.
    const bool outside = fr < values[worst];
    point(outside ? -kReflect * kContract : kContract, simplex[worst], trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (std::size_t i = 0; i < n; ++i)
        simplex[k][i] = simplex[best][i] + kShrink * (simplex[k][i] - simplex[best][i]);
      values[k] = eval(simplex[k]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::distance(values.begin(), std::min_element(values.begin(), values.end())));
  return {simplex[best], values[best], evals, converged};
}

std::vector<std::vector<double>> latin_grid(std::size_t n, std::size_t dims, std::uint64_t seed) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  for (std::size_t d = 0; d < dims; ++d) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    for (std::size_t i = 0; i < n; ++i)
      pts[i][d] = (static_cast<double>(perm[i]) + 0.5) / static_cast<double>(n);
  }
  return pts;
}

}  // namespace urnet
