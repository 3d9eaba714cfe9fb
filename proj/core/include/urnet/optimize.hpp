#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace urnet {

using Objective = std::function<double(std::span<const double>)>;

// Classical Nelder-Mead coefficients: reflection 1, expansion 2,
// contraction 1/2, shrink 1/2.
struct NelderMeadOptions {
  // Converged when the simplex diameter (max infinity-norm distance from the
  // best vertex) falls below this.
  double tolerance = 1e-6;
  std::size_t max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Minimizes f from x0. The initial simplex adds steps[i] along axis i;
// pass a negative step to go the other way.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             std::span<const double> steps, const NelderMeadOptions& options = {});

// n points of a Latin hypercube in [0,1]^dims at stratum centers; the
// per-dimension permutations come from `seed`.
std::vector<std::vector<double>> latin_grid(std::size_t n, std::size_t dims, std::uint64_t seed);

}  // namespace urnet
