#pragma once

#include <vector>

#include "urnet/matrix.hpp"
#include "urnet/model.hpp"

namespace urnet {

// Two-agent parametric families with prescribed leading eigenvalue
// gamma_star and left-eigenvector ratio r = u_1 / u_2.
struct FamilyParams {
  double gamma_star = 0.0;  // (0, 1)
  double r = 1.0;           // (0, 1]
  double x1 = 0.5;          // (0, 1)
  double x2 = 0.5;          // (0, 1)
  double y1 = 0.0;          // [0, 1]
  double y2 = 0.0;          // [0, 1]

  bool lower_branch() const noexcept { return gamma_star <= r; }
};

// Gamma(x1, x2): non-negative, irreducible, column sums < 1, and
// (r, 1) Gamma = gamma_star (r, 1). Throws ValidationError off-domain.
Matrix gamma_family(double gamma_star, double r, double x1, double x2);

// W = Gamma + Lambda, where Lambda splits each column deficit
// 1 - colsum_h(Gamma) between the diagonal and the off-diagonal entry with
// weights (1 - y_h, y_h). Columns of W sum to 1.
Matrix w_family(double gamma_star, double r, double x1, double x2, double y1, double y2);

// Column deficits 1 - colsum_h(Gamma) of gamma_family.
std::vector<double> column_deficits(const Matrix& gamma);

// Under gamma_12 = gamma_21: x2 = r^2 x1 (gamma_star <= r) or
// x2 = r gamma_star (1 - r) x1 / (1 - gamma_star).
double symmetric_x2(double gamma_star, double r, double x1);
// Largest admissible x1 (exclusive) keeping x2 < 1.
double symmetric_x1_limit(double gamma_star, double r);
// Under w_12 = w_21, given x1 (and x2 from symmetric_x2) and y1.
double symmetric_y2(double gamma_star, double r, double x1, double y1);
FamilyParams symmetric_params(double gamma_star, double r, double x1, double y1);

// True when every parameter lies in its domain.
bool in_domain(const FamilyParams& p);

InteractionSpec family_spec(const FamilyParams& p, std::vector<double> theta);

}  // namespace urnet
