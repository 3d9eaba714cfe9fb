#include "urnet/families.hpp"

#include <sstream>

#include "urnet/errors.hpp"

namespace urnet {

namespace {

void check_core(double gamma_star, double r, double x1, double x2) {
  std::vector<std::string> v;
  auto bad = [&](const char* name, double value, const char* range) {
    std::ostringstream os;
    os << name << " = " << value << " outside " << range;
    v.push_back(os.str());
  };
  if (!(gamma_star > 0.0 && gamma_star < 1.0)) bad("gamma_star", gamma_star, "(0,1)");
  if (!(r > 0.0 && r <= 1.0)) bad("r", r, "(0,1]");
  if (!(x1 > 0.0 && x1 < 1.0)) bad("x1", x1, "(0,1)");
  if (!(x2 > 0.0 && x2 < 1.0)) bad("x2", x2, "(0,1)");
  if (!v.empty()) throw ValidationError("family parameters out of domain", std::move(v));
}

}  // namespace

Matrix gamma_family(double gamma_star, double r, double x1, double x2) {
  check_core(gamma_star, r, x1, x2);
  Matrix g(2, 2);
  g(0, 0) = gamma_star * (1.0 - x1);
  g(1, 0) = r * gamma_star * x1;
  if (gamma_star <= r) {
    g(0, 1) = gamma_star / r * x2;
    g(1, 1) = gamma_star * (1.0 - x2);
  } else {
    const double k = (1.0 - gamma_star) / (1.0 - r);
    g(0, 1) = k * x2;
    g(1, 1) = gamma_star - k * r * x2;
  }
  return g;
}

std::vector<double> column_deficits(const Matrix& gamma) {
  std::vector<double> d(gamma.cols());
  for (std::size_t h = 0; h < gamma.cols(); ++h) d[h] = 1.0 - gamma.col_sum(h);
  return d;
}

Matrix w_family(double gamma_star, double r, double x1, double x2, double y1, double y2) {
  if (!(y1 >= 0.0 && y1 <= 1.0) || !(y2 >= 0.0 && y2 <= 1.0)) {
    std::ostringstream os;
    os << "y1 = " << y1 << ", y2 = " << y2 << " must lie in [0,1]";
    throw ValidationError(os.str());
  }
  const Matrix g = gamma_family(gamma_star, r, x1, x2);
  const auto d = column_deficits(g);
  Matrix w = g;
  w(0, 0) += d[0] * (1.0 - y1);
  w(1, 0) += d[0] * y1;
  w(0, 1) += d[1] * y2;
  w(1, 1) += d[1] * (1.0 - y2);
  // Pin column sums to exactly 1 against rounding in the deficits.
  w(0, 0) = 1.0 - w(1, 0);
  w(1, 1) = 1.0 - w(0, 1);
  return w;
}

double symmetric_x2(double gamma_star, double r, double x1) {
  if (gamma_star <= r) return r * r * x1;
  return r * gamma_star * (1.0 - r) * x1 / (1.0 - gamma_star);
}

double symmetric_x1_limit(double gamma_star, double r) {
  const double k = symmetric_x2(gamma_star, r, 1.0);
  return k <= 1.0 ? 1.0 : 1.0 / k;
}

double symmetric_y2(double gamma_star, double r, double x1, double y1) {
  const double x2 = symmetric_x2(gamma_star, r, x1);
  const Matrix g = gamma_family(gamma_star, r, x1, x2);
  const auto d = column_deficits(g);
  // w_12 = gamma_12 + d_2 y2  and  w_21 = gamma_21 + d_1 y1.
  return (g(1, 0) - g(0, 1) + d[0] * y1) / d[1];
}

FamilyParams symmetric_params(double gamma_star, double r, double x1, double y1) {
  FamilyParams p;
  p.gamma_star = gamma_star;
  p.r = r;
  p.x1 = x1;
  p.x2 = symmetric_x2(gamma_star, r, x1);
  p.y1 = y1;
  p.y2 = symmetric_y2(gamma_star, r, x1, y1);
  return p;
}

bool in_domain(const FamilyParams& p) {
  return p.gamma_star > 0.0 && p.gamma_star < 1.0 && p.r > 0.0 && p.r <= 1.0 && p.x1 > 0.0 &&
         p.x1 < 1.0 && p.x2 > 0.0 && p.x2 < 1.0 && p.y1 >= 0.0 && p.y1 <= 1.0 && p.y2 >= 0.0 &&
         p.y2 <= 1.0;
}

InteractionSpec family_spec(const FamilyParams& p, std::vector<double> theta) {
  return make_spec(std::move(theta), gamma_family(p.gamma_star, p.r, p.x1, p.x2),
                   w_family(p.gamma_star, p.r, p.x1, p.x2, p.y1, p.y2));
}

}  // namespace urnet
