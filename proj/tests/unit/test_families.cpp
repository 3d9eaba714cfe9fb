#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "urnet/errors.hpp"
#include "urnet/families.hpp"
#include "urnet/spectral.hpp"

using namespace urnet;

namespace {

struct Point {
  double gamma_star, r, x1, x2;
};

Point random_point(Rng& rng) {
  return {gen::uniform(rng, 0.01, 0.99), gen::uniform(rng, 0.01, 1.0), gen::uniform(rng, 0.001, 0.999),
          gen::uniform(rng, 0.001, 0.999)};
}

}  // namespace

TEST(GammaFamily, UpperBranchExample) {
  // gamma_star > r: k = (1 - 0.6) / (1 - 0.5) = 0.8.
  const Matrix g = gamma_family(0.6, 0.5, 0.3, 0.3);
  EXPECT_NEAR(g(0, 1), 0.24, 1e-15);
  EXPECT_NEAR(g(1, 1), 0.48, 1e-15);
  EXPECT_NEAR(g(0, 0), 0.42, 1e-15);
  EXPECT_NEAR(g(1, 0), 0.09, 1e-15);
}

TEST(GammaFamily, PropertyPrescribedLeftEigenvector) {
  Rng rng(71);
  for (int i = 0; i < 10'000; ++i) {
    const auto p = random_point(rng);
    const Matrix g = gamma_family(p.gamma_star, p.r, p.x1, p.x2);
    const std::vector<double> u{p.r, 1.0};
    const auto ug = left_multiply(u, g);
    ASSERT_NEAR(ug[0], p.gamma_star * p.r, 1e-12);
    ASSERT_NEAR(ug[1], p.gamma_star, 1e-12);
    for (std::size_t j = 0; j < 2; ++j) {
      ASSERT_LT(g.col_sum(j), 1.0);
      for (std::size_t h = 0; h < 2; ++h) ASSERT_GT(g(j, h), 0.0);
    }
  }
}

TEST(GammaFamily, PropertyLeadingEigenRecoversParameters) {
  // Independent route: power iteration must return gamma_star and r.
  Rng rng(73);
  for (int i = 0; i < 500; ++i) {
    const auto p = random_point(rng);
    const auto s = leading_eigen(gamma_family(p.gamma_star, p.r, p.x1, p.x2));
    EXPECT_NEAR(s.gamma_star, p.gamma_star, 1e-9);
    EXPECT_NEAR(s.ratios(0, 1), p.r, 1e-7);
  }
}

TEST(GammaFamily, RejectsOutOfDomain) {
  EXPECT_THROW(gamma_family(1.0, 0.5, 0.3, 0.3), ValidationError);
  EXPECT_THROW(gamma_family(0.5, 1.5, 0.3, 0.3), ValidationError);
  EXPECT_THROW(gamma_family(0.5, 0.5, 0.0, 0.3), ValidationError);
  EXPECT_THROW(w_family(0.5, 0.5, 0.3, 0.3, -0.1, 0.3), ValidationError);
}

TEST(WFamily, PropertyColumnStochasticAndValid) {
  Rng rng(79);
  for (int i = 0; i < 5000; ++i) {
    const auto p = random_point(rng);
    const double y1 = rng.uniform(), y2 = rng.uniform();
    const Matrix g = gamma_family(p.gamma_star, p.r, p.x1, p.x2);
    const Matrix w = w_family(p.gamma_star, p.r, p.x1, p.x2, y1, y2);
    EXPECT_EQ(w.col_sum(0), 1.0);
    EXPECT_EQ(w.col_sum(1), 1.0);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t h = 0; h < 2; ++h) EXPECT_GE(w(j, h), g(j, h) - 1e-15);
    const InteractionSpec spec{{1.0, 1.0}, g, w};
    EXPECT_TRUE(validate_spec(spec).empty());
  }
}

TEST(SymmetricFamily, Examples) {
  EXPECT_DOUBLE_EQ(symmetric_x2(0.4, 0.5, 0.8), 0.2);
  EXPECT_DOUBLE_EQ(symmetric_x2(0.6, 0.5, 0.4), 0.5 * 0.6 * 0.5 * 0.4 / 0.4);
  EXPECT_DOUBLE_EQ(symmetric_x1_limit(0.4, 0.5), 1.0);
}

TEST(SymmetricFamily, PropertyEliminationGivesSymmetry) {
  Rng rng(83);
  int tested = 0;
  while (tested < 5000) {
    const double gs = gen::uniform(rng, 0.01, 0.99), r = gen::uniform(rng, 0.01, 1.0);
    const double x1 = gen::uniform(rng, 0.001, 0.999) * symmetric_x1_limit(gs, r);
    const auto p = symmetric_params(gs, r, x1, rng.uniform());
    if (!in_domain(p)) continue;
    ++tested;
    const auto spec = family_spec(p, {1.0, 1.0});
    EXPECT_NEAR(spec.gamma(0, 1), spec.gamma(1, 0), 1e-12);
    EXPECT_NEAR(spec.w(0, 1), spec.w(1, 0), 1e-12);
  }
}

TEST(SymmetricFamily, ReproducesSymmetricRow) {
  // Gamma = [[0.1, 0.1], [0.1, 0.4]], w12 = 0.5 is reachable from its own
  // spectral summary.
  const Matrix g{{0.1, 0.1}, {0.1, 0.4}};
  const auto s = leading_eigen(g);
  const double r = s.ratios(0, 1);
  const double x1 = 1.0 - g(0, 0) / s.gamma_star;
  const double d1 = 1.0 - g.col_sum(0);
  const double y1 = (0.5 - g(1, 0)) / d1;
  const auto p = symmetric_params(s.gamma_star, r, x1, y1);
  const auto spec = family_spec(p, {1.0, 1.0});
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t h = 0; h < 2; ++h) {
      EXPECT_NEAR(spec.gamma(j, h), g(j, h), 1e-9);
      EXPECT_NEAR(spec.w(j, h), 0.5, 1e-9);
    }
}
