#include <gtest/gtest.h>

#include <cmath>

#include "gen.hpp"
#include "urnet/errors.hpp"
#include "urnet/estimate.hpp"
#include "urnet/likelihood.hpp"
#include "urnet/spectral.hpp"

using namespace urnet;

namespace {

const StudyRow kRow1{0.10, 0.40, 0.10, 0.50};

struct Fixture {
  EventLog log;
  double gamma_star, r;
};

const Fixture& row1_data() {
  static const Fixture f = [] {
    const auto spec = study_spec(kRow1, 1.0);
    const auto s = leading_eigen(spec.gamma);
    return Fixture{run(spec, 5000, 21), s.gamma_star, s.ratios(0, 1)};
  }();
  return f;
}

}  // namespace

TEST(StudySpec, Layout) {
  const auto spec = study_spec({0.1, 0.4, 0.2, 0.3}, 2.0);
  EXPECT_EQ(spec.gamma, (Matrix{{0.1, 0.2}, {0.2, 0.4}}));
  EXPECT_EQ(spec.w, (Matrix{{0.7, 0.3}, {0.3, 0.7}}));
  EXPECT_EQ(spec.theta, (std::vector<double>{2.0, 2.0}));
}

TEST(Summarize, SampleStatistics) {
  const auto s = summarize({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.sd, 1.0);
  EXPECT_EQ(s.n, 3u);
  EXPECT_TRUE(std::isnan(summarize({4.0}).sd));
}

TEST(FitMle, BeatsGeneratingSpecAndRandomFamilyPoints) {
  const auto& d = row1_data();
  const auto fit = fit_mle(view(d.log), d.gamma_star, d.r);
  const LikelihoodEvaluator eval(view(d.log));
  EXPECT_NEAR(fit.log_likelihood, eval(family_spec(fit.params, fit.theta)), 1e-8);
  EXPECT_GE(fit.log_likelihood, eval(study_spec(kRow1, 1.0)) - 1e-6);
  Rng rng(97);
  for (int i = 0; i < 50; ++i) {
    const double x1 = rng.uniform() * symmetric_x1_limit(d.gamma_star, d.r);
    const auto p = symmetric_params(d.gamma_star, d.r, x1, rng.uniform());
    if (!in_domain(p)) continue;
    EXPECT_GE(fit.log_likelihood, eval(family_spec(p, {1.0, 1.0})) - 1e-6);
  }
  // The fitted matrices keep the prescribed spectrum.
  const auto s = leading_eigen(fit.gamma_hat);
  EXPECT_NEAR(s.gamma_star, d.gamma_star, 1e-9);
  EXPECT_NEAR(s.ratios(0, 1), d.r, 1e-7);
  EXPECT_NEAR(fit.g12(), fit.gamma_hat(1, 0), 1e-12);
}

TEST(FitMle, Deterministic) {
  const auto& d = row1_data();
  MleOptions o;
  o.restarts = 4;
  const auto a = fit_mle(view(d.log), d.gamma_star, d.r, o);
  o.jobs = 2;
  const auto b = fit_mle(view(d.log), d.gamma_star, d.r, o);
  EXPECT_EQ(a.gamma_hat, b.gamma_hat);
  EXPECT_EQ(a.w_hat, b.w_hat);
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
}

TEST(FitFamily, RelabelingCovariance) {
  const auto& d = row1_data();
  const double u = std::log10(d.r);  // < 0: no relabeling
  MleOptions o;
  o.restarts = 4;
  const auto direct = fit_family(view(d.log), d.gamma_star, u, o);
  EXPECT_FALSE(direct.relabeled);
  const auto swapped = swap_agents(view(d.log), 0, 1);
  const auto flipped = fit_family(view(swapped), d.gamma_star, -u, o);
  EXPECT_TRUE(flipped.relabeled);
  EXPECT_NEAR(flipped.r_hat, 1.0 / d.r, 1e-12);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t h = 0; h < 2; ++h) {
      EXPECT_NEAR(flipped.mle.gamma_hat(1 - j, 1 - h), direct.mle.gamma_hat(j, h), 1e-9);
      EXPECT_NEAR(flipped.mle.w_hat(1 - j, 1 - h), direct.mle.w_hat(j, h), 1e-9);
    }
  EXPECT_NEAR(flipped.mle.log_likelihood, direct.mle.log_likelihood, 1e-8);
}

TEST(Pipeline, ConsistentWithHeapsFit) {
  const auto& d = row1_data();
  PipelineOptions o;
  o.mle.restarts = 2;
  const auto p = pipeline(view(d.log), o);
  const auto h = fit_heaps(view(d.log), o.heaps);
  EXPECT_EQ(p.gamma_star_hat, h.slope);
  EXPECT_EQ(p.u_hat, *h.u_hat);
  EXPECT_NEAR(p.r_hat, std::pow(10.0, p.u_hat), 1e-15);
  EXPECT_EQ(p.relabeled, p.u_hat > 0.0);
}

TEST(Pipeline, RejectsSlopeOutsideUnitInterval) {
  // Every draw new: D*_t = D_t = t, slope exactly 1.
  std::vector<DrawEvent> ev;
  ColorId c = 0;
  for (std::uint64_t t = 1; t <= 2000; ++t)
    for (std::uint32_t h = 0; h < 2; ++h) ev.push_back({t, h, c++, true, true});
  EXPECT_THROW(pipeline(EventView{2, 2000, ev}), ValidationError);
}

TEST(SimulationStudy, ReproducibleAndJobIndependent) {
  StudyOptions o;
  o.reps = 3;
  o.horizon = 2000;
  o.seed = 5;
  o.true_spectral = true;
  o.pipeline.mle.restarts = 2;
  const auto a = simulation_study({kRow1}, o);
  o.jobs = 2;
  const auto b = simulation_study({kRow1}, o);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].g11.mean, b[0].g11.mean);
  EXPECT_EQ(a[0].w12.sd, b[0].w12.sd);
  EXPECT_EQ(a[0].g11.n + a[0].n_failed, 3u);
  EXPECT_NEAR(a[0].gamma_star, row1_data().gamma_star, 1e-12);
}

TEST(SimulationStudy, SingleReplicationHasNoSd) {
  StudyOptions o;
  o.reps = 1;
  o.horizon = 1000;
  o.true_spectral = true;
  o.pipeline.mle.restarts = 1;
  const auto res = simulation_study({kRow1}, o);
  EXPECT_TRUE(std::isnan(res[0].g11.sd));
  EXPECT_EQ(res[0].g11.n, 1u);
}
