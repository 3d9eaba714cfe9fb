#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gen.hpp"
#include "urnet/errors.hpp"
#include "urnet/likelihood.hpp"

using namespace urnet;

namespace {

const InteractionSpec kSpec = make_spec({1.5, 0.5}, Matrix{{0.2, 0.1}, {0.05, 0.3}}, Matrix{{0.6, 0.3}, {0.4, 0.7}});

}  // namespace

TEST(LogLikelihood, SingleStepIsZero) {
  const std::vector<DrawEvent> ev{{1, 0, 0, true, true}, {1, 1, 1, true, true}};
  const EventView v{2, 1, ev};
  EXPECT_EQ(log_likelihood(v, kSpec), 0.0);
  EXPECT_EQ(LikelihoodEvaluator(v)(kSpec), 0.0);
}

TEST(LogLikelihood, HandEnumeratedTwoSteps) {
  // t=2: agent 1 adopts agent 2's item, agent 2 draws a new one.
  const std::vector<DrawEvent> ev{
      {1, 0, 0, true, true}, {1, 1, 1, true, true}, {2, 0, 1, false, true}, {2, 1, 2, true, true}};
  const EventView v{2, 2, ev};
  const double p_old = (kSpec.w(1, 0) - kSpec.gamma(1, 0)) / (kSpec.theta[0] + 1.0);
  const double z_new = (kSpec.theta[1] + kSpec.gamma(0, 1) + kSpec.gamma(1, 1)) / (kSpec.theta[1] + 1.0);
  const double expected = std::log(p_old) + std::log(z_new);
  EXPECT_NEAR(log_likelihood(v, kSpec), expected, 1e-14);
  EXPECT_NEAR(LikelihoodEvaluator(v)(kSpec), expected, 1e-14);
}

TEST(LogLikelihood, SingleAgentEnumeration) {
  // theta = 1, gamma = 0.5: new, repeat, new -> log(1/4) + log(3/4 * ...).
  const auto spec = make_spec({1.0}, Matrix{{0.5}}, Matrix{{1.0}});
  const std::vector<DrawEvent> ev{{1, 0, 0, true, true}, {2, 0, 0, false, false}, {3, 0, 1, true, true}};
  const EventView v{1, 3, ev};
  const double expected = std::log(0.5 / 2.0) + std::log(1.5 / 3.0);
  EXPECT_NEAR(log_likelihood(v, spec), expected, 1e-14);
}

TEST(LogLikelihood, PropertyEvaluatorMatchesReplay) {
  Rng rng(89);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 1 + rng.below(3);
    const auto gen_spec = gen::random_spec(n, rng, 0.0);
    const auto log = run(gen_spec, 300 + rng.below(500), rng());
    const LikelihoodEvaluator eval(view(log));
    for (int k = 0; k < 5; ++k) {
      auto other = gen::random_spec(n, rng, 0.0);
      const double direct = log_likelihood(view(log), other);
      EXPECT_NEAR(eval(other), direct, 1e-9 * std::abs(direct));
    }
    EXPECT_NEAR(eval(gen_spec), log_likelihood(view(log), gen_spec), 1e-9 * std::abs(eval(gen_spec)));
  }
}

TEST(LogLikelihood, GeneratingSpecBeatsPerturbed) {
  const auto spec = make_spec({1.0, 1.0}, Matrix{{0.1, 0.1}, {0.1, 0.4}}, Matrix{{0.5, 0.5}, {0.5, 0.5}});
  const auto log = run(spec, 20'000, 13);
  const LikelihoodEvaluator eval(view(log));
  const double best = eval(spec);
  const auto worse = make_spec({1.0, 1.0}, Matrix{{0.2, 0.1}, {0.1, 0.3}}, Matrix{{0.6, 0.4}, {0.4, 0.6}});
  EXPECT_GT(best, eval(worse));
  EXPECT_LT(eval.n_terms(), eval.n_events());
}

TEST(LogLikelihood, ImpossibleObservation) {
  // Under independence agent 2 can never adopt agent 1's item.
  const auto indep = make_spec({1.0, 1.0}, Matrix{{0.3, 0.0}, {0.0, 0.3}}, Matrix::identity(2));
  const std::vector<DrawEvent> ev{
      {1, 0, 0, true, true}, {1, 1, 1, true, true}, {2, 0, 2, true, true}, {2, 1, 0, false, true}};
  const EventView v{2, 2, ev};
  try {
    log_likelihood(v, indep);
    FAIL();
  } catch (const ImpossibleObservation& e) {
    EXPECT_EQ(e.t(), 2u);
    EXPECT_EQ(e.agent(), 1u);
    EXPECT_EQ(e.item(), 0u);
  }
  EXPECT_EQ(LikelihoodEvaluator(v)(indep), -std::numeric_limits<double>::infinity());
}
