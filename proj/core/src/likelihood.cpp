#include "urnet/likelihood.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "urnet/errors.hpp"

namespace urnet {

double log_likelihood(EventView obs, const InteractionSpec& spec) {
  if (spec.n_agents() != obs.n_agents)
    throw ValidationError("log_likelihood: spec and log disagree on the number of agents");
  Replayer r(obs);
  double ll = 0.0;
  if (!r.done()) r.advance();  // first draws are new with probability 1
  while (!r.done()) {
    const auto& s = r.state();
    for (const DrawEvent& ev : r.peek()) {
      const Agent h = ev.agent;
      const double p = ev.new_system ? birth_probability(spec, s, h)
                                     : old_color_probability(spec, s, h, ev.color);
      if (!(p > 0.0)) throw ImpossibleObservation(ev.t, h, ev.color);
      ll += std::log(p);
    }
    r.advance();
  }
  return ll;
}

LikelihoodEvaluator::LikelihoodEvaluator(EventView obs)
    : n_agents_(obs.n_agents), horizon_(obs.horizon) {
  // key: agent, producer (+1, 0 = birth), counts...
  std::map<std::vector<std::uint64_t>, std::size_t> index;
  std::vector<std::uint64_t> key(2 + n_agents_);
  Replayer r(obs);
  if (!r.done()) r.advance();
  while (!r.done()) {
    const auto& s = r.state();
    for (const DrawEvent& ev : r.peek()) {
      key[0] = ev.agent;
      if (ev.new_system) {
        key[1] = 0;
        for (std::size_t j = 0; j < n_agents_; ++j) key[2 + j] = s.d_star(j);
      } else {
        key[1] = s.producer(ev.color) + 1;
        const auto k = s.counts(ev.color);
        for (std::size_t j = 0; j < n_agents_; ++j) key[2 + j] = k[j];
      }
      auto [it, inserted] = index.try_emplace(key, agent_.size());
      if (inserted) {
        agent_.push_back(static_cast<std::uint32_t>(ev.agent));
        producer_.push_back(static_cast<std::int32_t>(key[1]) - 1);
        multiplicity_.push_back(0.0);
        for (std::size_t j = 0; j < n_agents_; ++j)
          counts_.push_back(static_cast<double>(key[2 + j]));
      }
      multiplicity_[it->second] += 1.0;
      ++n_events_;
    }
    r.advance();
  }
}

double LikelihoodEvaluator::denominator(const std::vector<double>& theta) const {
  if (theta != cached_theta_) {
    double s = 0.0;
    for (std::uint64_t t = 1; t < horizon_; ++t)
      for (double th : theta) s += std::log(th + static_cast<double>(t));
    cached_theta_ = theta;
    cached_denominator_ = s;
  }
  return cached_denominator_;
}

double LikelihoodEvaluator::operator()(const InteractionSpec& spec) const {
  if (spec.n_agents() != n_agents_)
    throw ValidationError("LikelihoodEvaluator: spec has the wrong number of agents");
  const std::size_t n = n_agents_;
  double ll = 0.0;
  for (std::size_t k = 0; k < agent_.size(); ++k) {
    const std::size_t h = agent_[k];
    const double* c = counts_.data() + k * n;
    double num;
    if (producer_[k] < 0) {
      num = spec.theta[h];
      for (std::size_t j = 0; j < n; ++j) num += spec.gamma(j, h) * c[j];
    } else {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += spec.w(j, h) * c[j];
      num = s - spec.gamma(static_cast<std::size_t>(producer_[k]), h);
      if (num <= 1e-12 * s) return -std::numeric_limits<double>::infinity();
    }
    if (!(num > 0.0)) return -std::numeric_limits<double>::infinity();
    ll += multiplicity_[k] * std::log(num);
  }
  return ll - denominator(spec.theta);
}

}  // namespace urnet
