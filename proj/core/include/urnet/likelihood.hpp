#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "urnet/events.hpp"
#include "urnet/model.hpp"

namespace urnet {

// Sum over t = 1..T-1 and agents h of log Z*_{t,h} when the draw at t+1 is
// system-new, else log P_t(h, c). Replays the log through model-core.
// Throws ImpossibleObservation naming (t+1, h, item) for a zero-probability
// event.
double log_likelihood(EventView obs, const InteractionSpec& spec);

// Same value from sufficient statistics: every event is reduced to its
// agent, kind and the count vector its numerator depends on, identical
// terms are merged, and the theta-only denominators are summed separately.
// Repeated evaluations cost O(distinct terms).
class LikelihoodEvaluator {
 public:
  explicit LikelihoodEvaluator(EventView obs);

  std::size_t n_agents() const noexcept { return n_agents_; }
  std::size_t n_terms() const noexcept { return agent_.size(); }
  std::size_t n_events() const noexcept { return n_events_; }

  // -infinity when some observed event has probability zero.
  double operator()(const InteractionSpec& spec) const;

 private:
  double denominator(const std::vector<double>& theta) const;

  std::size_t n_agents_ = 0;
  std::uint64_t horizon_ = 0;
  std::size_t n_events_ = 0;
  // Term k: agent_[k]; producer_[k] (-1 for a birth); multiplicity_[k];
  // counts at counts_[k * n_agents_ ...] (D*_t for births, K_t(., c) else).
  std::vector<std::uint32_t> agent_;
  std::vector<std::int32_t> producer_;
  std::vector<double> multiplicity_;
  std::vector<double> counts_;
  mutable std::vector<double> cached_theta_;
  mutable double cached_denominator_ = 0.0;
};

}  // namespace urnet
