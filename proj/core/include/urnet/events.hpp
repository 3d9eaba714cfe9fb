#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urnet/model.hpp"

namespace urnet {

// Simulator output: the full draw history plus provenance.
struct EventLog {
  InteractionSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t horizon = 0;
  std::vector<DrawEvent> events;  // grouped by t, agents in order within a step
};

// An observed N-category stream after validation. Items are re-keyed to
// dense ids in order of first appearance; item_keys maps them back.
struct ObservationLog {
  std::size_t n_agents = 0;
  std::uint64_t horizon = 0;
  std::vector<DrawEvent> events;
  std::vector<std::string> item_keys;

  friend bool operator==(const ObservationLog&, const ObservationLog&) = default;
};

// Non-owning view shared by analysis and estimation.
struct EventView {
  std::size_t n_agents = 0;
  std::uint64_t horizon = 0;
  std::span<const DrawEvent> events;
};

inline EventView view(const EventLog& log) {
  return {log.spec.n_agents(), log.horizon, log.events};
}
inline EventView view(const ObservationLog& log) {
  return {log.n_agents, log.horizon, log.events};
}

// Steps through a log, checking every step against the model's bookkeeping
// (dense new ids, flags, one event per agent) before applying it.
class Replayer {
 public:
  explicit Replayer(EventView v);

  bool done() const noexcept { return step_ >= view_.horizon; }
  // Events of the next step; the state still reflects the previous step.
  std::span<const DrawEvent> peek() const;
  void advance();
  const SystemState& state() const noexcept { return state_; }

 private:
  EventView view_;
  std::uint64_t step_ = 0;
  SystemState state_;
  std::vector<Choice> choices_;
  std::vector<DrawEvent> scratch_;
};

// Full replay; throws ValidationError on the first inconsistency.
SystemState replay(EventView v);

// Swaps the labels of agents a and b (events are re-sorted and item ids
// re-densified). Used to relabel two-category data.
ObservationLog swap_agents(EventView v, Agent a, Agent b);

ObservationLog to_observations(const EventLog& log);

}  // namespace urnet
