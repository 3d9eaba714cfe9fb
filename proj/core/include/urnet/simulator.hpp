#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urnet/events.hpp"
#include "urnet/model.hpp"
#include "urnet/rng.hpp"
#include "urnet/weight_index.hpp"

namespace urnet {

struct SimulatorOptions {
  // Weight indexes are checked against their closed-form totals and rebuilt
  // from the integer counts every this many steps.
  std::uint64_t checkpoint_interval = 10'000;
  // Relative drift (to max(1, t)) that aborts the run.
  double abort_drift = 1e-6;
};

// Forward simulation of the interacting urn system. One WeightIndex per
// agent h holds weight_h(c) = sum_j w_{j,h} K_t(j,c) - gamma_{j*(c),h}.
class Simulator {
 public:
  Simulator(InteractionSpec spec, std::uint64_t seed, SimulatorOptions options = {});

  const InteractionSpec& spec() const noexcept { return spec_; }
  const SystemState& state() const noexcept { return state_; }

  // The draw of agent h for a uniform u in [0, 1), from the current
  // (pre-step) state. Pure: does not touch the RNG or the state.
  Choice choose(Agent h, double u) const;

  // Draws for every agent from the current state, then applies them.
  // `out` receives the step's n_agents events.
  void step(std::vector<DrawEvent>& out);
  // Applies externally chosen draws (e.g. from choose()).
  void apply(std::span<const Choice> choices, std::vector<DrawEvent>& out);

  double weight_total(Agent h) const { return index_[h].total(); }
  // t - sum_j gamma_{j,h} D*_{t,j}
  double expected_weight_total(Agent h) const;
  const WeightIndex& weight_index(Agent h) const { return index_[h]; }

  // Verifies totals (throws ConsistencyError past abort_drift) and rebuilds
  // every weight from the integer counts. Returns the worst relative drift
  // seen before the rebuild.
  double checkpoint();

 private:
  InteractionSpec spec_;
  SimulatorOptions options_;
  SystemState state_;
  std::vector<WeightIndex> index_;
  Rng rng_;
  std::vector<Choice> choices_;
};

// Runs T steps from the empty state; the log has N*T events.
EventLog run(const InteractionSpec& spec, std::uint64_t horizon, std::uint64_t seed,
             SimulatorOptions options = {});

// Independent runs, one per seed, in seed order. jobs = 0 uses all cores.
std::vector<EventLog> replicate(const InteractionSpec& spec, std::uint64_t horizon,
                                std::span<const std::uint64_t> seeds, std::size_t jobs = 0);

}  // namespace urnet
