#include "urnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "urnet/errors.hpp"
#include "urnet/parallel.hpp"

namespace urnet {

Simulator::Simulator(InteractionSpec spec, std::uint64_t seed, SimulatorOptions options)
    : spec_(std::move(spec)),
      options_(options),
      state_(spec_.n_agents()),
      index_(spec_.n_agents()),
      rng_(seed),
      choices_(spec_.n_agents()) {
  auto violations = validate_spec(spec_);
  if (!violations.empty()) throw ValidationError("invalid interaction spec", std::move(violations));
}

Choice Simulator::choose(Agent h, double u) const {
  const double t = static_cast<double>(state_.t());
  const double mass = u * (spec_.theta[h] + t);
  const double new_mass = birth_mass(spec_, state_, h);
  if (mass < new_mass || index_[h].empty()) return std::nullopt;
  return static_cast<ColorId>(index_[h].find(mass - new_mass));
}

void Simulator::step(std::vector<DrawEvent>& out) {
  const std::size_t n = spec_.n_agents();
  for (std::size_t h = 0; h < n; ++h) choices_[h] = choose(h, rng_.uniform());
  apply(choices_, out);
}

void Simulator::apply(std::span<const Choice> choices, std::vector<DrawEvent>& out) {
  const std::size_t n = spec_.n_agents();
  state_.apply_step(choices, out);
  for (const DrawEvent& ev : out) {
    const Agent j = ev.agent;
    if (ev.new_system) {
      for (std::size_t h = 0; h < n; ++h) index_[h].push_back(spec_.lambda(j, h));
    } else {
      for (std::size_t h = 0; h < n; ++h)
        if (spec_.w(j, h) != 0.0) index_[h].add(ev.color, spec_.w(j, h));
    }
  }
  if (options_.checkpoint_interval && state_.t() % options_.checkpoint_interval == 0) checkpoint();
}

double Simulator::expected_weight_total(Agent h) const {
  double s = static_cast<double>(state_.t());
  for (std::size_t j = 0; j < spec_.n_agents(); ++j)
    s -= spec_.gamma(j, h) * static_cast<double>(state_.d_star(j));
  return s;
}

double Simulator::checkpoint() {
  const std::size_t n = spec_.n_agents();
  const double scale = std::max(1.0, static_cast<double>(state_.t()));
  double worst = 0.0;
  for (std::size_t h = 0; h < n; ++h) {
    const double drift = std::abs(index_[h].total() - expected_weight_total(h)) / scale;
    worst = std::max(worst, drift);
    if (drift > options_.abort_drift) {
      std::ostringstream os;
      os << "weight index of agent " << h + 1 << " drifted by " << drift * scale
         << " from its closed-form total at t=" << state_.t();
      throw ConsistencyError(os.str());
    }
  }
  std::vector<double> weights(state_.n_colors());
  for (std::size_t h = 0; h < n; ++h) {
    for (ColorId c = 0; c < weights.size(); ++c) weights[c] = old_color_weight(spec_, state_, h, c);
    index_[h].assign(weights);
  }
  return worst;
}

EventLog run(const InteractionSpec& spec, std::uint64_t horizon, std::uint64_t seed,
             SimulatorOptions options) {
  if (horizon == 0) throw ValidationError("horizon must be at least 1");
  Simulator sim(spec, seed, options);
  EventLog log{spec, seed, horizon, {}};
  log.events.reserve(horizon * spec.n_agents());
  std::vector<DrawEvent> step;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    sim.step(step);
    log.events.insert(log.events.end(), step.begin(), step.end());
  }
  return log;
}

std::vector<EventLog> replicate(const InteractionSpec& spec, std::uint64_t horizon,
                                std::span<const std::uint64_t> seeds, std::size_t jobs) {
  std::vector<EventLog> logs(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) { logs[i] = run(spec, horizon, seeds[i]); });
  return logs;
}

}  // namespace urnet
