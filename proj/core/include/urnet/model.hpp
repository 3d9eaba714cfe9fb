#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urnet/matrix.hpp"

namespace urnet {

// Agents are 0-based inside the library; every file format and CLI surface
// uses 1-based agent numbers.
using Agent = std::size_t;
// Dense color (item / table) ids, assigned in order of first appearance.
using ColorId = std::uint32_t;

// Normalized model parameters. gamma(j, h) is the influence of agent j on
// the novelty production of agent h; w(j, h) weights agent j's past
// adoptions when agent h picks an old color.
struct InteractionSpec {
  std::vector<double> theta;
  Matrix gamma;
  Matrix w;

  std::size_t n_agents() const noexcept { return theta.size(); }
  double lambda(Agent j, Agent h) const { return w(j, h) - gamma(j, h); }
  Matrix lambda_matrix() const { return w - gamma; }
};

// Integer urn parameters: initial balls N0_h, balls rho_{j,h} added to urn h
// per draw from urn j, of which nu_{j,h} are of brand-new colors when the
// draw was a novelty.
struct RawSpec {
  std::vector<std::int64_t> n0;
  std::vector<std::vector<std::int64_t>> rho;
  std::vector<std::vector<std::int64_t>> nu;
};

// Every broken invariant, with 1-based indices. Empty means valid.
std::vector<std::string> validate_spec(const InteractionSpec& spec);
std::vector<std::string> validate_raw(const RawSpec& raw);

// Builds a spec and throws ValidationError listing all violations.
InteractionSpec make_spec(std::vector<double> theta, Matrix gamma, Matrix w);

// theta_h = N0_h / rho_h, gamma = nu / rho_h, w = rho / rho_h with
// rho_h the column sum of rho.
InteractionSpec normalize_raw(const RawSpec& raw);

struct ColorRecord {
  ColorId id = 0;
  Agent producer = 0;
  std::vector<std::uint32_t> counts;
  std::uint64_t first_time = 0;
};

struct DrawEvent {
  std::uint64_t t = 0;  // 1-based time-step
  std::uint32_t agent = 0;
  ColorId color = 0;
  bool new_system = false;
  bool new_agent = false;

  friend bool operator==(const DrawEvent&, const DrawEvent&) = default;
};

// What one agent draws at a step: nullopt for a system-new color, otherwise
// an existing color id.
using Choice = std::optional<ColorId>;

// Counts K_t(j, c), producers j*(c), D*_{t,h} and D_{t,h}. Spec-free: the
// same state replays simulated runs and observed logs alike.
class SystemState {
 public:
  explicit SystemState(std::size_t n_agents);

  std::size_t n_agents() const noexcept { return n_agents_; }
  std::uint64_t t() const noexcept { return t_; }
  std::size_t n_colors() const noexcept { return producer_.size(); }

  std::uint32_t count(Agent j, ColorId c) const { return counts_[c * n_agents_ + j]; }
  std::span<const std::uint32_t> counts(ColorId c) const {
    return {counts_.data() + std::size_t{c} * n_agents_, n_agents_};
  }
  std::uint64_t occupancy(ColorId c) const;
  Agent producer(ColorId c) const { return producer_[c]; }
  std::uint64_t first_time(ColorId c) const { return first_time_[c]; }
  ColorRecord color(ColorId c) const;

  std::span<const std::uint64_t> d_star() const noexcept { return d_star_; }
  std::span<const std::uint64_t> d() const noexcept { return d_; }
  std::uint64_t d_star(Agent h) const { return d_star_[h]; }
  std::uint64_t d(Agent h) const { return d_[h]; }
  std::uint64_t d_star_total() const noexcept { return n_colors(); }

  // Applies one simultaneous step. All choices refer to the state before the
  // step; system-new choices get fresh ids in agent order. Writes exactly
  // n_agents events into `out` (resized).
  void apply_step(std::span<const Choice> choices, std::vector<DrawEvent>& out);
  std::vector<DrawEvent> apply_step(std::span<const Choice> choices);

  void reserve_colors(std::size_t n);

 private:
  std::size_t n_agents_;
  std::uint64_t t_ = 0;
  std::vector<std::uint32_t> counts_;
  std::vector<Agent> producer_;
  std::vector<std::uint64_t> first_time_;
  std::vector<std::uint64_t> d_star_;
  std::vector<std::uint64_t> d_;
};

// Numerator of the birth probability: theta_h + sum_j gamma_{j,h} D*_{t,j}.
double birth_mass(const InteractionSpec& spec, const SystemState& state, Agent h);
// Numerator of the old-color probability:
// sum_j w_{j,h} K_t(j,c) - gamma_{j*(c),h}.
double old_color_weight(const InteractionSpec& spec, const SystemState& state, Agent h,
                        ColorId c);

double birth_probability(const InteractionSpec& spec, const SystemState& state, Agent h);
// Throws std::out_of_range for an unknown color id.
double old_color_probability(const InteractionSpec& spec, const SystemState& state, Agent h,
                             ColorId c);

}  // namespace urnet
