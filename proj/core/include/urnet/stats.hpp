#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "urnet/events.hpp"
#include "urnet/model.hpp"

namespace urnet {

// D*_{t,h}, D_{t,h} and D*_t at sampled time-steps (counts after step t).
struct Trajectories {
  std::vector<std::uint64_t> times;
  std::vector<std::vector<std::uint64_t>> d_star;  // [agent][sample]
  std::vector<std::vector<std::uint64_t>> d;       // [agent][sample]
  std::vector<std::uint64_t> d_star_total;

  std::size_t n_agents() const noexcept { return d_star.size(); }
};

// Up to n unique integer times, log-uniform on [t_min, t_max], endpoints
// included.
std::vector<std::uint64_t> log_spaced_times(std::uint64_t t_min, std::uint64_t t_max,
                                            std::size_t n);

constexpr std::size_t kDefaultCheckpoints = 1000;

// sample_times must be sorted, unique and within [1, horizon].
Trajectories trajectories(EventView log, std::span<const std::uint64_t> sample_times);
Trajectories trajectories(EventView log);  // kDefaultCheckpoints log-spaced
Trajectories trajectories_every_step(EventView log);

struct Series {
  std::string name;
  std::vector<double> t;
  std::vector<double> value;
};

struct HeapsFit {
  double slope = 0.0;
  std::vector<std::string> names;
  std::vector<double> intercepts;        // log10 scale, one per series
  double r_squared = 0.0;                // pooled
  std::vector<double> series_r_squared;  // supplementary, per series with the shared slope
  std::optional<double> u_hat;           // intercept(D*_1) - intercept(D*_2)
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n_points = 0;
  // Sampled (log10 t, log10 value) per series, for plot output.
  std::vector<std::vector<std::pair<double, double>>> points;
};

// Least squares with one shared slope and per-series intercepts over
// already-transformed (x, y) points. Pooled R^2 is 1 - SS_res / SS_tot
// with SS_tot about the grand mean.
HeapsFit common_slope_fit(std::vector<std::vector<std::pair<double, double>>> points);

// Samples every series at n_points log-uniform times on [t_min, T] (T the
// last time covered by all series; step-function lookup) and fits in
// log10-log10. Throws ValidationError for t_min >= T or non-positive values.
HeapsFit heaps_fit(std::span<const Series> series, double t_min, std::size_t n_points = 200);

enum class FitSeries {
  StarAndAdopted,  // D*_h and D_h for every agent
  StarOnly,        // D*_h only
};

struct HeapsOptions {
  std::optional<double> t_min;  // default_t_min(horizon) when unset
  std::size_t n_points = 200;
  FitSeries series = FitSeries::StarAndAdopted;
};

// max(100, T / 1000), falling back to T / 10 for short logs.
double default_t_min(std::uint64_t horizon);

std::vector<Series> heaps_series(const Trajectories& traj, FitSeries which);

// Trajectories at the fit grid, then heaps_fit; u_hat is set when N >= 2.
HeapsFit fit_heaps(EventView log, const HeapsOptions& options = {});

struct RatioSeries {
  std::vector<std::uint64_t> times;
  std::vector<double> log_ratio;  // log10 D*_{t,h} - log10 D*_{t,j}
  std::optional<double> u_hat;
};

// Samples where either count is zero are skipped.
RatioSeries ratio_series(const Trajectories& traj, Agent h, Agent j,
                         std::optional<double> u_hat = std::nullopt);

struct CompositionOptions {
  std::uint64_t min_occupancy = 10;
  double bin_width_log10 = 0.5;
  std::vector<double> levels{0.05, 0.25, 0.5, 0.75, 0.95};
  Agent agent = 0;  // proportion K(agent, c) / sum_j K(j, c)
};

struct CompositionBin {
  double lo = 0.0;  // occupancy interval [lo, hi)
  double hi = 0.0;
  std::size_t count = 0;
  std::vector<double> quantiles;  // empty when count == 0
};

struct CompositionTable {
  std::vector<double> levels;
  std::vector<CompositionBin> bins;
};

// Linear interpolation between order statistics ("type 7"). `sorted` must
// be ascending and non-empty.
double empirical_quantile(std::span<const double> sorted, double level);

CompositionTable composition_quantiles(const SystemState& state,
                                       const CompositionOptions& options = {});
CompositionTable composition_quantiles(EventView log, const CompositionOptions& options = {});

}  // namespace urnet
