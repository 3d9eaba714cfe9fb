#include "urnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "urnet/errors.hpp"

namespace urnet {

std::vector<std::uint64_t> log_spaced_times(std::uint64_t t_min, std::uint64_t t_max,
                                            std::size_t n) {
  if (t_min == 0 || t_max < t_min) throw ValidationError("log_spaced_times: need 1 <= t_min <= t_max");
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  out.reserve(n);
  if (n == 1 || t_min == t_max) {
    out.push_back(t_max);
    return out;
  }
  const double a = std::log(static_cast<double>(t_min));
  const double b = std::log(static_cast<double>(t_max));
  for (std::size_t k = 0; k < n; ++k) {
    const double z = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    auto t = static_cast<std::uint64_t>(std::llround(std::exp(z)));
    t = std::clamp(t, t_min, t_max);
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  out.back() = t_max;
  return out;
}

Trajectories trajectories(EventView log, std::span<const std::uint64_t> sample_times) {
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] == 0 || sample_times[k] > log.horizon)
      throw ValidationError("trajectories: sample time " + std::to_string(sample_times[k]) +
                            " outside [1, " + std::to_string(log.horizon) + "]");
    if (k && sample_times[k] <= sample_times[k - 1])
      throw ValidationError("trajectories: sample times must be strictly increasing");
  }
  const std::size_t n = log.n_agents;
  Trajectories out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.d_star.assign(n, {});
  out.d.assign(n, {});
  for (std::size_t h = 0; h < n; ++h) {
    out.d_star[h].reserve(sample_times.size());
    out.d[h].reserve(sample_times.size());
  }
  out.d_star_total.reserve(sample_times.size());

  Replayer r(log);
  std::size_t next = 0;
  while (!r.done() && next < sample_times.size()) {
    r.advance();
    const auto& s = r.state();
    if (s.t() == sample_times[next]) {
      for (std::size_t h = 0; h < n; ++h) {
        out.d_star[h].push_back(s.d_star(h));
        out.d[h].push_back(s.d(h));
      }
      out.d_star_total.push_back(s.d_star_total());
      ++next;
    }
  }
  return out;
}

Trajectories trajectories(EventView log) {
  if (log.horizon == 0) return trajectories(log, std::span<const std::uint64_t>{});
  const auto times = log_spaced_times(1, log.horizon, kDefaultCheckpoints);
  return trajectories(log, times);
}

Trajectories trajectories_every_step(EventView log) {
  std::vector<std::uint64_t> times(log.horizon);
  std::iota(times.begin(), times.end(), std::uint64_t{1});
  return trajectories(log, times);
}

HeapsFit common_slope_fit(std::vector<std::vector<std::pair<double, double>>> points) {
  if (points.empty()) throw ValidationError("heaps fit: need at least one series");
  HeapsFit fit;
  double sxy = 0.0, sxx = 0.0;
  std::vector<double> xbar(points.size()), ybar(points.size());
  double grand = 0.0;
  std::size_t total = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    if (p.size() < 2) throw ValidationError("heaps fit: every series needs at least 2 points");
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : p) {
      sx += x;
      sy += y;
    }
    xbar[k] = sx / static_cast<double>(p.size());
    ybar[k] = sy / static_cast<double>(p.size());
    for (const auto& [x, y] : p) {
      sxy += (x - xbar[k]) * (y - ybar[k]);
      sxx += (x - xbar[k]) * (x - xbar[k]);
    }
    grand += sy;
    total += p.size();
  }
  if (sxx <= 0.0) throw ValidationError("heaps fit: degenerate range (all x equal)");
  grand /= static_cast<double>(total);
  fit.slope = sxy / sxx;
  fit.intercepts.resize(points.size());
  fit.series_r_squared.resize(points.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    fit.intercepts[k] = ybar[k] - fit.slope * xbar[k];
    double res_k = 0.0, tot_k = 0.0;
    for (const auto& [x, y] : points[k]) {
      const double e = y - (fit.intercepts[k] + fit.slope * x);
      res_k += e * e;
      tot_k += (y - ybar[k]) * (y - ybar[k]);
      ss_tot += (y - grand) * (y - grand);
    }
    ss_res += res_k;
    fit.series_r_squared[k] = tot_k > 0.0 ? 1.0 - res_k / tot_k : 1.0;
  }
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  fit.points = std::move(points);
  fit.n_points = fit.points.front().size();
  return fit;
}

HeapsFit heaps_fit(std::span<const Series> series, double t_min, std::size_t n_points) {
  if (series.empty()) throw ValidationError("heaps fit: need at least one series");
  double t_max = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    if (s.t.empty() || s.t.size() != s.value.size())
      throw ValidationError("heaps fit: series '" + s.name + "' is empty or ragged");
    t_max = std::min(t_max, s.t.back());
  }
  if (!(t_min >= 1.0) || !(t_min < t_max)) {
    std::ostringstream os;
    os << "heaps fit: degenerate range t_min=" << t_min << " >= T=" << t_max;
    throw ValidationError(os.str());
  }
  const auto targets = log_spaced_times(static_cast<std::uint64_t>(std::ceil(t_min)),
                                        static_cast<std::uint64_t>(std::floor(t_max)), n_points);

  std::vector<std::vector<std::pair<double, double>>> pts(series.size());
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    double last_t = -1.0;
    for (auto target : targets) {
      auto it = std::upper_bound(s.t.begin(), s.t.end(), static_cast<double>(target));
      if (it == s.t.begin()) continue;
      const auto i = static_cast<std::size_t>(std::distance(s.t.begin(), it) - 1);
      if (s.t[i] < t_min || s.t[i] == last_t) continue;
      if (!(s.value[i] > 0.0))
        throw ValidationError("heaps fit: series '" + s.name + "' is not positive at t=" +
                              std::to_string(s.t[i]));
      last_t = s.t[i];
      pts[k].emplace_back(std::log10(s.t[i]), std::log10(s.value[i]));
    }
  }
  HeapsFit fit = common_slope_fit(std::move(pts));
  for (const auto& s : series) fit.names.push_back(s.name);
  fit.t_min = t_min;
  fit.t_max = t_max;
  return fit;
}

double default_t_min(std::uint64_t horizon) {
  const double t = std::max(100.0, static_cast<double>(horizon) / 1000.0);
  if (t < static_cast<double>(horizon)) return t;
  return std::max(1.0, std::floor(static_cast<double>(horizon) / 10.0));
}

std::vector<Series> heaps_series(const Trajectories& traj, FitSeries which) {
  std::vector<double> t(traj.times.begin(), traj.times.end());
  std::vector<Series> out;
  auto add = [&](std::string name, const std::vector<std::uint64_t>& v) {
    out.push_back({std::move(name), t, std::vector<double>(v.begin(), v.end())});
  };
  for (std::size_t h = 0; h < traj.n_agents(); ++h)
    add("Dstar" + std::to_string(h + 1), traj.d_star[h]);
  if (which == FitSeries::StarAndAdopted)
    for (std::size_t h = 0; h < traj.n_agents(); ++h) add("D" + std::to_string(h + 1), traj.d[h]);
  return out;
}

HeapsFit fit_heaps(EventView log, const HeapsOptions& options) {
  const double t_min = options.t_min.value_or(default_t_min(log.horizon));
  if (!(t_min >= 1.0) || !(t_min < static_cast<double>(log.horizon))) {
    std::ostringstream os;
    os << "heaps fit: degenerate range t_min=" << t_min << " >= T=" << log.horizon;
    throw ValidationError(os.str());
  }
  const auto times = log_spaced_times(static_cast<std::uint64_t>(std::ceil(t_min)), log.horizon,
                                      options.n_points);
  const auto traj = trajectories(log, times);
  const auto series = heaps_series(traj, options.series);
  HeapsFit fit = heaps_fit(series, t_min, options.n_points);
  if (log.n_agents >= 2) fit.u_hat = fit.intercepts[0] - fit.intercepts[1];
  return fit;
}

RatioSeries ratio_series(const Trajectories& traj, Agent h, Agent j, std::optional<double> u_hat) {
  if (h >= traj.n_agents() || j >= traj.n_agents())
    throw ValidationError("ratio_series: agent out of range");
  RatioSeries out;
  out.u_hat = u_hat;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto a = traj.d_star[h][k];
    const auto b = traj.d_star[j][k];
    if (a == 0 || b == 0) continue;
    out.times.push_back(traj.times[k]);
    out.log_ratio.push_back(std::log10(static_cast<double>(a)) -
                            std::log10(static_cast<double>(b)));
  }
  return out;
}

double empirical_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(level, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

CompositionTable composition_quantiles(const SystemState& state, const CompositionOptions& options) {
  if (options.min_occupancy == 0) throw ValidationError("composition: min_occupancy must be >= 1");
  if (!(options.bin_width_log10 > 0.0)) throw ValidationError("composition: bin width must be > 0");
  if (options.agent >= state.n_agents()) throw ValidationError("composition: agent out of range");
  for (double l : options.levels)
    if (!(l >= 0.0 && l <= 1.0)) throw ValidationError("composition: quantile levels must be in [0,1]");

  CompositionTable table;
  table.levels = options.levels;
  const double base = std::log10(static_cast<double>(options.min_occupancy));
  auto edge = [&](std::size_t k) {
    return std::pow(10.0, base + options.bin_width_log10 * static_cast<double>(k));
  };

  std::vector<std::vector<double>> groups;
  for (ColorId c = 0; c < state.n_colors(); ++c) {
    const std::uint64_t occ = state.occupancy(c);
    if (occ < options.min_occupancy) continue;
    const double o = static_cast<double>(occ);
    auto k = static_cast<std::size_t>(
        std::max(0.0, std::floor((std::log10(o) - base) / options.bin_width_log10)));
    while (k > 0 && o < edge(k)) --k;
    while (o >= edge(k + 1)) ++k;
    if (groups.size() <= k) groups.resize(k + 1);
    groups[k].push_back(static_cast<double>(state.count(options.agent, c)) / o);
  }
  for (std::size_t k = 0; k < groups.size(); ++k) {
    CompositionBin bin{edge(k), edge(k + 1), groups[k].size(), {}};
    if (!groups[k].empty()) {
      std::sort(groups[k].begin(), groups[k].end());
      for (double l : options.levels) bin.quantiles.push_back(empirical_quantile(groups[k], l));
    }
    table.bins.push_back(std::move(bin));
  }
  return table;
}

CompositionTable composition_quantiles(EventView log, const CompositionOptions& options) {
  return composition_quantiles(replay(log), options);
}

}  // namespace urnet
