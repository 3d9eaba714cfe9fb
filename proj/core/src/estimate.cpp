#include "urnet/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "urnet/errors.hpp"
#include "urnet/likelihood.hpp"
#include "urnet/optimize.hpp"
#include "urnet/parallel.hpp"
#include "urnet/rng.hpp"
#include "urnet/simulator.hpp"
#include "urnet/spectral.hpp"

namespace urnet {

namespace {

constexpr double kLogThetaLo = -2.0;
constexpr double kLogThetaHi = 4.0;

// Maps a search point to family parameters and theta, or nullopt when it
// leaves the domain.
class Parametrization {
 public:
  Parametrization(double gamma_star, double r, const MleOptions& o)
      : gamma_star_(gamma_star), r_(r), symmetric_(o.symmetric),
        estimate_theta_(o.estimate_theta), theta_(o.theta),
        x1_limit_(symmetric_x1_limit(gamma_star, r)) {}

  std::size_t dims() const { return (symmetric_ ? 2 : 4) + (estimate_theta_ ? 2 : 0); }

  // Box used for start points and initial simplex orientation.
  double lo(std::size_t i) const { return i < family_dims() ? 0.0 : kLogThetaLo; }
  double hi(std::size_t i) const {
    if (i >= family_dims()) return kLogThetaHi;
    return symmetric_ && i == 0 ? x1_limit_ : 1.0;
  }

  std::optional<FamilyParams> params(std::span<const double> x) const {
    FamilyParams p;
    p.gamma_star = gamma_star_;
    p.r = r_;
    if (symmetric_) {
      if (!(x[0] > 0.0 && x[0] < x1_limit_) || !(x[1] >= 0.0 && x[1] <= 1.0)) return std::nullopt;
      p = symmetric_params(gamma_star_, r_, x[0], x[1]);
    } else {
      p.x1 = x[0];
      p.x2 = x[1];
      p.y1 = x[2];
      p.y2 = x[3];
    }
    if (!in_domain(p)) return std::nullopt;
    return p;
  }

  std::vector<double> theta(std::span<const double> x) const {
    if (!estimate_theta_) return theta_;
    const std::size_t k = family_dims();
    return {std::pow(10.0, x[k]), std::pow(10.0, x[k + 1])};
  }

  std::optional<InteractionSpec> spec(std::span<const double> x) const {
    if (estimate_theta_) {
      const std::size_t k = family_dims();
      for (std::size_t i = k; i < k + 2; ++i)
        if (!(x[i] >= kLogThetaLo && x[i] <= kLogThetaHi)) return std::nullopt;
    }
    const auto p = params(x);
    if (!p) return std::nullopt;
    try {
      return family_spec(*p, theta(x));
    } catch (const ValidationError&) {
      return std::nullopt;  // e.g. a zero diagonal of Lambda at y = 1
    }
  }

  // Moves a start point into the domain by scanning the y-coordinates on a
  // grid, nearest first.
  std::optional<std::vector<double>> repair(std::vector<double> x) const {
    if (spec(x)) return x;
    const std::size_t n_y = symmetric_ ? 1 : 2;
    const std::size_t first_y = symmetric_ ? 1 : 2;
    for (int step = 1; step <= 200; ++step) {
      for (double sign : {-1.0, 1.0}) {
        auto y = x;
        for (std::size_t i = 0; i < n_y; ++i)
          y[first_y + i] = std::clamp(x[first_y + i] + sign * step * 0.005, 0.0, 1.0);
        if (spec(y)) return y;
      }
    }
    return std::nullopt;
  }

 private:
  std::size_t family_dims() const { return symmetric_ ? 2 : 4; }

  double gamma_star_;
  double r_;
  bool symmetric_;
  bool estimate_theta_;
  std::vector<double> theta_;
  double x1_limit_;
};

MleResult finish(EventView obs, const Parametrization& param, const NelderMeadResult& best,
                 bool converged, std::size_t restarts, std::size_t evaluations) {
  MleResult res;
  res.converged = converged;
  res.n_restarts_used = restarts;
  res.evaluations = evaluations;
  const auto spec = param.spec(best.x);
  if (!spec) throw ConsistencyError("fit_mle: no feasible point found");
  res.params = *param.params(best.x);
  res.theta = spec->theta;
  res.gamma_hat = spec->gamma;
  res.w_hat = spec->w;
  try {
    res.log_likelihood = log_likelihood(obs, *spec);
  } catch (const ImpossibleObservation&) {
    res.log_likelihood = -std::numeric_limits<double>::infinity();
  }
  return res;
}

Matrix swapped(const Matrix& m) {
  Matrix s(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) s(i, j) = m(1 - i, 1 - j);
  return s;
}

}  // namespace

MleResult fit_mle(EventView obs, double gamma_star, double r, const MleOptions& options) {
  if (obs.n_agents != 2) throw ValidationError("fit_mle needs a two-agent log");
  if (!(gamma_star > 0.0 && gamma_star < 1.0) || !(r > 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "fit_mle: gamma_star = " << gamma_star << " must lie in (0,1) and r = " << r
       << " in (0,1]";
    throw ValidationError(os.str());
  }
  if (options.theta.size() != 2) throw ValidationError("fit_mle: theta must have two entries");
  if (options.restarts == 0) throw ValidationError("fit_mle: restarts must be positive");

  const Parametrization param(gamma_star, r, options);
  const LikelihoodEvaluator evaluator(obs);
  const std::size_t dims = param.dims();

  auto grid = latin_grid(options.restarts, dims, options.seed);
  std::vector<NelderMeadResult> runs(options.restarts);
  std::vector<char> started(options.restarts, 0);

  parallel_for(options.restarts, options.jobs, [&](std::size_t k) {
    std::vector<double> x0(dims);
    for (std::size_t i = 0; i < dims; ++i)
      x0[i] = param.lo(i) + grid[k][i] * (param.hi(i) - param.lo(i));
    const auto start = param.repair(x0);
    if (!start) return;
    std::vector<double> steps(dims);
    for (std::size_t i = 0; i < dims; ++i) {
      const double mid = 0.5 * (param.lo(i) + param.hi(i));
      const double step = 0.1 * (param.hi(i) - param.lo(i));
      steps[i] = (*start)[i] > mid ? -step : step;
    }
    // The evaluator caches its theta denominator, so each restart owns a copy.
    const LikelihoodEvaluator local = evaluator;
    const Objective f = [&](std::span<const double> x) {
      const auto spec = param.spec(x);
      if (!spec) return kInfeasiblePenalty;
      const double ll = local(*spec);
      return std::isfinite(ll) ? -ll : kInfeasiblePenalty;
    };
    NelderMeadOptions nm;
    nm.tolerance = options.tolerance;
    nm.max_evaluations = options.max_evaluations;
    runs[k] = nelder_mead(f, *start, steps, nm);
    started[k] = 1;
  });

  std::optional<std::size_t> best;
  std::size_t evaluations = 0;
  bool any_converged = false;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (!started[k]) continue;
    evaluations += runs[k].evaluations;
    any_converged = any_converged || runs[k].converged;
  }
  // Best converged restart; the best of all when none converged.
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (!started[k] || (any_converged && !runs[k].converged)) continue;
    if (!best || runs[k].value < runs[*best].value) best = k;
  }
  if (!best || runs[*best].value >= kInfeasiblePenalty)
    throw ConsistencyError("fit_mle: every restart was infeasible");
  return finish(obs, param, runs[*best], any_converged, options.restarts, evaluations);
}

PipelineResult fit_family(EventView obs, double gamma_star, double u, const MleOptions& options) {
  PipelineResult res;
  res.gamma_star_hat = gamma_star;
  res.u_hat = u;
  res.r_hat = std::pow(10.0, u);
  res.relabeled = u > 0.0;
  if (!res.relabeled) {
    res.mle = fit_mle(obs, gamma_star, res.r_hat, options);
    return res;
  }
  const ObservationLog swapped_log = swap_agents(obs, 0, 1);
  MleOptions o = options;
  if (o.theta.size() == 2) std::swap(o.theta[0], o.theta[1]);
  MleResult m = fit_mle(view(swapped_log), gamma_star, std::pow(10.0, -u), o);
  m.gamma_hat = swapped(m.gamma_hat);
  m.w_hat = swapped(m.w_hat);
  if (m.theta.size() == 2) std::swap(m.theta[0], m.theta[1]);
  res.mle = std::move(m);
  return res;
}

PipelineResult pipeline(EventView obs, const PipelineOptions& options) {
  if (obs.n_agents != 2) throw ValidationError("pipeline needs a two-agent log");
  HeapsFit fit = fit_heaps(obs, options.heaps);
  if (!fit.u_hat) throw ConsistencyError("pipeline: no D* intercepts");
  if (!(fit.slope > 0.0 && fit.slope < 1.0)) {
    std::ostringstream os;
    os << "pipeline: estimated gamma_star = " << fit.slope << " outside (0,1)";
    throw ValidationError(os.str());
  }
  PipelineResult res = fit_family(obs, fit.slope, *fit.u_hat, options.mle);
  res.heaps = std::move(fit);
  return res;
}

InteractionSpec study_spec(const StudyRow& row, double theta) {
  return make_spec({theta, theta}, Matrix{{row.g11, row.g12}, {row.g12, row.g22}},
                   Matrix{{1.0 - row.w12, row.w12}, {row.w12, 1.0 - row.w12}});
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (values.empty()) {
    s.mean = s.sd = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n < 2) {
    s.sd = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

std::vector<StudyRowResult> simulation_study(const std::vector<StudyRow>& rows,
                                             const StudyOptions& options) {
  if (options.reps == 0) throw ValidationError("study: reps must be positive");
  std::vector<StudyRowResult> out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const InteractionSpec spec = study_spec(rows[k], options.theta_data);
    const SpectralSummary truth = leading_eigen(spec.gamma);
    StudyRowResult rr;
    rr.row = rows[k];
    rr.gamma_star = truth.gamma_star;
    rr.r = truth.u[0] / truth.u[1];

    PipelineOptions popt = options.pipeline;
    popt.mle.theta = {options.theta_likelihood, options.theta_likelihood};
    popt.mle.jobs = 1;
    const std::uint64_t row_seed = substream_seed(options.seed, k);

    std::vector<std::optional<PipelineResult>> fits(options.reps);
    std::vector<std::string> errors(options.reps);
    parallel_for(options.reps, options.jobs, [&](std::size_t i) {
      try {
        const EventLog log = run(spec, options.horizon, substream_seed(row_seed, i));
        if (options.true_spectral)
          fits[i] = fit_family(view(log), rr.gamma_star, std::log10(rr.r), popt.mle);
        else
          fits[i] = pipeline(view(log), popt);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });

    std::vector<double> g11, g22, g12, w12, gs, r;
    for (std::size_t i = 0; i < options.reps; ++i) {
      if (!fits[i]) {
        ++rr.n_failed;
        rr.failures.push_back("rep " + std::to_string(i) + ": " + errors[i]);
        continue;
      }
      const PipelineResult& f = *fits[i];
      g11.push_back(f.mle.g11());
      g22.push_back(f.mle.g22());
      g12.push_back(f.mle.g12());
      w12.push_back(f.mle.w12());
      gs.push_back(f.gamma_star_hat);
      r.push_back(f.r_hat);
    }
    rr.g11 = summarize(g11);
    rr.g22 = summarize(g22);
    rr.g12 = summarize(g12);
    rr.w12 = summarize(w12);
    rr.gamma_star_hat = summarize(gs);
    rr.r_hat = summarize(r);
    out.push_back(std::move(rr));
  }
  return out;
}

}  // namespace urnet
