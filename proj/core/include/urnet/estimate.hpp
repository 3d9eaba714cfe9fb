#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "urnet/events.hpp"
#include "urnet/families.hpp"
#include "urnet/matrix.hpp"
#include "urnet/model.hpp"
#include "urnet/stats.hpp"

namespace urnet {

struct MleOptions {
  // Symmetric fits search (x1, y1) only; x2 and y2 follow from
  // gamma_12 = gamma_21 and w_12 = w_21.
  bool symmetric = true;
  std::vector<double> theta{1.0, 1.0};
  // Also search log10(theta_h) in [-2, 4]. Experimental.
  bool estimate_theta = false;
  std::size_t restarts = 8;
  double tolerance = 1e-6;
  std::size_t max_evaluations = 4000;  // per restart
  std::uint64_t seed = 1;              // Latin grid of start points
  std::size_t jobs = 1;                // restarts run concurrently
};

struct MleResult {
  FamilyParams params;
  std::vector<double> theta;
  Matrix gamma_hat;
  Matrix w_hat;
  double log_likelihood = 0.0;  // recomputed exactly at the optimum
  bool converged = false;
  std::size_t n_restarts_used = 0;
  std::size_t evaluations = 0;

  double g11() const { return gamma_hat(0, 0); }
  double g22() const { return gamma_hat(1, 1); }
  double g12() const { return gamma_hat(0, 1); }
  double w12() const { return w_hat(0, 1); }
};

// Penalty returned to the simplex for infeasible or impossible points.
constexpr double kInfeasiblePenalty = 1e12;

// Maximizes the log-likelihood over the two-agent family with
// (gamma_star, r) fixed. Requires gamma_star in (0,1) and r in (0,1].
MleResult fit_mle(EventView obs, double gamma_star, double r, const MleOptions& options = {});

struct PipelineOptions {
  HeapsOptions heaps;
  MleOptions mle;
};

struct PipelineResult {
  HeapsFit heaps;
  double gamma_star_hat = 0.0;
  double u_hat = 0.0;  // original labels
  double r_hat = 0.0;  // 10^u_hat, original labels
  // True when u_hat > 0, so the fit ran with agents 1 and 2 swapped.
  // Matrices in `mle` are always reported in the original labels.
  bool relabeled = false;
  MleResult mle;
};

// Common-slope Heaps fit gives gamma_star_hat and u_hat (difference of the
// D* intercepts); then the family fit with (gamma_star_hat, 10^-|u_hat|).
PipelineResult pipeline(EventView obs, const PipelineOptions& options = {});

// The family fit alone, from a given (gamma_star, u = log10 r). Relabels when
// u > 0 and maps the estimates back.
PipelineResult fit_family(EventView obs, double gamma_star, double u, const MleOptions& options);

// A symmetric generating spec in the layout of the simulation tables.
struct StudyRow {
  double g11 = 0.0;
  double g22 = 0.0;
  double g12 = 0.0;
  double w12 = 0.0;
};

// Gamma = [[g11, g12], [g12, g22]], W = [[1-w12, w12], [w12, 1-w12]].
InteractionSpec study_spec(const StudyRow& row, double theta);

struct StudyOptions {
  std::size_t reps = 100;
  std::uint64_t horizon = 10000;
  double theta_data = 1.0;
  double theta_likelihood = 1.0;
  std::uint64_t seed = 1;
  // Supply the true (gamma_star, r) of the generating Gamma instead of the
  // Heaps-fit estimates.
  bool true_spectral = false;
  PipelineOptions pipeline;  // mle.theta is replaced by theta_likelihood
  std::size_t jobs = 1;
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample sd; NaN for fewer than two values
  std::size_t n = 0;
};

Summary summarize(const std::vector<double>& values);

struct StudyRowResult {
  StudyRow row;
  double gamma_star = 0.0;  // of the generating Gamma
  double r = 0.0;           // u_1 / u_2 of the generating Gamma
  Summary g11, g22, g12, w12, gamma_star_hat, r_hat;
  std::size_t n_failed = 0;
  std::vector<std::string> failures;
};

// Replication i of row k uses seed substream_seed(substream_seed(seed, k), i).
std::vector<StudyRowResult> simulation_study(const std::vector<StudyRow>& rows,
                                             const StudyOptions& options);

}  // namespace urnet
