// One line per acceptance criterion: PASS/FAIL, the measured values and the
// pinned tolerance. Exit status is the number of failures (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "urnet/errors.hpp"
#include "urnet/estimate.hpp"
#include "urnet/ingest.hpp"
#include "urnet/io.hpp"
#include "urnet/model.hpp"
#include "urnet/rng.hpp"
#include "urnet/simulator.hpp"
#include "urnet/spectral.hpp"
#include "urnet/stats.hpp"
#include "urnet_cli/cli.hpp"

namespace fs = std::filesystem;
using namespace urnet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.1fs of %.0fs]\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// The ten generating rows of the simulation table and the printed
// (gamma_star, r) of each.
const std::vector<StudyRow> kRows{
    {0.10, 0.40, 0.10, 0.50}, {0.10, 0.40, 0.10, 0.25}, {0.25, 0.40, 0.10, 0.50},
    {0.25, 0.40, 0.10, 0.25}, {0.10, 0.40, 0.25, 0.50}, {0.10, 0.40, 0.25, 0.25},
    {0.25, 0.40, 0.25, 0.50}, {0.25, 0.40, 0.25, 0.25}, {0.10, 0.40, 0.40, 0.50},
    {0.25, 0.40, 0.40, 0.50}};
const double kPrintedGammaStar[] = {0.43, 0.43, 0.45, 0.45, 0.54, 0.54, 0.59, 0.59, 0.68, 0.73};
const double kPrintedR[] = {0.30, 0.30, 0.50, 0.50, 0.57, 0.57, 0.74, 0.74, 0.69, 0.83};

Matrix row_gamma(const StudyRow& r) { return {{r.g11, r.g12}, {r.g12, r.g22}}; }

// Random valid spec: W column-stochastic with a positive diagonal and some
// structural zeros, Gamma = W * U elementwise with column sums below 1.
InteractionSpec random_spec(std::size_t n, Rng& rng) {
  std::vector<double> theta(n);
  for (auto& t : theta) t = 0.2 + 4.0 * rng.uniform();
  Matrix w(n, n), g(n, n);
  for (std::size_t h = 0; h < n; ++h) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool zero = j != h && rng.uniform() < 0.25;
      w(j, h) = zero ? 0.0 : 0.05 + rng.uniform();
      s += w(j, h);
    }
    for (std::size_t j = 0; j < n; ++j) w(j, h) /= s;
    double last = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) last -= w(j, h);
    w(n - 1, h) = last;
    for (std::size_t j = 0; j < n; ++j) g(j, h) = w(j, h) * 0.95 * rng.uniform();
  }
  return make_spec(theta, g, w);
}

struct RowRuns {
  std::vector<HeapsFit> fits;
  std::vector<double> terminal_log_ratio;
  std::vector<CompositionTable> composition;
};

RowRuns row1_runs() {
  const InteractionSpec spec = study_spec(kRows[0], 1.0);
  RowRuns out;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const EventLog log = run(spec, 100'000, seed);
    out.fits.push_back(fit_heaps(view(log)));
    const SystemState s = replay(view(log));
    out.terminal_log_ratio.push_back(std::log10(double(s.d_star(0)) / double(s.d_star(1))));
    CompositionOptions co;
    co.min_occupancy = 1000;
    co.bin_width_log10 = 10.0;  // a single bin: every table with occupancy >= 10^3
    out.composition.push_back(composition_quantiles(s, co));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

// Letters-only word for an integer, so the tokenizer keeps it whole.
std::string word(std::uint64_t id) {
  std::string w = "wq";
  do {
    w.push_back(static_cast<char>('a' + id % 26));
    id /= 26;
  } while (id);
  return w;
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / fmt("urnet-acceptance-%llu",
      static_cast<unsigned long long>(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(tmp);

  criterion(1, "normalization over random reachable states", 10, [] {
    Rng rng(20240501);
    const std::size_t sizes[] = {1, 2, 3, 5};
    double worst = 0.0, worst_range = 0.0;
    std::size_t states = 0;
    for (std::size_t k = 0; k < 10; ++k) {
      const InteractionSpec spec = random_spec(sizes[k % 4], rng);
      Simulator sim(spec, substream_seed(99, k));
      std::vector<std::uint64_t> checks(100);
      for (auto& c : checks) c = rng.below(3000);
      std::sort(checks.begin(), checks.end());
      std::vector<DrawEvent> ev;
      for (std::uint64_t c : checks) {
        while (sim.state().t() < c) sim.step(ev);
        const SystemState& s = sim.state();
        for (Agent h = 0; h < spec.n_agents(); ++h) {
          double total = birth_probability(spec, s, h);
          for (ColorId c2 = 0; c2 < s.n_colors(); ++c2) {
            const double p = old_color_probability(spec, s, h, c2);
            if (p < 0.0 || p > 1.0) worst_range = std::max(worst_range, std::abs(p));
            total += p;
          }
          worst = std::max(worst, std::abs(total - 1.0));
        }
        ++states;
      }
    }
    return Outcome{worst <= 1e-12 && worst_range == 0.0 && states == 1000,
                   fmt("%zu states, max |sum - 1| = %.2e (tol 1e-12), out-of-range probabilities: %s",
                       states, worst, worst_range == 0.0 ? "none" : "some")};
  });

  criterion(2, "single-agent reduction, Heaps slope of D_t", 60, [] {
    bool ok = true;
    std::string detail;
    for (double gamma : {0.2, 0.4, 0.8}) {
      const InteractionSpec spec = make_spec({1.0}, Matrix{{gamma}}, Matrix{{1.0}});
      std::vector<double> slopes;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        HeapsOptions ho;
        ho.series = FitSeries::StarOnly;
        slopes.push_back(fit_heaps(view(run(spec, 100'000, seed)), ho).slope);
      }
      const double m = mean(slopes);
      ok = ok && std::abs(m - gamma) <= 0.05;
      detail += fmt("gamma=%.1f mean slope %.4f [%.3f, %.3f]; ", gamma, m,
                    *std::min_element(slopes.begin(), slopes.end()),
                    *std::max_element(slopes.begin(), slopes.end()));
    }
    return Outcome{ok, detail + "tol +-0.05 on the 10-seed mean"};
  });

  RowRuns r1;
  criterion(3, "common slope of D*1, D*2, D1, D2 on the weak-interaction row", 120, [&] {
    r1 = row1_runs();
    const double gs = leading_eigen(row_gamma(kRows[0])).gamma_star;
    std::vector<double> slopes, r2;
    for (const auto& f : r1.fits) {
      slopes.push_back(f.slope);
      r2.push_back(f.r_squared);
    }
    // Both asserted on the 10-seed means; single seeds are reported.
    const double m = mean(slopes);
    const double m_r2 = mean(r2);
    return Outcome{std::abs(m - 0.43) <= 0.05 && m_r2 > 0.99,
                   fmt("mean slope %.4f (gamma* %.4f; tol 0.43 +- 0.05), mean pooled R^2 %.4f (> 0.99); "
                       "single seeds: slope [%.3f, %.3f], R^2 [%.4f, %.4f]",
                       m, gs, m_r2, *std::min_element(slopes.begin(), slopes.end()),
                       *std::max_element(slopes.begin(), slopes.end()),
                       *std::min_element(r2.begin(), r2.end()), *std::max_element(r2.begin(), r2.end()))};
  });

  criterion(4, "terminal log10(D*1/D*2) against u1/u2", 1, [&] {
    if (r1.terminal_log_ratio.empty()) return Outcome{false, "runs of criterion 3 unavailable"};
    const SpectralSummary s = leading_eigen(row_gamma(kRows[0]));
    const double target = std::log10(0.30);
    const double m = mean(r1.terminal_log_ratio);
    return Outcome{std::abs(m - target) <= 0.15,
                   fmt("mean %.4f vs log10(0.30) = %.4f (spectral log10(u1/u2) = %.4f), tol +-0.15", m,
                       target, std::log10(s.u[0] / s.u[1]))};
  });

  criterion(5, "table composition in the most-occupied bin", 1, [&] {
    if (r1.composition.empty()) return Outcome{false, "runs of criterion 3 unavailable"};
    bool ok = true;
    double worst_med = 0.0, worst_iqr = 0.0;
    std::size_t min_tables = SIZE_MAX;
    for (const auto& t : r1.composition) {
      const CompositionBin& b = t.bins.front();
      min_tables = std::min(min_tables, b.count);
      if (b.count == 0) {
        ok = false;
        continue;
      }
      const double med = b.quantiles[2], iqr = b.quantiles[3] - b.quantiles[1];
      worst_med = std::max(worst_med, std::abs(med - 0.5));
      worst_iqr = std::max(worst_iqr, iqr);
      ok = ok && std::abs(med - 0.5) <= 0.05 && iqr < 0.2;
    }
    return Outcome{ok, fmt("each of 10 runs, tables with occupancy >= 1e3 (min %zu per run): "
                           "max |median - 0.5| = %.4f (tol 0.05), max IQR = %.4f (< 0.2)",
                           min_tables, worst_med, worst_iqr)};
  });

  criterion(6, "leading eigenpairs of the ten generating Gamma", 1, [] {
    double worst_g = 0.0, worst_r = 0.0;
    for (std::size_t k = 0; k < kRows.size(); ++k) {
      const SpectralSummary s = leading_eigen(row_gamma(kRows[k]));
      worst_g = std::max(worst_g, std::abs(s.gamma_star - kPrintedGammaStar[k]));
      worst_r = std::max(worst_r, std::abs(s.u[0] / s.u[1] - kPrintedR[k]));
    }
    return Outcome{worst_g <= 0.005 && worst_r <= 0.005,
                   fmt("max |gamma* - printed| = %.4f, max |u1/u2 - printed| = %.4f (tol 0.005)",
                       worst_g, worst_r)};
  });

  criterion(7, "heuristic ODE: RK4 vs matrix exponential, exponents vs gamma*", 10, [] {
    double worst_expm = 0.0, worst_exp = 0.0, worst_window = 0.0;
    const std::vector<double> d0{1.0, 1.0};
    for (const auto& row : kRows) {
      const Matrix g = row_gamma(row);
      worst_expm = std::max(worst_expm, ode_trajectory(g, d0, 1.0, 1e8, 81).expm_max_rel_diff);
      const double gs = leading_eigen(g).gamma_star;
      for (double e : asymptotic_exponents(g)) worst_exp = std::max(worst_exp, std::abs(e - gs));
      for (double e : window_slopes(g)) worst_window = std::max(worst_window, std::abs(e - gs));
    }
    return Outcome{worst_expm <= 1e-8 && worst_exp <= 1e-3,
                   fmt("max relative RK4/expm gap %.2e (tol 1e-8), max |exponent - gamma*| %.2e (tol 1e-3; "
                       "unextrapolated window slope %.2e)",
                       worst_expm, worst_exp, worst_window)};
  });

  criterion(8, "symmetric MLE with true (gamma*, r), rows 1 and 10", 600, [] {
    StudyOptions so;
    so.reps = 20;
    so.horizon = 10'000;
    so.seed = 8;
    so.true_spectral = true;
    const auto res = simulation_study({kRows[0], kRows[9]}, so);
    // Reference means and sds of (g11, g22, g12, w12) for these rows.
    const double means[2][4] = {{0.10, 0.38, 0.14, 0.52}, {0.25, 0.40, 0.40, 0.50}};
    const double sds[2][4] = {{0.07, 0.05, 0.03, 0.03}, {0.02, 0.03, 0.02, 0.02}};
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < 2; ++k) {
      const double got[4] = {res[k].g11.mean, res[k].g22.mean, res[k].g12.mean, res[k].w12.mean};
      double worst = 0.0;
      for (int e = 0; e < 4; ++e) worst = std::max(worst, std::abs(got[e] - means[k][e]) / sds[k][e]);
      ok = ok && worst <= 2.0 && res[k].n_failed == 0;
      detail += fmt("row %d means (%.3f, %.3f, %.3f, %.3f), worst |diff|/sd %.2f, failed %zu; ",
                    k == 0 ? 1 : 10, got[0], got[1], got[2], got[3], worst, res[k].n_failed);
    }
    return Outcome{ok, detail + "tol 2 sd"};
  });

  criterion(9, "full pipeline on the weak-interaction row", 900, [] {
    StudyOptions so;
    so.reps = 20;
    so.horizon = 10'000;
    so.seed = 9;
    const auto res = simulation_study({kRows[0]}, so);
    const auto& r = res[0];
    const bool ok = std::abs(r.gamma_star_hat.mean - 0.43) <= 0.08 && r.r_hat.mean >= 0.30 &&
                    r.r_hat.mean <= 0.55 && r.n_failed == 0;
    return Outcome{ok, fmt("gamma*_hat mean %.4f sd %.4f (tol 0.43 +- 0.08), r_hat mean %.4f sd %.4f "
                           "(tol [0.30, 0.55]), failed %zu",
                           r.gamma_star_hat.mean, r.gamma_star_hat.sd, r.r_hat.mean, r.r_hat.sd,
                           r.n_failed)};
  });

  criterion(10, "theta sensitivity of the likelihood, row (0.10, 0.40, 0.40, 0.50)", 600, [] {
    const StudyRow row{0.10, 0.40, 0.40, 0.50};
    StudyOptions so;
    so.reps = 20;
    so.horizon = 10'000;
    so.seed = 10;
    so.theta_likelihood = 1.0;
    const auto a = simulation_study({row}, so)[0];
    so.theta_likelihood = 100.0;
    const auto b = simulation_study({row}, so)[0];
    const double d[4] = {std::abs(a.g11.mean - b.g11.mean), std::abs(a.g22.mean - b.g22.mean),
                         std::abs(a.g12.mean - b.g12.mean), std::abs(a.w12.mean - b.w12.mean)};
    const double worst = *std::max_element(d, d + 4);
    return Outcome{worst < 0.05 && a.n_failed == 0 && b.n_failed == 0,
                   fmt("means theta_lik=1 (%.3f, %.3f, %.3f, %.3f), theta_lik=100 (%.3f, %.3f, %.3f, "
                       "%.3f), max diff %.4f (< 0.05)",
                       a.g11.mean, a.g22.mean, a.g12.mean, a.w12.mean, b.g11.mean, b.g22.mean,
                       b.g12.mean, b.w12.mean, worst)};
  });

  criterion(11, "determinism, round-trip and simultaneity rejection", 10, [&] {
    std::vector<std::string> problems;
    const fs::path spec = tmp / "spec.json";
    write_file(spec, spec_json(study_spec(kRows[0], 1.0)));
    // Reruns are byte-identical.
    for (const char* d : {"a", "b"}) {
      const fs::path dir = tmp / "det" / d;
      if (run_cli({"simulate", "--spec", spec.string(), "--steps", "20000", "--seeds", "1..3", "--out",
               dir.string()}) != 0 ||
          run_cli({"analyze", "heaps", "--log", (dir / "events-2.csv").string(), "--out", dir.string()}) != 0 ||
          run_cli({"estimate", "--log", (dir / "events-2.csv").string(), "--out", dir.string()}) != 0)
        problems.push_back(std::string("command failed in ") + d);
    }
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(tmp / "det" / "a")) {
      ++compared;
      if (slurp(e.path()) != slurp(tmp / "det" / "b" / e.path().filename()))
        problems.push_back(e.path().filename().string() + " differs");
    }
    if (compared < 9) problems.push_back("expected at least 9 artifacts");
    // CSV round trip of a simulated log.
    const EventLog log = run(study_spec(kRows[0], 1.0), 10'000, 11);
    std::stringstream csv;
    write_events_csv(csv, view(log));
    if (!(read_observations_csv(csv) == to_observations(log))) problems.push_back("CSV round trip");
    // Round trip with string keys through the item dictionary.
    const std::vector<std::vector<std::string>> streams{{"apple", "pear", "apple", "fig, dried"},
                                                        {"kiwi", "apple", "\"plum\"", "kiwi"}};
    const ObservationLog obs = pair_streams(streams);
    write_observations(obs, tmp / "obs.csv", tmp / "items.csv");
    if (!(load_observations(tmp / "obs.csv", tmp / "items.csv") == obs))
      problems.push_back("dictionary round trip");
    // Simultaneous first appearance.
    bool rejected = false;
    try {
      pair_streams(std::vector<std::vector<std::string>>{{"a", "x"}, {"b", "x"}});
    } catch (const ValidationError& e) {
      rejected = std::string(e.what()).find("t=2") != std::string::npos;
    }
    if (!rejected) problems.push_back("collision not rejected with its location");
    write_file(tmp / "collide.csv", "t,agent,item\n1,1,a\n1,2,b\n2,1,x\n2,2,x\n");
    if (run_cli({"ingest", "csv", "--csv", (tmp / "collide.csv").string(), "--out", (tmp / "c").string()}) != 2)
      problems.push_back("CLI did not exit 2 on a collision");
    std::string detail = fmt("%zu artifacts byte-identical across reruns; CSV and dictionary round trips; "
                             "collision rejected",
                             compared);
    if (!problems.empty()) {
      detail = "problems:";
      for (const auto& p : problems) detail += " " + p + ";";
    }
    return Outcome{problems.empty(), detail};
  });

  criterion(12, "external two-category data through analyze and estimate", 120, [&] {
    std::vector<std::string> problems;
    // A user-style CSV: string items, rows out of order, no flag columns.
    const EventLog log = run(study_spec(kRows[0], 1.0), 20'000, 12);
    std::vector<std::string> lines;
    for (const auto& e : log.events)
      lines.push_back(fmt("%llu,%u,", static_cast<unsigned long long>(e.t), e.agent + 1) +
                      csv_escape("comment author " + std::to_string(e.color)));
    Rng rng(12);
    for (std::size_t i = lines.size(); i > 1; --i) std::swap(lines[i - 1], lines[rng.below(i)]);
    std::string text = "t,agent,item\n";
    for (const auto& l : lines) text += l + "\n";
    write_file(tmp / "user.csv", text);

    // Two raw text streams through the tokenizer.
    const auto obs = to_observations(log);
    std::string t1, t2;
    for (const auto& e : obs.events) (e.agent == 0 ? t1 : t2) += word(e.color) + (e.t % 12 ? " " : ".\n");
    t1 += " the extra words of a longer first text";
    write_file(tmp / "one.txt", t1);
    write_file(tmp / "two.txt", t2);
    if (run_cli({"ingest", "tokens", "--text", (tmp / "one.txt").string(), "--text", (tmp / "two.txt").string(),
             "--out", (tmp / "tok").string()}) != 0)
      problems.push_back("ingest tokens failed");

    std::size_t artifacts = 0;
    for (const fs::path& input : {tmp / "user.csv", tmp / "tok" / "observations.csv"}) {
      const fs::path dir = tmp / ("out-" + input.parent_path().filename().string());
      const std::vector<std::vector<std::string>> cmds{
          {"--gnuplot-stub", "analyze", "heaps", "--log", input.string(), "--out", dir.string()},
          {"--gnuplot-stub", "analyze", "ratio", "--log", input.string(), "--out", dir.string()},
          {"--gnuplot-stub", "analyze", "composition", "--log", input.string(), "--out", dir.string()},
          {"estimate", "--log", input.string(), "--out", dir.string()}};
      for (const auto& c : cmds)
        if (run_cli(c) != 0) problems.push_back(c[1] + " failed on " + input.filename().string());
      for (const char* f : {"heaps.json", "fit.csv", "trajectories.csv", "ratio.csv", "composition.csv",
                            "pipeline.json", "heaps.gp", "ratio.gp", "composition.gp"}) {
        if (fs::exists(dir / f) && fs::file_size(dir / f) > 40)
          ++artifacts;
        else
          problems.push_back(std::string(f) + " missing for " + input.filename().string());
      }
      const std::string pj = slurp(dir / "pipeline.json");
      for (const char* key : {"\"gamma_star_hat\"", "\"u_hat\"", "\"r_hat\"", "\"gamma_hat\"", "\"w_hat\"",
                              "\"log_likelihood\"", "\"converged\""})
        if (pj.find(key) == std::string::npos) problems.push_back(std::string("pipeline.json lacks ") + key);
    }
    std::string detail = fmt("%zu/18 artifacts emitted for a shuffled string-keyed CSV and a tokenized "
                             "text pair; pipeline JSON complete",
                             artifacts);
    if (!problems.empty()) {
      detail = "problems:";
      for (const auto& p : problems) detail += " " + p + ";";
    }
    return Outcome{problems.empty(), detail};
  });

  std::error_code ec;
  fs::remove_all(tmp, ec);
  std::printf("%s: %d of 12 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
