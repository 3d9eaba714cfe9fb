#include "urnet_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_config.hpp"
#include "urnet/errors.hpp"
#include "urnet/estimate.hpp"
#include "urnet/ingest.hpp"
#include "urnet/io.hpp"
#include "urnet/parallel.hpp"
#include "urnet/simulator.hpp"
#include "urnet/spectral.hpp"
#include "urnet/stats.hpp"

namespace fs = std::filesystem;

namespace urnet::cli {

namespace {

struct Global {
  std::size_t jobs = 0;
  bool gnuplot_stub = false;
  bool print_config = false;
};

struct SimulateArgs {
  std::string spec;
  std::uint64_t steps = 0;
  std::uint64_t seed = 1;
  std::string seeds;
  std::string out = ".";
  std::uint64_t checkpoint_interval = 10'000;
};

struct LogArgs {
  std::string log;
  std::string dict;
};

struct HeapsArgs {
  std::optional<double> t_min;
  std::size_t n_points = 200;
  std::string series = "all";
};

struct AnalyzeArgs {
  LogArgs input;
  HeapsArgs heaps;
  std::string out = ".";
  std::size_t h = 1;
  std::size_t j = 2;
  std::uint64_t min_occupancy = 10;
  double bin = 0.5;
  std::vector<double> levels{0.05, 0.25, 0.5, 0.75, 0.95};
  std::size_t agent = 1;
};

struct MatrixArgs {
  std::string matrix;
  std::string spec;
};

struct OdeArgs {
  MatrixArgs input;
  std::vector<double> d0;
  double t0 = 1.0;
  double t1 = 1e8;
  std::size_t points = 200;
  std::string out;
};

struct MleArgs {
  bool unsymmetric = false;
  std::vector<double> theta{1.0, 1.0};
  bool estimate_theta = false;
  std::size_t restarts = 8;
  double tolerance = 1e-6;
  std::uint64_t seed = 1;
};

struct EstimateArgs {
  LogArgs input;
  HeapsArgs heaps;
  MleArgs mle;
  std::optional<double> gamma_star;
  std::optional<double> r;
  std::string out = ".";
};

struct StudyArgs {
  std::string rows;
  std::size_t reps = 100;
  std::uint64_t steps = 10'000;
  double theta_data = 1.0;
  double theta_lik = 1.0;
  std::uint64_t seed = 1;
  bool true_spectral = false;
  HeapsArgs heaps;
  MleArgs mle;
  std::string out = "study.csv";
};

struct IngestArgs {
  std::vector<std::string> texts;
  std::vector<std::string> lines;
  std::string csv;
  std::string dict;
  std::uint64_t seed = 1;
  std::size_t min_len = 3;
  bool keep_numbers = false;
  bool no_equalize = false;
  bool drop_colliding = false;
  std::string out = ".";
};

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  auto num = [&](const std::string& x) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(x, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != x.size()) throw ValidationError("bad seed \"" + x + "\" in --seeds");
    return v;
  };
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const std::uint64_t a = num(s.substr(0, dots)), b = num(s.substr(dots + 2));
    if (b < a) throw ValidationError("--seeds range " + s + " is empty");
    for (std::uint64_t x = a;; ++x) {
      seeds.push_back(x);
      if (x == b) break;
    }
    return seeds;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) seeds.push_back(num(part));
  if (seeds.empty()) throw ValidationError("--seeds is empty");
  return seeds;
}

ObservationLog load_log(const LogArgs& a) {
  const fs::path p = a.log;
  if (p.extension() == ".json") return to_observations(parse_event_log_json(read_text(p)));
  return a.dict.empty() ? load_observations(p) : load_observations(p, a.dict);
}

HeapsOptions heaps_options(const HeapsArgs& a) {
  HeapsOptions o;
  o.t_min = a.t_min;
  o.n_points = a.n_points;
  o.series = a.series == "star" ? FitSeries::StarOnly : FitSeries::StarAndAdopted;
  return o;
}

MleOptions mle_options(const MleArgs& a, std::size_t jobs) {
  MleOptions o;
  o.symmetric = !a.unsymmetric;
  o.theta = a.theta;
  o.estimate_theta = a.estimate_theta;
  o.restarts = a.restarts;
  o.tolerance = a.tolerance;
  o.seed = a.seed;
  o.jobs = jobs;
  return o;
}

Matrix load_gamma(const MatrixArgs& a) {
  if (!a.matrix.empty()) return load_matrix(a.matrix);
  return load_spec(a.spec).gamma;
}

template <class F>
void write_with(const fs::path& file, F&& f) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream o(file, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write " + file.string());
  f(o);
  if (!o) throw std::runtime_error("write failed: " + file.string());
}

void stub(const fs::path& file, const std::string& body) {
  write_file(file, "# gnuplot skeleton; adjust titles and styles as needed\n"
                   "set datafile separator ','\n"
                   "set key autotitle columnhead\n" +
                       body);
}

void add_heaps_options(CLI::App* c, HeapsArgs& h) {
  c->add_option("--t-min", h.t_min, "First time-step of the fit (default max(100, T/1000))")
      ->check(CLI::PositiveNumber);
  c->add_option("--n-points", h.n_points, "Log-uniform sample points per series")
      ->check(CLI::Range(2, 1'000'000));
  c->add_option("--series", h.series, "Series sharing the slope: all (D* and D) or star (D* only)")
      ->check(CLI::IsMember({"all", "star"}));
}

void add_mle_options(CLI::App* c, MleArgs& m) {
  c->add_flag("--unsymmetric", m.unsymmetric, "Fit all four family parameters (experimental)");
  c->add_option("--theta", m.theta, "Fixed theta of the likelihood, one per agent")
      ->expected(2)
      ->check(CLI::PositiveNumber);
  c->add_flag("--estimate-theta", m.estimate_theta, "Also search log10(theta) (experimental)");
  c->add_option("--restarts", m.restarts, "Simplex restarts on a Latin grid")
      ->check(CLI::Range(1, 10'000));
  c->add_option("--tolerance", m.tolerance, "Simplex diameter at convergence")
      ->check(CLI::PositiveNumber);
  c->add_option("--mle-seed", m.seed, "Seed of the start-point grid");
}

void add_log_input(CLI::App* c, LogArgs& l) {
  c->add_option("--log", l.log, "Event log: CSV t,agent,item[,new_system,new_agent] or JSON")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("--dict", l.dict, "item_id,item_key dictionary for the log")
      ->check(CLI::ExistingFile);
}

int cmd_simulate(const SimulateArgs& a, const Global& g, std::ostream& out) {
  const InteractionSpec spec = load_spec(a.spec);
  const std::vector<std::uint64_t> seeds =
      a.seeds.empty() ? std::vector<std::uint64_t>{a.seed} : parse_seeds(a.seeds);
  const fs::path dir = a.out;
  fs::create_directories(dir);
  SimulatorOptions so;
  so.checkpoint_interval = a.checkpoint_interval;
  const std::size_t jobs = g.jobs ? g.jobs : default_jobs();
  // Chunks of `jobs` runs bound the logs held in memory.
  for (std::size_t begin = 0; begin < seeds.size(); begin += jobs) {
    const std::size_t n = std::min(jobs, seeds.size() - begin);
    std::vector<EventLog> logs(n);
    parallel_for(n, jobs, [&](std::size_t i) { logs[i] = run(spec, a.steps, seeds[begin + i], so); });
    for (const auto& log : logs) {
      const std::string stem = "events-" + std::to_string(log.seed);
      write_with(dir / (stem + ".csv"), [&](std::ostream& o) { write_events_csv(o, view(log)); });
      write_file(dir / (stem + ".json"), event_log_json(log));
      out << (dir / (stem + ".csv")).string() << '\n';
    }
  }
  return 0;
}

int cmd_heaps(const AnalyzeArgs& a, const Global& g, std::ostream& out) {
  const ObservationLog log = load_log(a.input);
  const HeapsFit fit = fit_heaps(view(log), heaps_options(a.heaps));
  const fs::path dir = a.out;
  write_file(dir / "heaps.json", heaps_fit_json(fit));
  write_with(dir / "fit.csv", [&](std::ostream& o) { write_fit_csv(o, fit); });
  write_with(dir / "trajectories.csv",
             [&](std::ostream& o) { write_trajectories_csv(o, trajectories(view(log))); });
  if (g.gnuplot_stub)
    stub(dir / "heaps.gp",
         "set logscale xy\nset xlabel 't'\nset ylabel 'count'\n"
         "plot for [s in \"" + [&] {
           std::string names;
           for (const auto& n : fit.names) names += (names.empty() ? "" : " ") + n;
           return names;
         }() + "\"] 'fit.csv' using (10**$1):(strcol(3) eq s ? 10**$2 : NaN) title s with points\n");
  out << heaps_fit_json(fit);
  return 0;
}

int cmd_ratio(const AnalyzeArgs& a, const Global& g, std::ostream& out) {
  const ObservationLog log = load_log(a.input);
  if (a.h < 1 || a.h > log.n_agents || a.j < 1 || a.j > log.n_agents || a.h == a.j)
    throw ValidationError("--numerator and --denominator must be distinct agents in 1.." + std::to_string(log.n_agents));
  std::optional<double> u_hat;
  if (log.n_agents >= 2) {
    const HeapsFit fit = fit_heaps(view(log), heaps_options(a.heaps));
    const auto pos = [&](std::size_t agent) {
      return static_cast<std::size_t>(std::find(fit.names.begin(), fit.names.end(),
                                                "Dstar" + std::to_string(agent)) -
                                      fit.names.begin());
    };
    u_hat = fit.intercepts[pos(a.h)] - fit.intercepts[pos(a.j)];
  }
  const RatioSeries ratio = ratio_series(trajectories(view(log)), a.h - 1, a.j - 1, u_hat);
  const fs::path dir = a.out;
  write_with(dir / "ratio.csv", [&](std::ostream& o) { write_ratio_csv(o, ratio); });
  if (g.gnuplot_stub)
    stub(dir / "ratio.gp", "set logscale x\nset xlabel 't'\nset ylabel 'log10 ratio'\n"
                           "plot 'ratio.csv' using 1:2 with lines" +
                               (u_hat ? ", " + format_double(*u_hat) + " title 'u_hat'" : std::string()) +
                               "\n");
  out << "terminal_log_ratio," << (ratio.log_ratio.empty() ? std::string() : format_double(ratio.log_ratio.back()))
      << "\nu_hat," << (u_hat ? format_double(*u_hat) : std::string()) << '\n';
  return 0;
}

int cmd_composition(const AnalyzeArgs& a, const Global& g, std::ostream& out) {
  const ObservationLog log = load_log(a.input);
  if (a.agent < 1 || a.agent > log.n_agents)
    throw ValidationError("--agent must lie in 1.." + std::to_string(log.n_agents));
  CompositionOptions o;
  o.min_occupancy = a.min_occupancy;
  o.bin_width_log10 = a.bin;
  o.levels = a.levels;
  o.agent = a.agent - 1;
  const CompositionTable table = composition_quantiles(view(log), o);
  const fs::path dir = a.out;
  write_with(dir / "composition.csv", [&](std::ostream& s) { write_composition_csv(s, table); });
  if (g.gnuplot_stub)
    stub(dir / "composition.gp",
         "set logscale x\nset xlabel 'table occupancy'\nset ylabel 'agent proportion'\n"
         "plot 'composition.csv' using (sqrt($1*$2)):5:4:8:7 with candlesticks whiskerbars, \\\n"
         "     '' using (sqrt($1*$2)):6:6:6:6 with candlesticks notitle\n");
  out << composition_json(table);
  return 0;
}

int cmd_spectral(const MatrixArgs& a, std::ostream& out) {
  const Matrix gamma = load_gamma(a);
  if (!is_irreducible(gamma))
    throw ValidationError("Gamma is reducible; leading_eigen needs an irreducible matrix (use `ode` "
                          "for growth exponents of reducible Gamma)");
  out << spectral_json(leading_eigen(gamma));
  return 0;
}

int cmd_ode(const OdeArgs& a, const Global& g, std::ostream& out) {
  const Matrix gamma = load_gamma(a.input);
  std::vector<double> d0 = a.d0.empty() ? std::vector<double>(gamma.rows(), 1.0) : a.d0;
  if (d0.size() != gamma.rows())
    throw ValidationError("--d0 needs " + std::to_string(gamma.rows()) + " values");
  if (!(a.t1 > a.t0)) throw ValidationError("--t1 must exceed --t0");
  const OdeTrajectory traj = ode_trajectory(gamma, d0, a.t0, a.t1, a.points);
  if (a.out.empty()) {
    write_ode_csv(out, traj);
  } else {
    write_with(a.out, [&](std::ostream& o) { write_ode_csv(o, traj); });
    if (g.gnuplot_stub) {
      std::string cols;
      for (std::size_t h = 0; h < gamma.rows(); ++h)
        cols += (h ? ", '' using 1:" : "'" + fs::path(a.out).filename().string() + "' using 1:") +
                std::to_string(h + 2) + " with lines";
      stub(fs::path(a.out).replace_extension(".gp"), "set logscale xy\nplot " + cols + "\n");
    }
  }
  return 0;
}

int cmd_estimate(const EstimateArgs& a, const Global& g, std::ostream& out) {
  const ObservationLog log = load_log(a.input);
  if (a.gamma_star.has_value() != a.r.has_value())
    throw ValidationError("--gamma-star and --r must be given together");
  const MleOptions mo = mle_options(a.mle, g.jobs);
  PipelineResult res;
  if (a.gamma_star) {
    if (!(*a.r > 0.0)) throw ValidationError("--r must be positive");
    res = fit_family(view(log), *a.gamma_star, std::log10(*a.r), mo);
  } else {
    PipelineOptions po;
    po.heaps = heaps_options(a.heaps);
    po.mle = mo;
    res = pipeline(view(log), po);
  }
  const fs::path dir = a.out;
  write_file(dir / "pipeline.json", pipeline_json(res));
  if (!res.heaps.points.empty())
    write_with(dir / "fit.csv", [&](std::ostream& o) { write_fit_csv(o, res.heaps); });
  out << pipeline_json(res);
  return 0;
}

int cmd_study(const StudyArgs& a, const Global& g, std::ostream& out, std::ostream& err) {
  StudyOptions so;
  so.reps = a.reps;
  so.horizon = a.steps;
  so.theta_data = a.theta_data;
  so.theta_likelihood = a.theta_lik;
  so.seed = a.seed;
  so.true_spectral = a.true_spectral;
  so.pipeline.heaps = heaps_options(a.heaps);
  so.pipeline.mle = mle_options(a.mle, 1);
  so.jobs = g.jobs;
  const auto results = simulation_study(parse_study_rows(read_text(a.rows)), so);
  write_with(a.out, [&](std::ostream& o) { write_study_csv(o, results); });
  for (const auto& r : results)
    for (const auto& f : r.failures) err << "study: excluded " << f << '\n';
  write_study_csv(out, results);
  return 0;
}

int write_ingested(const ObservationLog& log, const fs::path& dir, std::size_t input_steps,
                   std::ostream& out) {
  fs::create_directories(dir);
  write_observations(log, dir / "observations.csv", dir / "items.csv");
  out << "steps," << log.horizon << "\nitems," << log.item_keys.size() << "\ndropped_steps,"
      << input_steps - log.horizon << '\n';
  return 0;
}

int cmd_ingest_tokens(const IngestArgs& a, std::ostream& out) {
  if (a.texts.size() != 2) throw ValidationError("ingest tokens needs exactly two --text files");
  TokenizeOptions to;
  to.min_len = a.min_len;
  to.strip_numbers = !a.keep_numbers;
  std::vector<std::string> s1 = tokenize(read_text(a.texts[0]), to);
  std::vector<std::string> s2 = tokenize(read_text(a.texts[1]), to);
  if (!a.no_equalize) std::tie(s1, s2) = equalize(std::move(s1), std::move(s2), a.seed);
  const std::size_t steps = std::min(s1.size(), s2.size());
  const std::vector<std::vector<std::string>> streams{std::move(s1), std::move(s2)};
  PairOptions po;
  po.drop_colliding = a.drop_colliding;
  return write_ingested(pair_streams(streams, po), a.out, steps, out);
}

int cmd_ingest_csv(const IngestArgs& a, std::ostream& out) {
  if (a.csv.empty() == a.lines.empty())
    throw ValidationError("ingest csv needs either --csv or --lines");
  if (!a.csv.empty()) {
    ObservationLog log = a.dict.empty() ? load_observations(a.csv) : load_observations(a.csv, a.dict);
    const std::size_t steps = log.horizon;
    return write_ingested(log, a.out, steps, out);
  }
  std::vector<std::vector<std::string>> streams;
  for (const auto& f : a.lines) streams.push_back(read_lines(f));
  if (!a.no_equalize && streams.size() == 2)
    std::tie(streams[0], streams[1]) = equalize(std::move(streams[0]), std::move(streams[1]), a.seed);
  std::size_t steps = streams.empty() ? 0 : streams[0].size();
  PairOptions po;
  po.drop_colliding = a.drop_colliding;
  return write_ingested(pair_streams(streams, po), a.out, steps, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation, analysis and estimation for interacting innovation processes", "urnet"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");

  Global g;
  app.add_option("--jobs", g.jobs, "Worker threads for replications and restarts (0 = all cores)");
  app.add_flag("--gnuplot-stub", g.gnuplot_stub, "Also write a gnuplot script skeleton next to plot CSVs");
  app.add_flag("--print-config", g.print_config, "Print the effective configuration as JSON and exit");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the urn dynamics and write event logs");
  c_sim->add_option("--spec", sim.spec, "Model spec JSON")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--steps", sim.steps, "Horizon T")->required()->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed, "Seed of a single run");
  c_sim->add_option("--seeds", sim.seeds, "Several runs: a range a..b or a list a,b,c");
  c_sim->add_option("--out", sim.out, "Output directory");
  c_sim->add_option("--checkpoint-interval", sim.checkpoint_interval, "Steps between sampler checks")
      ->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze", "Heaps fits, ratio process and table composition");
  c_an->require_subcommand(1);
  auto* c_heaps = c_an->add_subcommand("heaps", "Common-slope fit of D* and D");
  auto* c_ratio = c_an->add_subcommand("ratio", "log10 D*_h / D*_j over time");
  auto* c_comp = c_an->add_subcommand("composition", "Quantiles of table composition by occupancy");
  for (auto* c : {c_heaps, c_ratio, c_comp}) {
    add_log_input(c, an.input);
    c->add_option("--out", an.out, "Output directory");
  }
  add_heaps_options(c_heaps, an.heaps);
  add_heaps_options(c_ratio, an.heaps);
  c_ratio->add_option("--numerator", an.h, "Numerator agent (1-based)");
  c_ratio->add_option("--denominator", an.j, "Denominator agent (1-based)");
  c_comp->add_option("--min-occupancy", an.min_occupancy, "Drop tables occupied fewer times");
  c_comp->add_option("--bin", an.bin, "Bin width in log10 occupancy")->check(CLI::PositiveNumber);
  c_comp->add_option("--levels", an.levels, "Quantile levels")->check(CLI::Range(0.0, 1.0));
  c_comp->add_option("--agent", an.agent, "Agent whose proportion is summarized (1-based)");

  MatrixArgs sp;
  auto* c_sp = app.add_subcommand("spectral", "Leading eigenvalue and eigenvectors of Gamma");
  auto* sp_m = c_sp->add_option("--matrix", sp.matrix, "Gamma as a JSON array of rows")->check(CLI::ExistingFile);
  auto* sp_s = c_sp->add_option("--spec", sp.spec, "Take Gamma from a model spec")->check(CLI::ExistingFile);
  sp_m->excludes(sp_s);
  c_sp->require_option(1);

  OdeArgs ode;
  auto* c_ode = app.add_subcommand("ode", "Integrate d'(z) = Gamma^T d(z), t = e^z");
  auto* ode_m = c_ode->add_option("--matrix", ode.input.matrix, "Gamma as a JSON array of rows")->check(CLI::ExistingFile);
  auto* ode_s = c_ode->add_option("--spec", ode.input.spec, "Take Gamma from a model spec")->check(CLI::ExistingFile);
  ode_m->excludes(ode_s);
  c_ode->add_option("--d0", ode.d0, "Initial values (default all ones)")->check(CLI::PositiveNumber);
  c_ode->add_option("--t0", ode.t0, "Start time")->check(CLI::PositiveNumber);
  c_ode->add_option("--t1", ode.t1, "End time")->check(CLI::PositiveNumber);
  c_ode->add_option("--points", ode.points, "Log-spaced samples")->check(CLI::Range(2, 1'000'000));
  c_ode->add_option("--out", ode.out, "CSV file (default standard output)");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Heaps fit, then maximum likelihood in the 2x2 family");
  add_log_input(c_est, est.input);
  add_heaps_options(c_est, est.heaps);
  add_mle_options(c_est, est.mle);
  c_est->add_option("--gamma-star", est.gamma_star, "Skip the Heaps fit: use this gamma_star")
      ->check(CLI::Range(0.0, 1.0));
  c_est->add_option("--r", est.r, "With --gamma-star: u_1/u_2")->check(CLI::PositiveNumber);
  c_est->add_option("--out", est.out, "Output directory");

  StudyArgs st;
  auto* c_st = app.add_subcommand("study", "Repeated simulate-and-estimate over generating rows");
  c_st->add_option("--rows", st.rows, "JSON rows {g11,g22,g12,w12}")->required()->check(CLI::ExistingFile);
  c_st->add_option("--reps", st.reps, "Replications per row")->check(CLI::PositiveNumber);
  c_st->add_option("--steps", st.steps, "Horizon T")->check(CLI::PositiveNumber);
  c_st->add_option("--theta-data", st.theta_data, "theta of the simulated data")->check(CLI::PositiveNumber);
  c_st->add_option("--theta-lik", st.theta_lik, "theta assumed by the likelihood")->check(CLI::PositiveNumber);
  c_st->add_option("--seed", st.seed, "Base seed");
  c_st->add_flag("--true-spectral", st.true_spectral, "Give the fit the true gamma_star and r");
  add_heaps_options(c_st, st.heaps);
  add_mle_options(c_st, st.mle);
  c_st->add_option("--out", st.out, "Study CSV");

  IngestArgs ing;
  auto* c_ing = app.add_subcommand("ingest", "Turn external streams into an observation log");
  c_ing->require_subcommand(1);
  auto* c_tok = c_ing->add_subcommand("tokens", "Tokenize two text files into paired streams");
  c_tok->add_option("--text", ing.texts, "Text file of each category (twice)")->required()->check(CLI::ExistingFile);
  c_tok->add_option("--min-len", ing.min_len, "Shortest kept token, in characters");
  c_tok->add_flag("--keep-numbers", ing.keep_numbers, "Keep digits inside tokens");
  auto* c_csv = c_ing->add_subcommand("csv", "Validate a t,agent,item CSV or parallel item files");
  c_csv->add_option("--csv", ing.csv, "CSV with header t,agent,item")->check(CLI::ExistingFile);
  c_csv->add_option("--dict", ing.dict, "item_id,item_key dictionary for --csv")->check(CLI::ExistingFile);
  c_csv->add_option("--lines", ing.lines, "One item per line, one file per agent")->check(CLI::ExistingFile);
  for (auto* c : {c_tok, c_csv}) {
    c->add_option("--seed", ing.seed, "Seed of the random equalization");
    c->add_flag("--no-equalize", ing.no_equalize, "Require equal lengths instead of trimming");
    c->add_flag("--drop-colliding", ing.drop_colliding,
                "Drop steps where one item is new for two agents at once");
    c->add_option("--out", ing.out, "Output directory");
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (g.print_config) {
    out << app.config_to_str(true, false);
    return 0;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim, g, out);
    if (c_heaps->parsed()) return cmd_heaps(an, g, out);
    if (c_ratio->parsed()) return cmd_ratio(an, g, out);
    if (c_comp->parsed()) return cmd_composition(an, g, out);
    if (c_sp->parsed()) return cmd_spectral(sp, out);
    if (c_ode->parsed()) return cmd_ode(ode, g, out);
    if (c_est->parsed()) return cmd_estimate(est, g, out);
    if (c_st->parsed()) return cmd_study(st, g, out, err);
    if (c_tok->parsed()) return cmd_ingest_tokens(ing, out);
    if (c_csv->parsed()) return cmd_ingest_csv(ing, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& d : e.details()) err << "  " << d << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace urnet::cli
