#include "urnet/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "urnet/errors.hpp"
#include "urnet/ingest.hpp"

namespace urnet {

using Json = nlohmann::ordered_json;

namespace {

Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

Matrix matrix_from(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  Matrix m(n, j[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != m.cols())
      throw ValidationError("matrix rows must have equal length");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

Json matrix_to(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json spec_to(const InteractionSpec& s) {
  Json j;
  j["theta"] = s.theta;
  j["gamma"] = matrix_to(s.gamma);
  j["w"] = matrix_to(s.w);
  return j;
}

InteractionSpec spec_from(const Json& j) {
  if (j.contains("raw")) {
    const Json& r = j["raw"];
    RawSpec raw;
    raw.n0 = r.at("n0").get<std::vector<std::int64_t>>();
    raw.rho = r.at("rho").get<std::vector<std::vector<std::int64_t>>>();
    raw.nu = r.at("nu").get<std::vector<std::vector<std::int64_t>>>();
    return normalize_raw(raw);
  }
  return make_spec(j.at("theta").get<std::vector<double>>(), matrix_from(j.at("gamma")),
                   matrix_from(j.at("w")));
}

// NaN and infinities have no JSON form; they become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json fit_to(const HeapsFit& f) {
  Json j;
  j["slope"] = number(f.slope);
  j["intercepts"] = Json::array();
  for (double v : f.intercepts) j["intercepts"].push_back(number(v));
  j["series"] = f.names;
  j["r_squared"] = number(f.r_squared);
  j["series_r_squared"] = Json::array();
  for (double v : f.series_r_squared) j["series_r_squared"].push_back(number(v));
  j["u_hat"] = f.u_hat ? number(*f.u_hat) : Json(nullptr);
  j["t_min"] = f.t_min;
  j["t_max"] = f.t_max;
  j["n_points"] = f.n_points;
  return j;
}

Json mle_to(const MleResult& m) {
  Json j;
  Json p;
  p["gamma_star"] = m.params.gamma_star;
  p["r"] = m.params.r;
  p["x1"] = m.params.x1;
  p["x2"] = m.params.x2;
  p["y1"] = m.params.y1;
  p["y2"] = m.params.y2;
  p["branch"] = m.params.lower_branch() ? "gamma_star<=r" : "gamma_star>r";
  j["params"] = std::move(p);
  j["theta"] = m.theta;
  j["gamma_hat"] = matrix_to(m.gamma_hat);
  j["w_hat"] = matrix_to(m.w_hat);
  j["g11"] = m.g11();
  j["g22"] = m.g22();
  j["g12"] = m.g12();
  j["w12"] = m.w12();
  j["log_likelihood"] = number(m.log_likelihood);
  j["converged"] = m.converged;
  j["n_restarts_used"] = m.n_restarts_used;
  j["evaluations"] = m.evaluations;
  return j;
}

void put_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

InteractionSpec parse_spec_json(const std::string& text) {
  const Json j = parse(text, "spec");
  return guarded("spec", [&] { return spec_from(j); });
}

InteractionSpec load_spec(const std::filesystem::path& file) {
  return parse_spec_json(read_text(file));
}

std::string spec_json(const InteractionSpec& spec) { return spec_to(spec).dump(2) + "\n"; }

Matrix parse_matrix_json(const std::string& text) {
  const Json j = parse(text, "matrix");
  return guarded("matrix", [&] { return matrix_from(j.is_object() ? j.at("gamma") : j); });
}

Matrix load_matrix(const std::filesystem::path& file) { return parse_matrix_json(read_text(file)); }

std::string event_log_json(const EventLog& log) {
  Json j;
  j["seed"] = log.seed;
  j["horizon"] = log.horizon;
  j["spec"] = spec_to(log.spec);
  j["columns"] = {"t", "agent", "item", "new_system", "new_agent"};
  Json ev = Json::array();
  for (const auto& e : log.events)
    ev.push_back(Json::array({e.t, e.agent + 1, e.color, int(e.new_system), int(e.new_agent)}));
  j["events"] = std::move(ev);
  // Events one per line keeps the file diffable without the size of dump(2).
  std::string out = "{\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += "  " + Json(it.key()).dump() + ": ";
    if (it.key() == "events") {
      out += "[";
      for (std::size_t i = 0; i < it->size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        out += (*it)[i].dump();
      }
      out += it->empty() ? "]" : "\n  ]";
    } else if (it.key() == "spec") {
      std::string s = it->dump(2);
      for (std::size_t p = 0; (p = s.find('\n', p)) != std::string::npos; p += 3) s.insert(p + 1, "  ");
      out += s;
    } else {
      out += it->dump();
    }
  }
  return out + "\n}\n";
}

EventLog parse_event_log_json(const std::string& text) {
  const Json j = parse(text, "event log");
  return guarded("event log", [&] {
    EventLog log;
    log.seed = j.at("seed").get<std::uint64_t>();
    log.horizon = j.at("horizon").get<std::uint64_t>();
    log.spec = spec_from(j.at("spec"));
    for (const auto& r : j.at("events")) {
      DrawEvent e;
      e.t = r.at(0).get<std::uint64_t>();
      e.agent = r.at(1).get<std::uint32_t>() - 1;
      e.color = r.at(2).get<ColorId>();
      e.new_system = r.at(3).get<int>() != 0;
      e.new_agent = r.at(4).get<int>() != 0;
      log.events.push_back(e);
    }
    // Reject logs the model could not have produced.
    replay(view(log));
    return log;
  });
}

std::string heaps_fit_json(const HeapsFit& fit) { return fit_to(fit).dump(2) + "\n"; }

std::string spectral_json(const SpectralSummary& s) {
  Json j;
  j["gamma_star"] = s.gamma_star;
  j["v"] = s.v;
  j["u"] = s.u;
  j["ratios"] = matrix_to(s.ratios);
  if (s.u.size() >= 2) j["ratio"] = s.u[0] / s.u[1];
  j["iterations"] = s.iterations;
  j["right_residual"] = s.right_residual;
  j["left_residual"] = s.left_residual;
  return j.dump(2) + "\n";
}

std::string mle_json(const MleResult& m) { return mle_to(m).dump(2) + "\n"; }

std::string pipeline_json(const PipelineResult& p) {
  Json j;
  j["gamma_star_hat"] = p.gamma_star_hat;
  j["u_hat"] = p.u_hat;
  j["r_hat"] = p.r_hat;
  j["relabeled"] = p.relabeled;
  j["heaps"] = fit_to(p.heaps);
  j["mle"] = mle_to(p.mle);
  return j.dump(2) + "\n";
}

std::string composition_json(const CompositionTable& table) {
  Json j;
  j["levels"] = table.levels;
  j["bins"] = Json::array();
  for (const auto& b : table.bins)
    j["bins"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"quantiles", b.quantiles}});
  return j.dump(2) + "\n";
}

void write_ode_csv(std::ostream& out, const OdeTrajectory& traj) {
  const std::size_t n = traj.d.empty() ? 0 : traj.d[0].size();
  std::vector<std::string> head{"t"};
  for (std::size_t h = 0; h < n; ++h) head.push_back("d" + std::to_string(h + 1));
  put_row(out, head);
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    std::vector<std::string> row{format_double(traj.t[k])};
    for (double v : traj.d[k]) row.push_back(format_double(v));
    put_row(out, row);
  }
}

void write_trajectories_csv(std::ostream& out, const Trajectories& traj) {
  const std::size_t n = traj.n_agents();
  std::vector<std::string> head{"t"};
  for (std::size_t h = 0; h < n; ++h) head.push_back("d_star" + std::to_string(h + 1));
  for (std::size_t h = 0; h < n; ++h) head.push_back("d" + std::to_string(h + 1));
  head.push_back("d_star_total");
  put_row(out, head);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<std::string> row{std::to_string(traj.times[k])};
    for (std::size_t h = 0; h < n; ++h) row.push_back(std::to_string(traj.d_star[h][k]));
    for (std::size_t h = 0; h < n; ++h) row.push_back(std::to_string(traj.d[h][k]));
    row.push_back(std::to_string(traj.d_star_total[k]));
    put_row(out, row);
  }
}

void write_fit_csv(std::ostream& out, const HeapsFit& fit) {
  out << "log10_t,log10_value,series\n";
  for (std::size_t s = 0; s < fit.points.size(); ++s)
    for (const auto& [x, y] : fit.points[s])
      put_row(out, {format_double(x), format_double(y), csv_escape(fit.names[s])});
}

void write_ratio_csv(std::ostream& out, const RatioSeries& ratio) {
  out << "t,log_ratio\n";
  for (std::size_t k = 0; k < ratio.times.size(); ++k)
    put_row(out, {std::to_string(ratio.times[k]), format_double(ratio.log_ratio[k])});
}

void write_composition_csv(std::ostream& out, const CompositionTable& table) {
  std::vector<std::string> head{"bin_lo", "bin_hi", "count"};
  for (double level : table.levels) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "q%02d", static_cast<int>(std::lround(level * 100)));
    head.emplace_back(buf);
  }
  put_row(out, head);
  for (const auto& b : table.bins) {
    std::vector<std::string> row{format_double(b.lo), format_double(b.hi), std::to_string(b.count)};
    for (std::size_t i = 0; i < table.levels.size(); ++i)
      row.push_back(b.quantiles.empty() ? std::string() : format_double(b.quantiles[i]));
    put_row(out, row);
  }
}

void write_study_csv(std::ostream& out, const std::vector<StudyRowResult>& rows) {
  out << "g11,g22,g12,w12,g11_hat_mean,g11_hat_sd,g22_hat_mean,g22_hat_sd,g12_hat_mean,"
         "g12_hat_sd,w12_hat_mean,w12_hat_sd,gstar,r,gstar_hat_mean,gstar_hat_sd,r_hat_mean,"
         "r_hat_sd,n_ok,n_failed\n";
  for (const auto& r : rows) {
    put_row(out, {format_double(r.row.g11), format_double(r.row.g22), format_double(r.row.g12),
                  format_double(r.row.w12), cell(r.g11.mean), cell(r.g11.sd), cell(r.g22.mean),
                  cell(r.g22.sd), cell(r.g12.mean), cell(r.g12.sd), cell(r.w12.mean),
                  cell(r.w12.sd), format_double(r.gamma_star), format_double(r.r),
                  cell(r.gamma_star_hat.mean), cell(r.gamma_star_hat.sd), cell(r.r_hat.mean),
                  cell(r.r_hat.sd), std::to_string(r.g11.n), std::to_string(r.n_failed)});
  }
}

std::vector<StudyRow> parse_study_rows(const std::string& text) {
  const Json j = parse(text, "study rows");
  return guarded("study rows", [&] {
    if (!j.is_array()) throw ValidationError("study rows must be an array");
    std::vector<StudyRow> rows;
    for (const auto& r : j) {
      StudyRow row;
      if (r.is_array()) {
        if (r.size() != 4) throw ValidationError("study row arrays hold g11, g22, g12, w12");
        row = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
      } else {
        row = {r.at("g11").get<double>(), r.at("g22").get<double>(), r.at("g12").get<double>(),
               r.at("w12").get<double>()};
      }
      rows.push_back(row);
    }
    return rows;
  });
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace urnet
