#include "urnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "urnet/errors.hpp"

namespace urnet {

namespace {

constexpr double kSpecTolerance = 1e-12;

template <typename... Args>
std::string str(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace

std::vector<std::string> validate_spec(const InteractionSpec& spec) {
  std::vector<std::string> v;
  const std::size_t n = spec.n_agents();
  if (n == 0) {
    v.emplace_back("spec has no agents (theta is empty)");
    return v;
  }
  if (spec.gamma.rows() != n || spec.gamma.cols() != n)
    v.push_back(str("gamma must be ", n, "x", n, ", got ", spec.gamma.rows(), "x",
                    spec.gamma.cols()));
  if (spec.w.rows() != n || spec.w.cols() != n)
    v.push_back(str("w must be ", n, "x", n, ", got ", spec.w.rows(), "x", spec.w.cols()));
  if (!v.empty()) return v;

  for (std::size_t h = 0; h < n; ++h)
    if (!(spec.theta[h] > 0.0) || !std::isfinite(spec.theta[h]))
      v.push_back(str("theta[", h + 1, "] = ", spec.theta[h], " must be positive and finite"));

  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      const double g = spec.gamma(j, h);
      const double w = spec.w(j, h);
      if (!(g >= 0.0 && g <= 1.0))
        v.push_back(str("gamma[", j + 1, "][", h + 1, "] = ", g, " outside [0,1]"));
      if (!(w >= 0.0 && w <= 1.0))
        v.push_back(str("w[", j + 1, "][", h + 1, "] = ", w, " outside [0,1]"));
      if (w - g < -kSpecTolerance)
        v.push_back(str("balance violated: gamma[", j + 1, "][", h + 1, "] = ", g,
                        " exceeds w[", j + 1, "][", h + 1, "] = ", w));
    }

  for (std::size_t h = 0; h < n; ++h) {
    const double ws = spec.w.col_sum(h);
    if (std::abs(ws - 1.0) > kSpecTolerance)
      v.push_back(str("w column ", h + 1, " sums to ", ws, " (expected 1)"));
    const double gs = spec.gamma.col_sum(h);
    if (!(gs < 1.0)) v.push_back(str("gamma column ", h + 1, " sums to ", gs, " (must be < 1)"));
    if (!(spec.w(h, h) > 0.0)) v.push_back(str("w[", h + 1, "][", h + 1, "] must be > 0"));
    if (!(spec.gamma(h, h) < 1.0))
      v.push_back(str("gamma[", h + 1, "][", h + 1, "] must be < 1"));
    if (!(spec.lambda(h, h) > 0.0))
      v.push_back(str("lambda[", h + 1, "][", h + 1, "] = w - gamma must be > 0"));
  }
  return v;
}

std::vector<std::string> validate_raw(const RawSpec& raw) {
  std::vector<std::string> v;
  const std::size_t n = raw.n0.size();
  if (n == 0) {
    v.emplace_back("raw spec has no agents (n0 is empty)");
    return v;
  }
  auto square = [n](const auto& m) {
    if (m.size() != n) return false;
    for (const auto& r : m)
      if (r.size() != n) return false;
    return true;
  };
  if (!square(raw.rho)) v.push_back(str("rho must be ", n, "x", n));
  if (!square(raw.nu)) v.push_back(str("nu must be ", n, "x", n));
  if (!v.empty()) return v;

  for (std::size_t h = 0; h < n; ++h) {
    if (raw.n0[h] <= 0) v.push_back(str("n0[", h + 1, "] = ", raw.n0[h], " must be positive"));
    if (raw.rho[h][h] <= 0) v.push_back(str("rho[", h + 1, "][", h + 1, "] must be positive"));
    if (raw.rho[h][h] - raw.nu[h][h] <= 0)
      v.push_back(str("rho_hat[", h + 1, "][", h + 1, "] = rho - nu must be positive"));
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t h = 0; h < n; ++h) {
      if (raw.rho[j][h] < 0) v.push_back(str("rho[", j + 1, "][", h + 1, "] is negative"));
      if (raw.nu[j][h] < 0) v.push_back(str("nu[", j + 1, "][", h + 1, "] is negative"));
      if (raw.rho[j][h] - raw.nu[j][h] < 0)
        v.push_back(str("balance violated: nu[", j + 1, "][", h + 1, "] = ", raw.nu[j][h],
                        " exceeds rho[", j + 1, "][", h + 1, "] = ", raw.rho[j][h]));
    }
  return v;
}

InteractionSpec make_spec(std::vector<double> theta, Matrix gamma, Matrix w) {
  InteractionSpec spec{std::move(theta), std::move(gamma), std::move(w)};
  auto violations = validate_spec(spec);
  if (!violations.empty()) throw ValidationError("invalid interaction spec", std::move(violations));
  return spec;
}

InteractionSpec normalize_raw(const RawSpec& raw) {
  auto violations = validate_raw(raw);
  if (!violations.empty()) throw ValidationError("invalid raw urn spec", std::move(violations));
  const std::size_t n = raw.n0.size();
  InteractionSpec spec{std::vector<double>(n), Matrix(n, n), Matrix(n, n)};
  for (std::size_t h = 0; h < n; ++h) {
    std::int64_t rho_h = 0;
    for (std::size_t j = 0; j < n; ++j) rho_h += raw.rho[j][h];
    const auto denom = static_cast<double>(rho_h);
    spec.theta[h] = static_cast<double>(raw.n0[h]) / denom;
    for (std::size_t j = 0; j < n; ++j) {
      spec.gamma(j, h) = static_cast<double>(raw.nu[j][h]) / denom;
      spec.w(j, h) = static_cast<double>(raw.rho[j][h]) / denom;
    }
  }
  violations = validate_spec(spec);
  if (!violations.empty())
    throw ValidationError("normalized spec is invalid", std::move(violations));
  return spec;
}

SystemState::SystemState(std::size_t n_agents)
    : n_agents_(n_agents), d_star_(n_agents, 0), d_(n_agents, 0) {
  if (n_agents == 0) throw std::invalid_argument("SystemState: need at least one agent");
}

std::uint64_t SystemState::occupancy(ColorId c) const {
  std::uint64_t s = 0;
  for (auto k : counts(c)) s += k;
  return s;
}

ColorRecord SystemState::color(ColorId c) const {
  if (c >= n_colors()) throw std::out_of_range("unknown color id " + std::to_string(c));
  auto k = counts(c);
  return {c, producer_[c], {k.begin(), k.end()}, first_time_[c]};
}

void SystemState::reserve_colors(std::size_t n) {
  counts_.reserve(n * n_agents_);
  producer_.reserve(n);
  first_time_.reserve(n);
}

void SystemState::apply_step(std::span<const Choice> choices, std::vector<DrawEvent>& out) {
  if (choices.size() != n_agents_)
    throw std::invalid_argument("apply_step: expected one choice per agent");
  const auto before = static_cast<ColorId>(n_colors());
  for (std::size_t h = 0; h < n_agents_; ++h)
    if (choices[h] && *choices[h] >= before)
      throw std::out_of_range("apply_step: agent " + std::to_string(h + 1) +
                              " chose unknown color " + std::to_string(*choices[h]));

  const std::uint64_t t = ++t_;
  out.resize(n_agents_);
  for (std::size_t h = 0; h < n_agents_; ++h) {
    DrawEvent& ev = out[h];
    ev.t = t;
    ev.agent = static_cast<std::uint32_t>(h);
    if (!choices[h]) {
      const auto id = static_cast<ColorId>(n_colors());
      counts_.resize(counts_.size() + n_agents_, 0);
      producer_.push_back(h);
      first_time_.push_back(t);
      ++d_star_[h];
      ev.color = id;
      ev.new_system = true;
    } else {
      ev.color = *choices[h];
      ev.new_system = false;
    }
  }
  // Counts are applied after every id is fixed so that "new for agent" is
  // judged against the pre-step state.
  for (std::size_t h = 0; h < n_agents_; ++h) {
    DrawEvent& ev = out[h];
    auto& k = counts_[std::size_t{ev.color} * n_agents_ + h];
    ev.new_agent = (k == 0);
    if (ev.new_agent) ++d_[h];
    ++k;
  }
}

std::vector<DrawEvent> SystemState::apply_step(std::span<const Choice> choices) {
  std::vector<DrawEvent> out;
  apply_step(choices, out);
  return out;
}

double birth_mass(const InteractionSpec& spec, const SystemState& state, Agent h) {
  double m = spec.theta[h];
  for (std::size_t j = 0; j < state.n_agents(); ++j)
    m += spec.gamma(j, h) * static_cast<double>(state.d_star(j));
  return m;
}

double old_color_weight(const InteractionSpec& spec, const SystemState& state, Agent h,
                        ColorId c) {
  if (c >= state.n_colors()) throw std::out_of_range("unknown color id " + std::to_string(c));
  double s = 0.0;
  const auto k = state.counts(c);
  for (std::size_t j = 0; j < state.n_agents(); ++j)
    s += spec.w(j, h) * static_cast<double>(k[j]);
  // Non-negative by balance since K_t(j*(c), c) >= 1; a numerator at the
  // rounding level of s is an exact zero (e.g. lambda_{j*,h} = 0, K = 1).
  const double num = s - spec.gamma(state.producer(c), h);
  return num <= 1e-12 * s ? 0.0 : num;
}

double birth_probability(const InteractionSpec& spec, const SystemState& state, Agent h) {
  return birth_mass(spec, state, h) / (spec.theta[h] + static_cast<double>(state.t()));
}

double old_color_probability(const InteractionSpec& spec, const SystemState& state, Agent h,
                             ColorId c) {
  return old_color_weight(spec, state, h, c) /
         (spec.theta[h] + static_cast<double>(state.t()));
}

}  // namespace urnet
