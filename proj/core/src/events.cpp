#include "urnet/events.hpp"

#include <algorithm>
#include <sstream>

#include "urnet/errors.hpp"

namespace urnet {

namespace {

[[noreturn]] void bad_step(std::uint64_t t, const std::string& why) {
  std::ostringstream os;
  os << "malformed log at t=" << t << ": " << why;
  throw ValidationError(os.str());
}

}  // namespace

Replayer::Replayer(EventView v) : view_(v), state_(v.n_agents) {
  if (v.n_agents == 0) throw ValidationError("log has zero agents");
  if (v.events.size() != v.horizon * v.n_agents) {
    std::ostringstream os;
    os << "log has " << v.events.size() << " events, expected horizon " << v.horizon << " x "
       << v.n_agents << " agents";
    throw ValidationError(os.str());
  }
  choices_.resize(v.n_agents);
}

std::span<const DrawEvent> Replayer::peek() const {
  return view_.events.subspan(step_ * view_.n_agents, view_.n_agents);
}

void Replayer::advance() {
  const auto step = peek();
  const std::uint64_t t = step_ + 1;
  auto next_id = static_cast<ColorId>(state_.n_colors());
  for (std::size_t h = 0; h < view_.n_agents; ++h) {
    const DrawEvent& ev = step[h];
    if (ev.t != t) bad_step(t, "event carries t=" + std::to_string(ev.t));
    if (ev.agent != h) bad_step(t, "expected agent " + std::to_string(h + 1) + ", found agent " +
                                       std::to_string(ev.agent + 1));
    if (ev.new_system) {
      if (ev.color != next_id)
        bad_step(t, "new item " + std::to_string(ev.color) + " breaks dense id order (expected " +
                        std::to_string(next_id) + ")");
      ++next_id;
      choices_[h] = std::nullopt;
    } else {
      if (ev.color >= state_.n_colors())
        bad_step(t, "agent " + std::to_string(h + 1) + " adopts item " + std::to_string(ev.color) +
                        " that is neither old nor flagged new");
      choices_[h] = ev.color;
    }
  }
  state_.apply_step(choices_, scratch_);
  for (std::size_t h = 0; h < view_.n_agents; ++h)
    if (scratch_[h].new_agent != step[h].new_agent)
      bad_step(t, "new_agent flag of agent " + std::to_string(h + 1) + " is inconsistent");
  ++step_;
}

SystemState replay(EventView v) {
  Replayer r(v);
  while (!r.done()) r.advance();
  return r.state();
}

ObservationLog swap_agents(EventView v, Agent a, Agent b) {
  if (a >= v.n_agents || b >= v.n_agents) throw std::out_of_range("swap_agents: bad agent");
  auto relabel = [&](std::uint32_t h) -> std::uint32_t {
    if (h == a) return static_cast<std::uint32_t>(b);
    if (h == b) return static_cast<std::uint32_t>(a);
    return h;
  };
  ObservationLog out;
  out.n_agents = v.n_agents;
  out.horizon = v.horizon;
  out.events.assign(v.events.begin(), v.events.end());
  for (auto& ev : out.events) ev.agent = relabel(ev.agent);
  std::stable_sort(out.events.begin(), out.events.end(), [](const DrawEvent& x, const DrawEvent& y) {
    return x.t != y.t ? x.t < y.t : x.agent < y.agent;
  });
  // Re-densify: within a step, new ids follow agent order.
  std::vector<ColorId> remap;
  std::vector<bool> seen;
  for (auto& ev : out.events) {
    if (ev.color >= remap.size()) {
      remap.resize(ev.color + 1, 0);
      seen.resize(ev.color + 1, false);
    }
    if (!seen[ev.color]) {
      seen[ev.color] = true;
      remap[ev.color] = static_cast<ColorId>(out.item_keys.size());
      out.item_keys.push_back(std::to_string(ev.color));
    }
    ev.color = remap[ev.color];
  }
  return out;
}

ObservationLog to_observations(const EventLog& log) {
  ObservationLog out;
  out.n_agents = log.spec.n_agents();
  out.horizon = log.horizon;
  out.events = log.events;
  ColorId max_id = 0;
  bool any = false;
  for (const auto& ev : log.events)
    if (ev.new_system) {
      max_id = std::max(max_id, ev.color);
      any = true;
    }
  if (any) {
    out.item_keys.reserve(max_id + 1);
    for (ColorId c = 0; c <= max_id; ++c) out.item_keys.push_back(std::to_string(c));
  }
  return out;
}

}  // namespace urnet
