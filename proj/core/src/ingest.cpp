#include "urnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "urnet/errors.hpp"
#include "urnet/rng.hpp"

namespace urnet {

namespace {

bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return !is_continuation(static_cast<unsigned char>(c)); }));
}

template <class T>
bool parse_uint(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

bool parse_flag(std::string_view s, bool& out) {
  if (s == "1" || s == "true") return out = true, true;
  if (s == "0" || s == "false") return out = false, true;
  return false;
}

std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + p.string());
  return in;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions& options) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::string tok = options.stemmer ? options.stemmer(cur) : std::move(cur);
    if (code_points(tok) >= options.min_len) out.push_back(std::move(tok));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || c >= 0x80 || (!options.strip_numbers && c >= '0' && c <= '9')) {
      cur.push_back(ch);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>> equalize(
    std::vector<std::string> a, std::vector<std::string> b, std::uint64_t seed) {
  auto& longer = a.size() >= b.size() ? a : b;
  const std::size_t target = std::min(a.size(), b.size());
  const std::size_t n = longer.size();
  if (n == target) return {std::move(a), std::move(b)};
  // Partial Fisher-Yates picks the n - target indices to drop.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  const std::size_t drop = n - target;
  for (std::size_t i = 0; i < drop; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  std::vector<char> removed(n, 0);
  for (std::size_t i = 0; i < drop; ++i) removed[idx[i]] = 1;
  std::vector<std::string> kept;
  kept.reserve(target);
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) kept.push_back(std::move(longer[i]));
  longer = std::move(kept);
  return {std::move(a), std::move(b)};
}

ObservationLog build_observations(std::vector<ObservationRow> rows, std::size_t n_agents,
                                  const PairOptions& options,
                                  std::function<std::string(std::size_t)> where) {
  if (n_agents == 0) throw ValidationError("observations need at least one agent");
  if (rows.empty()) throw ValidationError("no observations");
  if (!where) where = [](std::size_t i) { return "row " + std::to_string(i + 1); };

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rows[x].t != rows[y].t ? rows[x].t < rows[y].t : rows[x].agent < rows[y].agent;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& r = rows[order[i]];
    if (r.t == 0) throw ValidationError(where(order[i]) + ": time-steps start at 1");
    if (r.agent >= n_agents)
      throw ValidationError(where(order[i]) + ": agent " + std::to_string(r.agent + 1) +
                            " out of range");
    if (i > 0 && rows[order[i - 1]].t == r.t && rows[order[i - 1]].agent == r.agent)
      throw ValidationError("duplicate row for t=" + std::to_string(r.t) + ", agent " +
                            std::to_string(r.agent + 1) + " (" + where(order[i - 1]) + " and " +
                            where(order[i]) + ")");
  }
  const std::uint64_t horizon = rows[order.back()].t;
  if (rows.size() != horizon * n_agents) {
    for (std::size_t i = 0;; ++i) {
      const std::uint64_t t = i / n_agents + 1;
      const auto agent = static_cast<std::uint32_t>(i % n_agents);
      if (i >= order.size() || rows[order[i]].t != t || rows[order[i]].agent != agent)
        throw ValidationError("missing row for t=" + std::to_string(t) + ", agent " +
                              std::to_string(agent + 1));
    }
  }

  ObservationLog log;
  log.n_agents = n_agents;
  std::unordered_map<std::string, ColorId> ids;
  std::vector<std::vector<char>> adopted(n_agents);
  std::vector<const std::string*> fresh;  // new keys of the current step
  for (std::uint64_t s = 0; s < horizon; ++s) {
    const std::size_t base = s * n_agents;
    fresh.clear();
    bool collide = false;
    for (std::size_t h = 0; h < n_agents && !collide; ++h) {
      const std::string& key = rows[order[base + h]].item;
      if (ids.contains(key)) continue;
      for (std::size_t g = 0; g < h; ++g) {
        if (rows[order[base + g]].item != key) continue;
        if (!options.drop_colliding)
          throw ValidationError("item \"" + key + "\" first appears for agents " +
                                std::to_string(g + 1) + " and " + std::to_string(h + 1) +
                                " at t=" + std::to_string(s + 1) + " (" + where(order[base + h]) +
                                ")");
        collide = true;
        break;
      }
    }
    if (collide) continue;
    const std::uint64_t t = ++log.horizon;
    for (std::size_t h = 0; h < n_agents; ++h) {
      const std::string& key = rows[order[base + h]].item;
      DrawEvent ev;
      ev.t = t;
      ev.agent = static_cast<std::uint32_t>(h);
      auto it = ids.find(key);
      if (it == ids.end()) {
        it = ids.emplace(key, static_cast<ColorId>(log.item_keys.size())).first;
        log.item_keys.push_back(key);
        ev.new_system = true;
      }
      ev.color = it->second;
      auto& seen = adopted[h];
      if (seen.size() <= ev.color) seen.resize(log.item_keys.size(), 0);
      ev.new_agent = !seen[ev.color];
      seen[ev.color] = 1;
      log.events.push_back(ev);
    }
  }
  if (log.horizon == 0) throw ValidationError("every step collided; no observations left");
  return log;
}

ObservationLog pair_streams(std::span<const std::vector<std::string>> streams,
                            const PairOptions& options) {
  if (streams.empty()) throw ValidationError("pair_streams: no streams");
  const std::size_t len = streams[0].size();
  for (std::size_t h = 1; h < streams.size(); ++h)
    if (streams[h].size() != len)
      throw ValidationError("streams have different lengths (" + std::to_string(len) + " and " +
                            std::to_string(streams[h].size()) + "); equalize them first");
  std::vector<ObservationRow> rows;
  rows.reserve(len * streams.size());
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t h = 0; h < streams.size(); ++h)
      rows.push_back({i + 1, static_cast<std::uint32_t>(h), streams[h][i]});
  const std::size_t n = streams.size();
  return build_observations(std::move(rows), n, options, [n](std::size_t i) {
    return "stream " + std::to_string(i % n + 1) + " position " + std::to_string(i / n + 1);
  });
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ValidationError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

ObservationLog read_observations_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(source + ": empty file");
  const auto header = split_csv_record(trim_cr(line));
  auto column = [&](std::string_view name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto c_t = column("t"), c_agent = column("agent"), c_item = column("item");
  const auto c_ns = column("new_system"), c_na = column("new_agent");
  if (c_t < 0 || c_agent < 0 || c_item < 0)
    throw ValidationError(source + ": header must name columns t, agent, item");

  struct Flags {
    std::optional<bool> ns, na;
  };
  std::vector<ObservationRow> rows;
  std::vector<std::size_t> line_no;
  std::vector<Flags> flags;
  std::size_t n_agents = 0;
  std::size_t ln = 1;
  auto fail = [&](const std::string& msg) {
    throw ValidationError(source + ": line " + std::to_string(ln) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++ln;
    line = trim_cr(std::move(line));
    if (line.empty()) continue;
    std::vector<std::string> f;
    try {
      f = split_csv_record(line);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    if (f.size() != header.size())
      fail("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    ObservationRow row;
    std::uint32_t agent = 0;
    if (!parse_uint(f[c_t], row.t) || row.t == 0) fail("bad time-step \"" + f[c_t] + "\"");
    if (!parse_uint(f[c_agent], agent) || agent == 0) fail("bad agent \"" + f[c_agent] + "\"");
    row.agent = agent - 1;
    row.item = f[c_item];
    Flags fl;
    bool b = false;
    if (c_ns >= 0) {
      if (!parse_flag(f[c_ns], b)) fail("bad new_system flag \"" + f[c_ns] + "\"");
      fl.ns = b;
    }
    if (c_na >= 0) {
      if (!parse_flag(f[c_na], b)) fail("bad new_agent flag \"" + f[c_na] + "\"");
      fl.na = b;
    }
    n_agents = std::max<std::size_t>(n_agents, agent);
    rows.push_back(std::move(row));
    line_no.push_back(ln);
    flags.push_back(fl);
  }
  if (rows.empty()) throw ValidationError(source + ": no data rows");

  // Same order build_observations uses, so events line up with rows.
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rows[x].t != rows[y].t ? rows[x].t < rows[y].t : rows[x].agent < rows[y].agent;
  });
  ObservationLog log = build_observations(rows, n_agents, {}, [&](std::size_t i) {
    return source + ": line " + std::to_string(line_no[i]);
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Flags& fl = flags[order[i]];
    const DrawEvent& ev = log.events[i];
    if ((fl.ns && *fl.ns != ev.new_system) || (fl.na && *fl.na != ev.new_agent))
      throw ValidationError(source + ": line " + std::to_string(line_no[order[i]]) +
                            ": new-flags disagree with the first appearances in the log");
  }
  return log;
}

ObservationLog load_observations(const std::filesystem::path& csv) {
  auto in = open_in(csv);
  return read_observations_csv(in, csv.string());
}

ObservationLog load_observations(const std::filesystem::path& csv,
                                 const std::filesystem::path& dictionary) {
  ObservationLog log = load_observations(csv);
  auto in = open_in(dictionary);
  std::string line;
  std::getline(in, line);
  if (split_csv_record(trim_cr(line)) != std::vector<std::string>{"item_id", "item_key"})
    throw ValidationError(dictionary.string() + ": header must be item_id,item_key");
  std::unordered_map<std::string, std::string> keys;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    line = trim_cr(std::move(line));
    if (line.empty()) continue;
    auto f = split_csv_record(line);
    if (f.size() != 2)
      throw ValidationError(dictionary.string() + ": line " + std::to_string(ln) + ": expected 2 fields");
    if (!keys.emplace(std::move(f[0]), std::move(f[1])).second)
      throw ValidationError(dictionary.string() + ": line " + std::to_string(ln) + ": duplicate item_id");
  }
  for (auto& k : log.item_keys) {
    const auto it = keys.find(k);
    if (it == keys.end())
      throw ValidationError(dictionary.string() + ": no key for item " + k);
    k = it->second;
  }
  return log;
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim_cr(std::move(line));
    if (!line.empty()) out.push_back(std::move(line));
  }
  return out;
}

std::string read_text(const std::filesystem::path& file) {
  auto in = open_in(file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

ObservationLog load_parallel_files(std::span<const std::filesystem::path> files,
                                   const PairOptions& options) {
  std::vector<std::vector<std::string>> streams;
  for (const auto& f : files) streams.push_back(read_lines(f));
  return pair_streams(streams, options);
}

void write_events_csv(std::ostream& out, EventView v) {
  std::string buf = "t,agent,item,new_system,new_agent\n";
  char num[24];
  auto put = [&](std::uint64_t x) {
    const auto r = std::to_chars(num, num + sizeof num, x);
    buf.append(num, r.ptr);
  };
  for (const auto& ev : v.events) {
    put(ev.t);
    buf.push_back(',');
    put(ev.agent + 1ULL);
    buf.push_back(',');
    put(ev.color);
    buf.append(ev.new_system ? ",1," : ",0,");
    buf.append(ev.new_agent ? "1\n" : "0\n");
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_dictionary_csv(std::ostream& out, const ObservationLog& log) {
  out << "item_id,item_key\n";
  for (std::size_t i = 0; i < log.item_keys.size(); ++i)
    out << i << ',' << csv_escape(log.item_keys[i]) << '\n';
}

void write_observations(const ObservationLog& log, const std::filesystem::path& csv,
                        const std::filesystem::path& dictionary) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + csv.string());
  write_events_csv(out, view(log));
  std::ofstream dict(dictionary, std::ios::binary);
  if (!dict) throw std::runtime_error("cannot write " + dictionary.string());
  write_dictionary_csv(dict, log);
}

}  // namespace urnet
