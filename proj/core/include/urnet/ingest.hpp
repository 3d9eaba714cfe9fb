#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urnet/events.hpp"

namespace urnet {

struct TokenizeOptions {
  std::size_t min_len = 3;  // in code points
  bool strip_numbers = true;
  // Applied to each lowercased token before the length filter; e.g. a
  // Porter stemmer. Unset by default.
  std::function<std::string(std::string_view)> stemmer;
};

// Lowercases ASCII letters; ASCII letters and non-ASCII UTF-8 sequences
// form tokens, everything else separates them (digits too unless
// strip_numbers is false).
std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions& options = {});

// Removes uniformly chosen elements of the longer stream until both have
// equal length. Survivors keep their order.
std::pair<std::vector<std::string>, std::vector<std::string>> equalize(
    std::vector<std::string> a, std::vector<std::string> b, std::uint64_t seed);

struct PairOptions {
  // Instead of failing, drop every step where one item is new for two
  // agents at once; later steps move up.
  bool drop_colliding = false;
};

// Step t pairs element t-1 of every stream. Streams must have equal length.
ObservationLog pair_streams(std::span<const std::vector<std::string>> streams,
                            const PairOptions& options = {});

// One observed row: 1-based time-step and 0-based agent.
struct ObservationRow {
  std::uint64_t t = 0;
  std::uint32_t agent = 0;
  std::string item;
};

// Sorts rows by (t, agent), checks that every (t, agent) with
// t in 1..max t occurs exactly once, and derives dense ids, producers and
// new flags. `where` names a row for messages (e.g. "line 12").
ObservationLog build_observations(std::vector<ObservationRow> rows, std::size_t n_agents,
                                  const PairOptions& options = {},
                                  std::function<std::string(std::size_t)> where = {});

// CSV with a header naming at least t, agent, item (agents 1-based). When
// new_system / new_agent columns are present they are checked against the
// derived flags. A sidecar `item_id,item_key` dictionary, if given, maps
// integer items back to their keys.
ObservationLog read_observations_csv(std::istream& in, const std::string& source = "input");
ObservationLog load_observations(const std::filesystem::path& csv);
ObservationLog load_observations(const std::filesystem::path& csv,
                                 const std::filesystem::path& dictionary);
// One item per line, one file per agent.
ObservationLog load_parallel_files(std::span<const std::filesystem::path> files,
                                   const PairOptions& options = {});
std::vector<std::string> read_lines(const std::filesystem::path& file);
std::string read_text(const std::filesystem::path& file);

// `t,agent,item,new_system,new_agent`, agents 1-based, items as dense ids.
void write_events_csv(std::ostream& out, EventView v);
void write_dictionary_csv(std::ostream& out, const ObservationLog& log);
void write_observations(const ObservationLog& log, const std::filesystem::path& csv,
                        const std::filesystem::path& dictionary);

// Splits one CSV record (RFC 4180 quoting). Exposed for the tests.
std::vector<std::string> split_csv_record(std::string_view line);
std::string csv_escape(std::string_view field);

}  // namespace urnet
