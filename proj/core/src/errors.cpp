#include "urnet/errors.hpp"

#include <sstream>

namespace urnet {

namespace {

std::string join_details(const std::string& what, const std::vector<std::string>& details) {
  std::ostringstream os;
  os << what;
  for (const auto& d : details) os << "\n  - " << d;
  return os.str();
}

std::string impossible_message(std::uint64_t t, std::size_t agent, std::uint32_t item) {
  std::ostringstream os;
  os << "impossible observation: agent " << agent + 1 << " adopting item " << item << " at t="
     << t << " has probability 0 under the given spec";
  return os.str();
}

}  // namespace

ValidationError::ValidationError(const std::string& what, std::vector<std::string> details)
    : std::invalid_argument(join_details(what, details)), details_(std::move(details)) {}

ImpossibleObservation::ImpossibleObservation(std::uint64_t t, std::size_t agent, std::uint32_t item)
    : std::domain_error(impossible_message(t, agent, item)), t_(t), agent_(agent), item_(item) {}

}  // namespace urnet
