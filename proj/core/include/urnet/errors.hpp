#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace urnet {

// Bad input: malformed specs, logs, files or option values. The CLI maps
// this family to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
  ValidationError(const std::string& what, std::vector<std::string> details);

  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  std::vector<std::string> details_;
};

// Internal bookkeeping diverged (e.g. sampler weight totals drifted).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An observed event has probability zero under the candidate model.
class ImpossibleObservation : public std::domain_error {
 public:
  ImpossibleObservation(std::uint64_t t, std::size_t agent, std::uint32_t item);

  std::uint64_t t() const noexcept { return t_; }
  std::size_t agent() const noexcept { return agent_; }
  std::uint32_t item() const noexcept { return item_; }

 private:
  std::uint64_t t_;
  std::size_t agent_;
  std::uint32_t item_;
};

class NotConvergedError : public std::runtime_error {
 public:
  NotConvergedError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace urnet
