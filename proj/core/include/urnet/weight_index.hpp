#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace urnet {

// Binary indexed tree over non-negative weights supporting O(log n) point
// updates, prefix sums and inverse-prefix search. Capacity grows by
// doubling; unused slots hold zero.
class WeightIndex {
 public:
  WeightIndex() = default;
  explicit WeightIndex(std::span<const double> weights) { assign(weights); }

  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }

  void push_back(double w);
  void add(std::size_t i, double delta);
  void set(std::size_t i, double w) { add(i, w - weights_[i]); }
  double weight(std::size_t i) const { return weights_[i]; }

  // Sum of the first n weights.
  double prefix(std::size_t n) const;
  double total() const { return prefix(size()); }

  // Smallest i with prefix(i + 1) > x, i.e. the element hit by mass x.
  // For x outside [0, total) the last positive-weight element (or the
  // first, for x < 0) is returned. Precondition: total() > 0.
  std::size_t find(double x) const;

  void assign(std::span<const double> weights);
  // Recomputes every tree node from the stored weights, dropping
  // accumulated rounding error.
  void rebuild();

 private:
  void grow(std::size_t min_capacity);

  std::vector<double> weights_;
  std::vector<double> tree_{0.0};  // 1-based, tree_.size() == capacity + 1
  std::size_t capacity_ = 0;
};

}  // namespace urnet
