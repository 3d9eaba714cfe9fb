#include "urnet/weight_index.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace urnet {

namespace {
constexpr std::size_t lowbit(std::size_t i) { return i & (~i + 1); }
}  // namespace

void WeightIndex::grow(std::size_t min_capacity) {
  std::size_t cap = capacity_ ? capacity_ : 16;
  while (cap < min_capacity) cap *= 2;
  capacity_ = cap;
  rebuild();
}

void WeightIndex::rebuild() {
  tree_.assign(capacity_ + 1, 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i) tree_[i + 1] = weights_[i];
  for (std::size_t i = 1; i <= capacity_; ++i) {
    const std::size_t parent = i + lowbit(i);
    if (parent <= capacity_) tree_[parent] += tree_[i];
  }
}

void WeightIndex::assign(std::span<const double> weights) {
  weights_.assign(weights.begin(), weights.end());
  capacity_ = 0;
  grow(std::bit_ceil(std::max<std::size_t>(weights_.size(), 1)));
}

void WeightIndex::push_back(double w) {
  if (weights_.size() == capacity_) {
    weights_.push_back(0.0);
    grow(weights_.size());
  } else {
    weights_.push_back(0.0);
  }
  add(weights_.size() - 1, w);
}

void WeightIndex::add(std::size_t i, double delta) {
  if (i >= weights_.size()) throw std::out_of_range("WeightIndex::add: index out of range");
  weights_[i] += delta;
  for (std::size_t k = i + 1; k <= capacity_; k += lowbit(k)) tree_[k] += delta;
}

double WeightIndex::prefix(std::size_t n) const {
  double s = 0.0;
  for (std::size_t k = n; k > 0; k -= lowbit(k)) s += tree_[k];
  return s;
}

std::size_t WeightIndex::find(double x) const {
  if (weights_.empty()) throw std::out_of_range("WeightIndex::find on empty index");
  std::size_t pos = 0;
  double rem = x;
  for (std::size_t step = std::bit_floor(capacity_); step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= capacity_ && tree_[next] <= rem) {
      pos = next;
      rem -= tree_[next];
    }
  }
  if (pos < weights_.size() && weights_[pos] > 0.0) return pos;
  // Rounding pushed x past the last positive weight.
  std::size_t i = std::min(pos, weights_.size() - 1);
  for (;;) {
    if (weights_[i] > 0.0) return i;
    if (i == 0) break;
    --i;
  }
  for (i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) return i;
  throw std::out_of_range("WeightIndex::find: all weights are zero");
}

}  // namespace urnet
