#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cpb {

/// Fenwick tree over integer weights with O(log n) update, prefix sum and
/// weighted sampling by prefix descent. Integer weights keep the maintained
/// total exact, so event rates never drift from the true value.
class FenwickSampler {
 public:
  explicit FenwickSampler(std::uint32_t n) : n_(n), tree_(n + 1, 0), total_(0) {
    size_ = 1;
    while (size_ * 2 <= n_) size_ *= 2;
  }

  void add(std::uint32_t i, std::int64_t delta) {
    total_ += delta;
    for (std::uint32_t idx = i + 1; idx <= n_; idx += idx & (0U - idx)) tree_[idx] += delta;
  }

  std::int64_t total() const { return total_; }

  std::int64_t prefix(std::uint32_t i) const {  // sum of [0, i)
    std::int64_t acc = 0;
    for (std::uint32_t idx = i; idx > 0; idx -= idx & (0U - idx)) acc += tree_[idx];
    return acc;
  }

  std::int64_t value(std::uint32_t i) const { return prefix(i + 1) - prefix(i); }

  /// Smallest index i with prefix(i + 1) > r, for r in [0, total).
  std::uint32_t sample(std::uint64_t r) const {
    if (r >= static_cast<std::uint64_t>(total_))
      throw std::out_of_range("FenwickSampler::sample: r out of range");
    std::uint32_t pos = 0;
    auto remaining = static_cast<std::int64_t>(r);
    for (std::uint32_t step = size_; step > 0; step /= 2) {
      std::uint32_t next = pos + step;
      if (next <= n_ && tree_[next] <= remaining) {
        remaining -= tree_[next];
        pos = next;
      }
    }
    return pos;  // zero-based element index
  }

 private:
  std::uint32_t n_;
  std::uint32_t size_;
  std::vector<std::int64_t> tree_;
  std::int64_t total_;
};

}  // namespace cpb
