#include "sparkdet/rdd.hpp"

#include <algorithm>
#include <string>

#include "sparkdet/error.hpp"

namespace sparkdet {

namespace {

constexpr std::size_t kHardCap = 20;

void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (cap > kHardCap) {
    throw Error(Errc::cap_exceeded, std::string(what) + ": cap " + std::to_string(cap) +
                                        " is above the supported maximum " +
                                        std::to_string(kHardCap));
  }
  if (n > cap) {
    throw Error(Errc::cap_exceeded, std::string(what) + ": length " + std::to_string(n) +
                                        " exceeds cap " + std::to_string(cap));
  }
}

// k distinct values from [0, range), ascending (Floyd's sampling).
std::vector<std::size_t> random_subset(ChaosSource& chaos, std::size_t range, std::size_t k) {
  std::vector<std::size_t> picked;
  picked.reserve(k);
  for (std::size_t j = range - k; j < range; ++j) {
    const auto t = static_cast<std::size_t>(chaos.uniform(j + 1));
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) {
      picked.push_back(t);
    } else {
      picked.push_back(j);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

Partitioning random_partitioning(ChaosSource& chaos, std::size_t n) {
  Partitioning p;
  p.order = random_permutation(chaos, n);
  if (n == 0) return p;
  std::size_t run = 1;
  for (std::size_t gap = 0; gap + 1 < n; ++gap) {
    if (chaos.uniform(2) == 1) {
      p.block_sizes.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  p.block_sizes.push_back(run);
  return p;
}

Partitioning random_partitioning_into(ChaosSource& chaos, std::size_t n, std::size_t parts) {
  if (parts == 0 && n > 0) {
    throw Error(Errc::invalid_argument, "cannot split a non-empty list into zero partitions");
  }
  Partitioning p;
  p.order = random_permutation(chaos, n);
  if (parts == 0) return p;
  if (parts <= n) {
    const auto cuts = random_subset(chaos, n - 1, parts - 1);
    std::size_t prev = 0;
    for (std::size_t c : cuts) {
      p.block_sizes.push_back(c + 1 - prev);
      prev = c + 1;
    }
    p.block_sizes.push_back(n - prev);
  } else {
    p.block_sizes.assign(parts, 0);
    for (std::size_t slot : random_subset(chaos, parts, n)) p.block_sizes[slot] = 1;
  }
  return p;
}

PartitioningEnumerator::PartitioningEnumerator(std::size_t n, bool allow_empty_blocks,
                                               std::size_t cap)
    : n_(n), allow_empty_(allow_empty_blocks), order_(n) {
  check_cap(n, cap, "allPartitionings");
  for (std::size_t i = 0; i < n; ++i) order_[i] = i;
  mask_end_ = n == 0 ? 1 : (std::uint64_t{1} << (n - 1));
}

std::vector<std::size_t> PartitioningEnumerator::base_blocks() const {
  std::vector<std::size_t> blocks;
  if (n_ == 0) return blocks;
  std::size_t run = 1;
  for (std::size_t gap = 0; gap + 1 < n_; ++gap) {
    if (mask_ >> gap & 1) {
      blocks.push_back(run);
      run = 1;
    } else {
      ++run;
    }
  }
  blocks.push_back(run);
  return blocks;
}

std::optional<Partitioning> PartitioningEnumerator::next() {
  if (done_) return std::nullopt;

  Partitioning out{order_, base_blocks()};
  if (insert_ > 0) out.block_sizes.insert(out.block_sizes.begin() + (insert_ - 1), 0);

  // Advance: insertion slot, then composition, then permutation.
  const std::size_t blocks = n_ == 0 ? 0 : static_cast<std::size_t>(std::popcount(mask_)) + 1;
  if (allow_empty_ && insert_ < blocks + 1) {
    ++insert_;
  } else {
    insert_ = 0;
    if (++mask_ == mask_end_) {
      mask_ = 0;
      if (!std::next_permutation(order_.begin(), order_.end())) done_ = true;
    }
  }
  return out;
}

bool is_valid_plan(const ReductionPlan& plan, std::size_t n) {
  if (n == 0 || plan.merges.size() != n - 1) return false;
  std::size_t len = n;
  for (std::size_t idx : plan.merges) {
    if (idx + 1 >= len) return false;
    --len;
  }
  return true;
}

ReductionPlan random_plan(ChaosSource& chaos, std::size_t n) {
  ReductionPlan plan;
  for (std::size_t len = n; len > 1; --len) {
    plan.merges.push_back(static_cast<std::size_t>(chaos.uniform(len - 1)));
  }
  return plan;
}

ReductionOrderEnumerator::ReductionOrderEnumerator(std::size_t n, std::size_t cap) : n_(n) {
  if (n == 0) throw Error(Errc::invalid_argument, "allReductionOrders needs n >= 1");
  check_cap(n, cap, "allReductionOrders");
  digits_.assign(n - 1, 0);
}

std::optional<ReductionPlan> ReductionOrderEnumerator::next() {
  if (done_) return std::nullopt;
  ReductionPlan out{digits_};
  // Odometer: digit i ranges over [0, n - 2 - i]; the last digit moves fastest.
  std::size_t i = digits_.size();
  while (i > 0) {
    --i;
    if (digits_[i] + 2 + i < n_) {
      ++digits_[i];
      return out;
    }
    digits_[i] = 0;
  }
  done_ = true;
  return out;
}

}  // namespace sparkdet
