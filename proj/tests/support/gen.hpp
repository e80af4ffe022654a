#pragma once

#include <cstdint>
#include <vector>

#include "sparkdet/chaos.hpp"
#include "sparkdet/rdd.hpp"

namespace testv {

using sparkdet::ChaosSource;
using sparkdet::Value;

inline std::int64_t small_int(ChaosSource& s, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(s.uniform(static_cast<std::uint64_t>(hi - lo + 1)));
}

inline std::vector<Value> random_ints(ChaosSource& s, std::size_t max_len, std::int64_t lo,
                                      std::int64_t hi) {
  std::vector<Value> xs;
  const auto n = s.uniform(max_len + 1);
  for (std::uint64_t i = 0; i < n; ++i) xs.push_back(Value::integer(small_int(s, lo, hi)));
  return xs;
}

inline std::vector<Value> random_floats(ChaosSource& s, std::size_t max_len) {
  static const double pool[] = {-1e20, 1e20, 600.0, 0.1, 0.2, 0.3, -2.5, 1.0, 3e-8};
  std::vector<Value> xs;
  const auto n = s.uniform(max_len + 1);
  for (std::uint64_t i = 0; i < n; ++i) xs.push_back(Value::real(pool[s.uniform(9)]));
  return xs;
}

/// A partitioning of xs into contiguous blocks, possibly with empty blocks
/// when allow_empty is set. Order is kept so fold laws can be stated.
inline sparkdet::Rdd random_split(ChaosSource& s, const std::vector<Value>& xs, bool allow_empty) {
  sparkdet::Rdd rdd;
  sparkdet::Partition cur;
  for (const auto& x : xs) {
    cur.push_back(x);
    if (s.uniform(3) == 0) {
      rdd.push_back(cur);
      cur.clear();
      if (allow_empty && s.uniform(4) == 0) rdd.emplace_back();
    }
  }
  if (!cur.empty() || (allow_empty && s.uniform(2) == 0)) rdd.push_back(cur);
  return rdd;
}

}  // namespace testv
