#pragma once

#include <functional>
#include <vector>

namespace levilab {

/// Calls `visit` with every strictly increasing index list of length `k`
/// drawn from {0, ..., n-1}, in lexicographic order.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int t = i + 1; t < k; ++t) idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
  }
}

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  for_each_subset(n, k, [&](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

}  // namespace levilab
