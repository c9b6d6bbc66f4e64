#pragma once

// Quadratic dynamic-programming edit distance used as the reference for the
// bit-parallel similarity kernels. Insertion and deletion cost 1,
// substitution costs 2.

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace oracle {

inline std::size_t indel_sub2_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[n][m];
}

inline double ratio(std::u32string_view a, std::u32string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return static_cast<double>(total - indel_sub2_distance(a, b)) / static_cast<double>(total);
}

}  // namespace oracle
