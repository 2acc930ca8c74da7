#pragma once

#include "sparsefs/core_linalg.hpp"
#include "sparsefs/types.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace testutil {

// Column-major standard-normal fill from a dedicated stream, so expected
// values can be derived independently of library internals.
inline sparsefs::Matrix randn(sparsefs::Index rows, sparsefs::Index cols,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  sparsefs::Matrix M(rows, cols);
  for (sparsefs::Index j = 0; j < cols; ++j)
    for (sparsefs::Index i = 0; i < rows; ++i) M(i, j) = gauss(rng);
  return M;
}

inline sparsefs::DataMatrix centered_data(sparsefs::Index d, sparsefs::Index n,
                                          std::uint64_t seed) {
  return sparsefs::center_columns(
      sparsefs::DataMatrix{randn(d, n, seed), false, {}});
}

inline std::vector<int> argsort_desc(const sparsefs::Vector& s) {
  std::vector<int> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&s](int a, int b) {
    if (s[a] != s[b]) return s[a] > s[b];
    return a < b;
  });
  return order;
}

// Rank-3 40x120 matrix plus small noise: a shape where the trace term
// matters and the projected iteration converges much faster than the raw one.
inline sparsefs::DataMatrix lowrank_data(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  sparsefs::Matrix G1(40, 3), G2(3, 120), G3(40, 120);
  for (sparsefs::Index j = 0; j < 3; ++j)
    for (sparsefs::Index i = 0; i < 40; ++i) G1(i, j) = gauss(rng);
  for (sparsefs::Index j = 0; j < 120; ++j)
    for (sparsefs::Index i = 0; i < 3; ++i) G2(i, j) = gauss(rng);
  for (sparsefs::Index j = 0; j < 120; ++j)
    for (sparsefs::Index i = 0; i < 40; ++i) G3(i, j) = gauss(rng);
  sparsefs::DataMatrix X{G1 * G2 + 0.1 * G3, false, {}};
  return sparsefs::center_columns(X);
}

}  // namespace testutil
