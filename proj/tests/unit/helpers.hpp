#pragma once

#include "expen/linalg.hpp"

#include <cstdint>
#include <random>

namespace expen::testing {

inline Matrix gaussian(Index n, Index p, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = dist(rng);
  return m;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// h_next <= h_prev up to the relative rounding level the line search resolves.
inline bool nonincreasing(double h_prev, double h_next) {
  return h_next <= h_prev + 1e-14 * (1.0 + std::abs(h_prev));
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / (1.0 + std::max(a.norm(), b.norm()));
}

}  // namespace expen::testing

#include <functional>
#include <limits>
#include <vector>

namespace expen::testing {

/// Minimum of f over signed selection matrices (distinct unit columns with
/// arbitrary signs). For diagonal Brockett data these contain the global
/// minimizers over the Stiefel manifold.
inline double signed_selection_minimum(const std::function<double(const Matrix&)>& f, Index n,
                                       Index p) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> rows(p);
  std::vector<bool> taken(n, false);
  std::function<void(Index)> place = [&](Index col) {
    if (col == p) {
      for (unsigned mask = 0; mask < (1u << p); ++mask) {
        Matrix x = Matrix::Zero(n, p);
        for (Index j = 0; j < p; ++j) x(rows[j], j) = (mask >> j) & 1u ? -1.0 : 1.0;
        best = std::min(best, f(x));
      }
      return;
    }
    for (Index r = 0; r < n; ++r) {
      if (taken[r]) continue;
      taken[r] = true;
      rows[col] = r;
      place(col + 1);
      taken[r] = false;
    }
  };
  place(0);
  return best;
}

}  // namespace expen::testing
