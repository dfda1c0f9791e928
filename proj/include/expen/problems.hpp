#pragma once

// Benchmark objectives and reproducible random inputs.

#include "expen/linalg.hpp"
#include "expen/model.hpp"

#include <cstdint>

namespace expen {

/// f(X) = 0.5 tr(X^T L X) + (alpha/4) rho^T L^{-1} rho,  rho = diag(X X^T),
/// with L the n x n tridiagonal (2, -1) stencil.
SmoothObjective nleig_make(Index n, Index p, double alpha);

/// f(X) = 0.5 tr(X^T B X C) for symmetric B (n x n) and C (p x p).
SmoothObjective brockett_make(const Matrix& b, const Matrix& c);

/// B = sym(Z_n), C = sym(Z_p) with standard-normal Z, drawn from `seed`.
SmoothObjective brockett_random(Index n, Index p, std::uint64_t seed);

/// B = diag(1..n), C = diag(p..1). Its minimum over the manifold pairs the
/// smallest entries of B with the largest of C.
SmoothObjective brockett_diagonal(Index n, Index p);

/// f == c. Useful where the penalty alone must explain the behaviour.
SmoothObjective constant_objective(Index n, Index p, double c = 0.0);

/// f(X) = <C, X>.
SmoothObjective linear_objective(const Matrix& c);

struct RandomSpec {
  Index n = 1;
  Index p = 1;
  std::uint64_t seed = 0;
};

/// Standard-normal n x p matrix drawn from `seed`.
Matrix random_normal(Index n, Index p, std::uint64_t seed);

/// Projection of a standard-normal matrix; retries with seed+1 up to 3 times
/// if the draw is rank deficient.
Matrix random_stiefel(const RandomSpec& spec);

}  // namespace expen
