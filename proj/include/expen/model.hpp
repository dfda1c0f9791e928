#pragma once

// The ExPen penalty h(X) = f(X A(X)) + (beta/4) ||X^T X - I||_F^2 with
// A(X) = 1.5 I - 0.5 X^T X, together with its gradient and Hessian action.

#include "expen/linalg.hpp"

#include <functional>

namespace expen {

/// Oracle bundle for a smooth objective f on R^{n x p}.
///
/// `hess_vec` may be left empty; second-order operations then fail with
/// ErrorCode::Capability. Oracles must be reentrant.
struct SmoothObjective {
  using ValueFn = std::function<double(const Matrix&)>;
  using GradientFn = std::function<Matrix(const Matrix&)>;
  using HessVecFn = std::function<Matrix(const Matrix&, const Matrix&)>;

  Index n = 0;
  Index p = 0;
  ValueFn value;
  GradientFn gradient;
  HessVecFn hess_vec;

  bool has_hess_vec() const { return static_cast<bool>(hess_vec); }
};

/// Value and gradient of h from a single pass over the shared intermediates.
struct PenaltyEval {
  double value = 0.0;
  Matrix gradient;
};

/// X -> X A(X).
Matrix apen_map(const Matrix& x);

/// J_X(D) = D A(X) - X sym(D^T X), the (self-adjoint) Jacobian of apen_map.
Matrix jx_apply(const Matrix& x, const Matrix& d);

class ExPenModel {
 public:
  ExPenModel(SmoothObjective objective, double beta);

  /// beta = ||grad f(X0)||_F / 10, the usual heuristic for an initial point X0.
  static ExPenModel with_default_beta(SmoothObjective objective, const Matrix& x0);
  static double default_beta(const SmoothObjective& objective, const Matrix& x0);

  const SmoothObjective& objective() const { return objective_; }
  double beta() const { return beta_; }
  Index rows() const { return objective_.n; }
  Index cols() const { return objective_.p; }

  double value(const Matrix& x) const;
  Matrix gradient(const Matrix& x) const;

  /// One objective gradient call plus O(np^2) matrix work.
  PenaltyEval evaluate(const Matrix& x) const;

  /// grad h(X) with the penalty term dropped, i.e. the gradient of
  /// g(X) = f(X A(X)).
  Matrix smoothed_gradient(const Matrix& x) const;

  /// G(X) = grad f evaluated at X A(X).
  Matrix outer_gradient(const Matrix& x) const;

  Matrix hess_vec(const Matrix& x, const Matrix& d) const;

 private:
  void check_point(const Matrix& x, const char* what) const;

  SmoothObjective objective_;
  double beta_;
};

}  // namespace expen
