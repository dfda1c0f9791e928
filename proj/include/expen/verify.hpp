#pragma once

// Numerical oracles that check the closed-form derivatives and the
// stationarity relationships between h and f independently of how they
// are implemented.

#include "expen/linalg.hpp"
#include "expen/model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace expen::verify {

struct CheckReport {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // max_rel_error <= tolerance
  Index samples = 0;

  /// `check name=<name> max_rel_error=<e> tolerance=<t> samples=<s> result=PASS|FAIL`
  std::string log_line() const;
};

CheckReport make_report(std::string name, double max_rel_error, double tolerance,
                        Index samples);

using ValueOracle = std::function<double(const Matrix&)>;
using GradientOracle = std::function<Matrix(const Matrix&)>;
using HessVecOracle = std::function<Matrix(const Matrix&, const Matrix&)>;
/// A linear map D -> op(X, D) depending on a base point.
using PointOperator = std::function<Matrix(const Matrix&, const Matrix&)>;

constexpr double kGradientTolerance = 1e-5;
constexpr double kHessVecTolerance = 1e-4;

/// Central differences with step 1e-6 (1 + ||X||_F) along `samples` random
/// unit directions U. Error per sample:
///   |fd - <grad, U>| / (1 + ||grad||_F).
CheckReport fd_gradient_check(const ValueOracle& value, const GradientOracle& gradient,
                              const Matrix& x, Index samples, std::uint64_t seed = 0,
                              double tolerance = kGradientTolerance);

/// Central differences of the gradient along random unit directions U:
///   ||fd - H[U]||_F / (1 + ||H[U]||_F).
CheckReport fd_hessvec_check(const GradientOracle& gradient, const HessVecOracle& hess_vec,
                             const Matrix& x, Index samples, std::uint64_t seed = 0,
                             double tolerance = kHessVecTolerance);

/// Dense hess h(X) in column-major vec(X) ordering (Eigen storage order).
/// Limited to np <= 2000. Throws Numerical if the raw assembly is asymmetric
/// beyond 1e-8 relative; returns the symmetrized matrix.
Matrix assemble_hessian(const ExPenModel& model, const Matrix& x);

/// Orthonormal basis of the tangent space at feasible X, obtained by
/// projecting the canonical basis and discarding images below 1e-10.
std::vector<Matrix> tangent_basis(const Matrix& x);

struct SpectrumCorrespondence {
  CheckReport check;                 // tangent eigenvalues matched in hess h
  Vector tangent_eigenvalues;        // of the Riemannian Hessian, ascending
  Vector penalty_eigenvalues;        // of hess h, ascending
  Vector unmatched_eigenvalues;      // the p(p+1)/2 left after matching
  bool normal_separated = false;     // min(unmatched) > max(tangent)

  bool passed() const { return check.passed && normal_separated; }
};

/// Requires ||grad f(X*)||_F <= 1e-8 at a feasible X*.
SpectrumCorrespondence spectrum_correspondence(const ExPenModel& model, const Matrix& x_star,
                                               double tolerance = 1e-6);

/// f == 0 at X = 0 is an infeasible stationary point of h; its Hessian is
/// -beta I, so lambda_min must equal -beta (<= -beta/24).
CheckReport strict_saddle_check(double beta, Index n = 3, Index p = 2);

/// <X E, grad g(X)> = -(3/2) <E^2, sym(X^T G(X))>, E = X^T X - I, over random
/// X with N(0, 1/n) entries. Error is normalized by the Cauchy-Schwarz scale
/// of both sides.
CheckReport inner_identity_check(const GradientOracle& smoothed_gradient,
                                 const GradientOracle& outer_gradient, Index n, Index p,
                                 Index samples, std::uint64_t seed = 0,
                                 double tolerance = 1e-10);
CheckReport inner_identity_check(const ExPenModel& model, Index samples,
                                 std::uint64_t seed = 0, double tolerance = 1e-10);

/// |<J(W), Z> - <W, J(Z)>| <= tol ||W|| ||Z|| (1 + ||X||^2) on random W, Z.
CheckReport selfadjoint_check(const PointOperator& op, const Matrix& x, Index samples,
                              std::uint64_t seed = 0, double tolerance = 1e-12);
CheckReport selfadjoint_check(const Matrix& x, Index samples, std::uint64_t seed = 0,
                              double tolerance = 1e-12);

}  // namespace expen::verify
