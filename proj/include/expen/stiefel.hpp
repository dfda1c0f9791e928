#pragma once

// Stiefel manifold utilities: projection, tangent space, Riemannian
// derivatives, and certification of penalty iterates.

#include "expen/linalg.hpp"
#include "expen/model.hpp"

namespace expen {

/// ||X^T X - I_p||_F
double feasibility(const Matrix& x);

/// Polar factor U V^T of the thin SVD. Throws DegenerateProjection when
/// s_min < 1e-12 s_max, where the nearest Stiefel point is not unique.
Matrix project_stiefel(const Matrix& x);

/// D - X sym(X^T D). X must be feasible to 1e-8.
Matrix tangent_project(const Matrix& x, const Matrix& d);

/// grad f(X) - X sym(X^T grad f(X)).
Matrix riemannian_grad(const SmoothObjective& obj, const Matrix& x);

/// <D, hess f(X)[D] - D sym(X^T grad f(X))> for tangent D.
double riemannian_hess_quadform(const SmoothObjective& obj, const Matrix& x,
                                const Matrix& d);

/// Bilinear version of the Riemannian Hessian form, for basis assembly.
double riemannian_hess_form(const SmoothObjective& obj, const Matrix& x,
                            const Matrix& d1, const Matrix& d2);

struct StationarityReport {
  double grad_h_norm = 0.0;               // ||grad h(X)||_F
  double feasibility = 0.0;               // ||X^T X - I||_F
  double projected_riem_grad_norm = 0.0;  // ||grad f(P_S(X))||_F
  double certified_bound = 0.0;           // 2 ||grad h(X)||_F
  // feasibility <= 1/6. The beta threshold of the bound is not checkable.
  bool in_certified_region = false;
};

StationarityReport stationarity_report(const ExPenModel& model, const Matrix& x);

struct PostprocessResult {
  Matrix point;     // P_S(X)
  double decrease;  // h(X) - h(P_S(X))
};

PostprocessResult postprocess(const ExPenModel& model, const Matrix& x);

}  // namespace expen
