#include "expen/stiefel.hpp"

#include "expen/error.hpp"

#include <sstream>

namespace expen {
namespace {

constexpr double kFeasibleTol = 1e-8;
constexpr double kTangentTol = 1e-10;
constexpr double kRankTol = 1e-12;

void require_feasible(const Matrix& x, const char* what) {
  const double feas = feasibility(x);
  if (!(feas <= kFeasibleTol)) {
    std::ostringstream os;
    os << what << ": point is not on the Stiefel manifold (||X^T X - I||_F = "
       << feas << ")";
    throw Error(ErrorCode::Precondition, os.str());
  }
}

void require_tangent(const Matrix& x, const Matrix& d, const char* what) {
  const double defect = sym(d.transpose() * x).norm();
  if (!(defect <= kTangentTol * (1.0 + d.norm()))) {
    std::ostringstream os;
    os << what << ": direction is not tangent (||sym(D^T X)||_F = " << defect << ")";
    throw Error(ErrorCode::Precondition, os.str());
  }
}

}  // namespace

double feasibility(const Matrix& x) {
  Matrix e = x.transpose() * x;
  e.diagonal().array() -= 1.0;
  return e.norm();
}

Matrix project_stiefel(const Matrix& x) {
  const EconSVD svd = econ_svd(x);
  const double smax = svd.singular_values(0);
  const double smin = svd.singular_values(svd.singular_values.size() - 1);
  if (!(smax > 0.0) || smin < kRankTol * smax) {
    std::ostringstream os;
    os << "project_stiefel: rank-deficient input (s_min=" << smin
       << ", s_max=" << smax << ")";
    throw Error(ErrorCode::DegenerateProjection, os.str());
  }
  return svd.U * svd.V.transpose();
}

Matrix tangent_project(const Matrix& x, const Matrix& d) {
  require_shape(d, x.rows(), x.cols(), "tangent_project");
  require_feasible(x, "tangent_project");
  return d - x * sym(x.transpose() * d);
}

Matrix riemannian_grad(const SmoothObjective& obj, const Matrix& x) {
  require_shape(x, obj.n, obj.p, "riemannian_grad");
  require_feasible(x, "riemannian_grad");
  const Matrix g = obj.gradient(x);
  return g - x * sym(x.transpose() * g);
}

double riemannian_hess_form(const SmoothObjective& obj, const Matrix& x,
                            const Matrix& d1, const Matrix& d2) {
  if (!obj.has_hess_vec()) {
    throw Error(ErrorCode::Capability, "riemannian_hess_form: objective has no Hessian oracle");
  }
  require_shape(x, obj.n, obj.p, "riemannian_hess_form");
  require_shape(d1, obj.n, obj.p, "riemannian_hess_form");
  require_shape(d2, obj.n, obj.p, "riemannian_hess_form");
  require_feasible(x, "riemannian_hess_form");
  require_tangent(x, d1, "riemannian_hess_form");
  require_tangent(x, d2, "riemannian_hess_form");
  const Matrix s = sym(x.transpose() * obj.gradient(x));
  return inner(d1, obj.hess_vec(x, d2) - d2 * s);
}

double riemannian_hess_quadform(const SmoothObjective& obj, const Matrix& x,
                                const Matrix& d) {
  return riemannian_hess_form(obj, x, d, d);
}

StationarityReport stationarity_report(const ExPenModel& model, const Matrix& x) {
  StationarityReport r;
  r.grad_h_norm = model.gradient(x).norm();
  r.feasibility = feasibility(x);
  const Matrix projected = project_stiefel(x);
  r.projected_riem_grad_norm = riemannian_grad(model.objective(), projected).norm();
  r.certified_bound = 2.0 * r.grad_h_norm;
  r.in_certified_region = r.feasibility <= 1.0 / 6.0;
  return r;
}

PostprocessResult postprocess(const ExPenModel& model, const Matrix& x) {
  Matrix projected = project_stiefel(x);
  const double decrease = model.value(x) - model.value(projected);
  return PostprocessResult{std::move(projected), decrease};
}

}  // namespace expen
