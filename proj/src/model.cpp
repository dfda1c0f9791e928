#include "expen/model.hpp"

#include "expen/error.hpp"

#include <cmath>
#include <sstream>

namespace expen {
namespace {

// X^T X - I_p
Matrix gram_defect(const Matrix& xtx) {
  return xtx - Matrix::Identity(xtx.rows(), xtx.cols());
}

// A(X) = 1.5 I - 0.5 X^T X
Matrix smoothing_factor(const Matrix& xtx) {
  Matrix a = -0.5 * xtx;
  a.diagonal().array() += 1.5;
  return a;
}

Matrix jx_apply_shared(const Matrix& x, const Matrix& a, const Matrix& d) {
  return d * a - x * sym(d.transpose() * x);
}

}  // namespace

Matrix apen_map(const Matrix& x) {
  return x * smoothing_factor(x.transpose() * x);
}

Matrix jx_apply(const Matrix& x, const Matrix& d) {
  require_shape(d, x.rows(), x.cols(), "jx_apply");
  return jx_apply_shared(x, smoothing_factor(x.transpose() * x), d);
}

ExPenModel::ExPenModel(SmoothObjective objective, double beta)
    : objective_(std::move(objective)), beta_(beta) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    std::ostringstream os;
    os << "ExPenModel: beta must be positive and finite, got " << beta_;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (objective_.n < 1 || objective_.p < 1 || objective_.n < objective_.p) {
    throw Error(ErrorCode::Dimension, "ExPenModel: need n >= p >= 1");
  }
  if (!objective_.value || !objective_.gradient) {
    throw Error(ErrorCode::InvalidArgument, "ExPenModel: objective lacks value or gradient");
  }
}

double ExPenModel::default_beta(const SmoothObjective& objective, const Matrix& x0) {
  require_shape(x0, objective.n, objective.p, "default_beta");
  return objective.gradient(x0).norm() / 10.0;
}

ExPenModel ExPenModel::with_default_beta(SmoothObjective objective, const Matrix& x0) {
  const double beta = default_beta(objective, x0);
  return ExPenModel(std::move(objective), beta);
}

void ExPenModel::check_point(const Matrix& x, const char* what) const {
  require_shape(x, objective_.n, objective_.p, what);
}

double ExPenModel::value(const Matrix& x) const {
  check_point(x, "ExPenModel::value");
  const Matrix xtx = x.transpose() * x;
  const double defect = gram_defect(xtx).squaredNorm();
  return objective_.value(x * smoothing_factor(xtx)) + 0.25 * beta_ * defect;
}

PenaltyEval ExPenModel::evaluate(const Matrix& x) const {
  check_point(x, "ExPenModel::evaluate");
  const Matrix xtx = x.transpose() * x;
  const Matrix a = smoothing_factor(xtx);
  const Matrix e = gram_defect(xtx);
  const Matrix y = x * a;
  const Matrix g = objective_.gradient(y);

  PenaltyEval out;
  out.value = objective_.value(y) + 0.25 * beta_ * e.squaredNorm();
  out.gradient = g * a - x * sym(x.transpose() * g) + beta_ * (x * e);
  return out;
}

Matrix ExPenModel::gradient(const Matrix& x) const {
  check_point(x, "ExPenModel::gradient");
  const Matrix xtx = x.transpose() * x;
  const Matrix a = smoothing_factor(xtx);
  const Matrix g = objective_.gradient(x * a);
  return g * a - x * sym(x.transpose() * g) + beta_ * (x * gram_defect(xtx));
}

Matrix ExPenModel::smoothed_gradient(const Matrix& x) const {
  check_point(x, "ExPenModel::smoothed_gradient");
  const Matrix a = smoothing_factor(x.transpose() * x);
  const Matrix g = objective_.gradient(x * a);
  return g * a - x * sym(x.transpose() * g);
}

Matrix ExPenModel::outer_gradient(const Matrix& x) const {
  check_point(x, "ExPenModel::outer_gradient");
  return objective_.gradient(apen_map(x));
}

Matrix ExPenModel::hess_vec(const Matrix& x, const Matrix& d) const {
  if (!objective_.has_hess_vec()) {
    throw Error(ErrorCode::Capability, "ExPenModel::hess_vec: objective has no Hessian oracle");
  }
  check_point(x, "ExPenModel::hess_vec");
  require_shape(d, x.rows(), x.cols(), "ExPenModel::hess_vec direction");

  const Matrix xtx = x.transpose() * x;
  const Matrix a = smoothing_factor(xtx);
  const Matrix y = x * a;
  const Matrix g = objective_.gradient(y);

  const Matrix jd = jx_apply_shared(x, a, d);
  const Matrix curvature = jx_apply_shared(x, a, objective_.hess_vec(y, jd));

  const Matrix dtx = d.transpose() * x;
  Matrix out = curvature - d * sym(x.transpose() * g) - x * sym(d.transpose() * g) -
               g * sym(dtx);
  out += beta_ * (2.0 * x * sym(dtx) + d * gram_defect(xtx));
  return out;
}

}  // namespace expen
