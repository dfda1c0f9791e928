#include "expen/verify.hpp"

#include "expen/error.hpp"
#include "expen/problems.hpp"
#include "expen/stiefel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace expen::verify {
namespace {

constexpr double kFdStep = 1e-6;
constexpr Index kMaxAssembly = 2000;
constexpr double kBasisDropTol = 1e-10;
constexpr double kStationaryTol = 1e-8;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  Matrix normal(Index n, Index p) {
    Matrix m(n, p);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < n; ++i) m(i, j) = dist_(rng_);
    return m;
  }

  Matrix unit(Index n, Index p) {
    Matrix m = normal(n, p);
    return m / m.norm();
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

Matrix basis_matrix(Index n, Index p, Index k) {
  Matrix e = Matrix::Zero(n, p);
  e(k % n, k / n) = 1.0;
  return e;
}

Vector symmetric_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::Numerical, "symmetric eigensolve did not converge");
  }
  return es.eigenvalues();
}

}  // namespace

std::string CheckReport::log_line() const {
  std::ostringstream os;
  os.precision(3);
  os << "check name=" << name << std::scientific << " max_rel_error=" << max_rel_error
     << " tolerance=" << tolerance << " samples=" << samples
     << " result=" << (passed ? "PASS" : "FAIL");
  return os.str();
}

CheckReport make_report(std::string name, double max_rel_error, double tolerance,
                        Index samples) {
  CheckReport r;
  r.name = std::move(name);
  r.max_rel_error = max_rel_error;
  r.tolerance = tolerance;
  r.passed = max_rel_error <= tolerance;
  r.samples = samples;
  return r;
}

CheckReport fd_gradient_check(const ValueOracle& value, const GradientOracle& gradient,
                              const Matrix& x, Index samples, std::uint64_t seed,
                              double tolerance) {
  const Matrix g = gradient(x);
  require_shape(g, x.rows(), x.cols(), "fd_gradient_check gradient");
  const double h = kFdStep * (1.0 + x.norm());
  const double scale = 1.0 + g.norm();

  Sampler sampler(seed);
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const Matrix u = sampler.unit(x.rows(), x.cols());
    const double fd = (value(x + h * u) - value(x - h * u)) / (2.0 * h);
    const double err = std::abs(fd - inner(g, u)) / scale;
    worst = std::max(worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
  }
  return make_report("fd_gradient", worst, tolerance, samples);
}

CheckReport fd_hessvec_check(const GradientOracle& gradient, const HessVecOracle& hess_vec,
                             const Matrix& x, Index samples, std::uint64_t seed,
                             double tolerance) {
  if (!hess_vec) {
    throw Error(ErrorCode::Capability, "fd_hessvec_check: no Hessian oracle");
  }
  const double h = kFdStep * (1.0 + x.norm());

  Sampler sampler(seed);
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const Matrix u = sampler.unit(x.rows(), x.cols());
    const Matrix fd = (gradient(x + h * u) - gradient(x - h * u)) / (2.0 * h);
    const Matrix hu = hess_vec(x, u);
    const double err = (fd - hu).norm() / (1.0 + hu.norm());
    worst = std::max(worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
  }
  return make_report("fd_hessvec", worst, tolerance, samples);
}

Matrix assemble_hessian(const ExPenModel& model, const Matrix& x) {
  const Index n = model.rows();
  const Index p = model.cols();
  const Index dim = n * p;
  if (dim > kMaxAssembly) {
    std::ostringstream os;
    os << "assemble_hessian: np = " << dim << " exceeds the limit of " << kMaxAssembly;
    throw Error(ErrorCode::Dimension, os.str());
  }
  require_shape(x, n, p, "assemble_hessian");

  Matrix hess(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    const Matrix col = model.hess_vec(x, basis_matrix(n, p, k));
    hess.col(k) = col.reshaped();
  }
  const double asym = (hess - hess.transpose()).norm();
  if (asym > 1e-8 * (1.0 + hess.norm())) {
    std::ostringstream os;
    os << "assemble_hessian: assembled Hessian is asymmetric (||H - H^T||_F = " << asym << ")";
    throw Error(ErrorCode::Numerical, os.str());
  }
  return sym(hess);
}

std::vector<Matrix> tangent_basis(const Matrix& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  std::vector<Matrix> basis;
  for (Index k = 0; k < n * p; ++k) {
    Matrix v = tangent_project(x, basis_matrix(n, p, k));
    // Two Gram-Schmidt passes keep the basis orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Matrix& b : basis) v -= inner(b, v) * b;
    }
    const double norm = v.norm();
    if (norm < kBasisDropTol) continue;
    basis.push_back(v / norm);
  }
  return basis;
}

SpectrumCorrespondence spectrum_correspondence(const ExPenModel& model, const Matrix& x_star,
                                               double tolerance) {
  const SmoothObjective& obj = model.objective();
  if (!obj.has_hess_vec()) {
    throw Error(ErrorCode::Capability, "spectrum_correspondence: objective has no Hessian oracle");
  }
  const double stationarity = riemannian_grad(obj, x_star).norm();
  if (!(stationarity <= kStationaryTol)) {
    std::ostringstream os;
    os << "spectrum_correspondence: point is not first-order stationary (||grad f||_F = "
       << stationarity << ")";
    throw Error(ErrorCode::Precondition, os.str());
  }

  const Index n = obj.n;
  const Index p = obj.p;
  const std::vector<Matrix> basis = tangent_basis(x_star);
  const Index tdim = static_cast<Index>(basis.size());
  if (tdim != n * p - p * (p + 1) / 2) {
    std::ostringstream os;
    os << "spectrum_correspondence: tangent basis has dimension " << tdim << ", expected "
       << n * p - p * (p + 1) / 2;
    throw Error(ErrorCode::Numerical, os.str());
  }

  // Riemannian Hessian on the basis: <B_i, hess f[B_j] - B_j sym(X^T grad f)>.
  const Matrix s = sym(x_star.transpose() * obj.gradient(x_star));
  std::vector<Matrix> images;
  images.reserve(basis.size());
  for (const Matrix& b : basis) images.push_back(obj.hess_vec(x_star, b) - b * s);
  Matrix riem(tdim, tdim);
  for (Index i = 0; i < tdim; ++i)
    for (Index j = 0; j < tdim; ++j) riem(i, j) = inner(basis[i], images[j]);

  SpectrumCorrespondence out;
  out.tangent_eigenvalues = symmetric_eigenvalues(sym(riem));
  out.penalty_eigenvalues = symmetric_eigenvalues(assemble_hessian(model, x_star));

  // Greedy nearest-eigenvalue assignment without replacement.
  std::vector<bool> used(out.penalty_eigenvalues.size(), false);
  double worst = 0.0;
  for (Index i = 0; i < tdim; ++i) {
    const double lambda = out.tangent_eigenvalues(i);
    Index best = -1;
    double best_gap = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < out.penalty_eigenvalues.size(); ++j) {
      if (used[j]) continue;
      const double gap = std::abs(out.penalty_eigenvalues(j) - lambda);
      if (gap < best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_gap / (1.0 + std::abs(lambda)));
  }

  std::vector<double> rest;
  for (Index j = 0; j < out.penalty_eigenvalues.size(); ++j)
    if (!used[j]) rest.push_back(out.penalty_eigenvalues(j));
  out.unmatched_eigenvalues = Eigen::Map<Vector>(rest.data(), static_cast<Index>(rest.size()));

  const double max_tangent = tdim > 0 ? out.tangent_eigenvalues.maxCoeff()
                                      : -std::numeric_limits<double>::infinity();
  out.normal_separated = rest.empty() || out.unmatched_eigenvalues.minCoeff() > max_tangent;
  out.check = make_report("spectrum_correspondence", worst, tolerance, tdim);
  return out;
}

CheckReport strict_saddle_check(double beta, Index n, Index p) {
  const ExPenModel model(constant_objective(n, p), beta);
  const Matrix hess = assemble_hessian(model, Matrix::Zero(n, p));
  const double lambda_min = symmetric_eigenvalues(hess).minCoeff();
  double err = std::abs(lambda_min + beta) / std::max(1.0, beta);
  if (!(lambda_min <= -beta / 24.0)) err = std::numeric_limits<double>::infinity();
  return make_report("strict_saddle", err, 1e-10, 1);
}

CheckReport inner_identity_check(const GradientOracle& smoothed_gradient,
                                 const GradientOracle& outer_gradient, Index n, Index p,
                                 Index samples, std::uint64_t seed, double tolerance) {
  Sampler sampler(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const Matrix x = scale * sampler.normal(n, p);
    Matrix e = x.transpose() * x;
    e.diagonal().array() -= 1.0;
    const Matrix xe = x * e;
    const Matrix grad_g = smoothed_gradient(x);
    const Matrix sg = sym(x.transpose() * outer_gradient(x));
    const Matrix e2 = e * e;

    const double lhs = inner(xe, grad_g);
    const double rhs = -1.5 * inner(e2, sg);
    const double denom = xe.norm() * grad_g.norm() + e2.norm() * sg.norm();
    const double err = denom > 0.0 ? std::abs(lhs - rhs) / denom : std::abs(lhs - rhs);
    worst = std::max(worst, err);
  }
  return make_report("inner_identity", worst, tolerance, samples);
}

CheckReport inner_identity_check(const ExPenModel& model, Index samples, std::uint64_t seed,
                                 double tolerance) {
  return inner_identity_check([&](const Matrix& x) { return model.smoothed_gradient(x); },
                              [&](const Matrix& x) { return model.outer_gradient(x); },
                              model.rows(), model.cols(), samples, seed, tolerance);
}

CheckReport selfadjoint_check(const PointOperator& op, const Matrix& x, Index samples,
                              std::uint64_t seed, double tolerance) {
  Sampler sampler(seed);
  const double xscale = 1.0 + x.squaredNorm();
  double worst = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const Matrix w = sampler.normal(x.rows(), x.cols());
    const Matrix z = sampler.normal(x.rows(), x.cols());
    const double gap = std::abs(inner(op(x, w), z) - inner(w, op(x, z)));
    worst = std::max(worst, gap / (w.norm() * z.norm() * xscale));
  }
  return make_report("selfadjoint", worst, tolerance, samples);
}

CheckReport selfadjoint_check(const Matrix& x, Index samples, std::uint64_t seed,
                              double tolerance) {
  return selfadjoint_check([](const Matrix& a, const Matrix& d) { return jx_apply(a, d); }, x,
                           samples, seed, tolerance);
}

}  // namespace expen::verify
