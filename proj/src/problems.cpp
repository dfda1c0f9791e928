#include "expen/problems.hpp"

#include "expen/error.hpp"
#include "expen/stiefel.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace expen {
namespace {

void require_dims(Index n, Index p, const char* what) {
  if (p < 1 || n < p) {
    std::ostringstream os;
    os << what << ": need n >= p >= 1, got n=" << n << " p=" << p;
    throw Error(ErrorCode::Dimension, os.str());
  }
}

void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::Dimension, std::string(what) + ": matrix must be square");
  }
  require_finite(m, what);
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-12 * (1.0 + m.norm())) {
    std::ostringstream os;
    os << what << ": matrix is not symmetric (||M - M^T||_F = " << asym << ")";
    throw Error(ErrorCode::Precondition, os.str());
  }
}

// diag(X X^T), i.e. squared row norms.
Vector row_density(const Matrix& x) { return x.rowwise().squaredNorm(); }

}  // namespace

SmoothObjective nleig_make(Index n, Index p, double alpha) {
  require_dims(n, p, "nleig_make");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "nleig_make: alpha must be finite and >= 0");
  }
  const TridiagMatrix lap = TridiagMatrix::laplacian(n);

  SmoothObjective obj;
  obj.n = n;
  obj.p = p;
  obj.value = [lap, alpha, n, p](const Matrix& x) {
    require_shape(x, n, p, "nleig value");
    const Vector rho = row_density(x);
    const double kinetic = 0.5 * inner(x, lap.apply(x));
    if (alpha == 0.0) return kinetic;
    return kinetic + 0.25 * alpha * rho.dot(tridiag_solve(lap, rho));
  };
  obj.gradient = [lap, alpha, n, p](const Matrix& x) {
    require_shape(x, n, p, "nleig gradient");
    Matrix g = lap.apply(x);
    if (alpha != 0.0) {
      const Vector potential = tridiag_solve(lap, row_density(x));
      g += alpha * (potential.asDiagonal() * x);
    }
    return g;
  };
  obj.hess_vec = [lap, alpha, n, p](const Matrix& x, const Matrix& d) {
    require_shape(x, n, p, "nleig hess_vec");
    require_shape(d, n, p, "nleig hess_vec direction");
    Matrix hd = lap.apply(d);
    if (alpha != 0.0) {
      const Vector potential = tridiag_solve(lap, row_density(x));
      // diag(X D^T + D X^T) = 2 * rowwise <x_i, d_i>
      const Vector drho = 2.0 * x.cwiseProduct(d).rowwise().sum();
      const Vector dpotential = tridiag_solve(lap, drho);
      hd += alpha * (potential.asDiagonal() * d + dpotential.asDiagonal() * x);
    }
    return hd;
  };
  return obj;
}

SmoothObjective brockett_make(const Matrix& b, const Matrix& c) {
  require_symmetric(b, "brockett_make B");
  require_symmetric(c, "brockett_make C");
  const Index n = b.rows();
  const Index p = c.rows();
  require_dims(n, p, "brockett_make");

  SmoothObjective obj;
  obj.n = n;
  obj.p = p;
  obj.value = [b, c, n, p](const Matrix& x) {
    require_shape(x, n, p, "brockett value");
    return 0.5 * inner(x, b * x * c);
  };
  obj.gradient = [b, c, n, p](const Matrix& x) -> Matrix {
    require_shape(x, n, p, "brockett gradient");
    return b * x * c;
  };
  obj.hess_vec = [b, c, n, p](const Matrix&, const Matrix& d) -> Matrix {
    require_shape(d, n, p, "brockett hess_vec direction");
    return b * d * c;
  };
  return obj;
}

SmoothObjective brockett_random(Index n, Index p, std::uint64_t seed) {
  require_dims(n, p, "brockett_random");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix zb(n, n);
  Matrix zc(p, p);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) zb(i, j) = normal(rng);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) zc(i, j) = normal(rng);
  return brockett_make(sym(zb), sym(zc));
}

SmoothObjective brockett_diagonal(Index n, Index p) {
  require_dims(n, p, "brockett_diagonal");
  const Vector b = Vector::LinSpaced(n, 1.0, static_cast<double>(n));
  const Vector c = Vector::LinSpaced(p, static_cast<double>(p), 1.0);
  return brockett_make(b.asDiagonal().toDenseMatrix(), c.asDiagonal().toDenseMatrix());
}

SmoothObjective constant_objective(Index n, Index p, double c) {
  require_dims(n, p, "constant_objective");
  SmoothObjective obj;
  obj.n = n;
  obj.p = p;
  obj.value = [c](const Matrix&) { return c; };
  obj.gradient = [](const Matrix& x) -> Matrix { return Matrix::Zero(x.rows(), x.cols()); };
  obj.hess_vec = [](const Matrix&, const Matrix& d) -> Matrix {
    return Matrix::Zero(d.rows(), d.cols());
  };
  return obj;
}

SmoothObjective linear_objective(const Matrix& c) {
  require_dims(c.rows(), c.cols(), "linear_objective");
  SmoothObjective obj;
  obj.n = c.rows();
  obj.p = c.cols();
  obj.value = [c](const Matrix& x) { return inner(c, x); };
  obj.gradient = [c](const Matrix&) -> Matrix { return c; };
  obj.hess_vec = [](const Matrix&, const Matrix& d) -> Matrix {
    return Matrix::Zero(d.rows(), d.cols());
  };
  return obj;
}

Matrix random_normal(Index n, Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) z(i, j) = normal(rng);
  return z;
}

Matrix random_stiefel(const RandomSpec& spec) {
  require_dims(spec.n, spec.p, "random_stiefel");
  for (std::uint64_t attempt = 0;; ++attempt) {
    try {
      return project_stiefel(random_normal(spec.n, spec.p, spec.seed + attempt));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateProjection || attempt >= 3) throw;
    }
  }
}

}  // namespace expen
