#include "expen/linalg.hpp"

#include "expen/error.hpp"

#include <cmath>
#include <sstream>

namespace expen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Dimension: return "dimension error";
    case ErrorCode::Numerical: return "numerical error";
    case ErrorCode::Capability: return "capability error";
    case ErrorCode::Precondition: return "precondition violated";
    case ErrorCode::DegenerateProjection: return "degenerate projection";
    case ErrorCode::SingularMatrix: return "singular matrix";
    case ErrorCode::LineSearchFailure: return "line search failure";
    case ErrorCode::NonDescent: return "non-descent direction";
    case ErrorCode::Io: return "I/O error";
  }
  return "unknown error";
}

Matrix sym(const Matrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "sym: expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
  return 0.5 * (m + m.transpose());
}

void require_shape(const Matrix& m, Index rows, Index cols, std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << what << ": expected " << rows << "x" << cols << ", got " << m.rows()
       << "x" << m.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::Numerical, std::string(what) + ": non-finite entry");
  }
}

EconSVD econ_svd(const Matrix& x) {
  if (x.rows() < x.cols() || x.cols() == 0) {
    std::ostringstream os;
    os << "econ_svd: need rows >= cols >= 1, got " << x.rows() << "x" << x.cols();
    throw Error(ErrorCode::Dimension, os.str());
  }
  require_finite(x, "econ_svd");

  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    const Vector& s = svd.singularValues();
    std::ostringstream os;
    os << "econ_svd: factorization did not converge (" << x.rows() << "x"
       << x.cols() << ", |X|_F=" << x.norm() << ", s_max=" << s.maxCoeff()
       << ", s_min=" << s.minCoeff() << ")";
    throw Error(ErrorCode::Numerical, os.str());
  }
  // Eigen already returns singular values in decreasing order.
  return EconSVD{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

TridiagMatrix TridiagMatrix::laplacian(Index n) {
  if (n < 1) throw Error(ErrorCode::Dimension, "laplacian: n must be positive");
  TridiagMatrix t;
  t.diag = Vector::Constant(n, 2.0);
  t.sub = Vector::Constant(n - 1, -1.0);
  return t;
}

Matrix TridiagMatrix::apply(const Matrix& x) const {
  const Index n = size();
  require_shape(x, n, x.cols(), "TridiagMatrix::apply");
  Matrix y(n, x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      double v = diag(i) * x(i, j);
      if (i > 0) v += sub(i - 1) * x(i - 1, j);
      if (i + 1 < n) v += sub(i) * x(i + 1, j);
      y(i, j) = v;
    }
  }
  return y;
}

Matrix TridiagMatrix::to_dense() const {
  const Index n = size();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, i) = diag(i);
    if (i + 1 < n) {
      d(i, i + 1) = sub(i);
      d(i + 1, i) = sub(i);
    }
  }
  return d;
}

Matrix tridiag_solve(const TridiagMatrix& t, const Matrix& rhs) {
  const Index n = t.size();
  if (t.sub.size() != std::max<Index>(n - 1, 0)) {
    throw Error(ErrorCode::Dimension, "tridiag_solve: subdiagonal length must be n-1");
  }
  require_shape(rhs, n, rhs.cols(), "tridiag_solve");

  // Forward elimination computes the modified superdiagonal once and reuses
  // it for every right-hand side column.
  Vector c(n);
  Vector denom(n);
  for (Index i = 0; i < n; ++i) {
    double d = t.diag(i);
    if (i > 0) d -= t.sub(i - 1) * c(i - 1);
    if (d == 0.0 || !std::isfinite(d)) {
      std::ostringstream os;
      os << "tridiag_solve: zero pivot at row " << i;
      throw Error(ErrorCode::SingularMatrix, os.str());
    }
    denom(i) = d;
    c(i) = (i + 1 < n) ? t.sub(i) / d : 0.0;
  }

  Matrix z(n, rhs.cols());
  for (Index j = 0; j < rhs.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      double v = rhs(i, j);
      if (i > 0) v -= t.sub(i - 1) * z(i - 1, j);
      z(i, j) = v / denom(i);
    }
    for (Index i = n - 2; i >= 0; --i) z(i, j) -= c(i) * z(i + 1, j);
  }
  return z;
}

Vector tridiag_solve(const TridiagMatrix& t, const Vector& rhs) {
  return tridiag_solve(t, Matrix(rhs)).col(0);
}

}  // namespace expen
