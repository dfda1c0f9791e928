#pragma once

// Dense linear-algebra substrate shared by every other module.

#include <Eigen/Dense>

#include <string_view>

namespace expen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Frobenius inner product <A, B> = tr(A^T B).
inline double inner(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

/// Symmetric part (M + M^T)/2 of a square matrix.
Matrix sym(const Matrix& m);

/// Throws Error(Dimension) unless `m` is rows x cols.
void require_shape(const Matrix& m, Index rows, Index cols, std::string_view what);

/// Throws Error(Numerical) if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

struct EconSVD {
  Matrix U;                // n x p, orthonormal columns
  Vector singular_values;  // p values, nonincreasing
  Matrix V;                // p x p orthogonal
};

/// Thin SVD X = U diag(s) V^T of an n x p matrix with n >= p.
EconSVD econ_svd(const Matrix& x);

/// Symmetric tridiagonal matrix stored by its diagonal and subdiagonal.
struct TridiagMatrix {
  Vector diag;
  Vector sub;  // length n-1; the superdiagonal is identical

  Index size() const { return diag.size(); }

  /// The Dirichlet Laplacian stencil: 2 on the diagonal, -1 off it.
  static TridiagMatrix laplacian(Index n);

  /// y = T x, applied column by column.
  Matrix apply(const Matrix& x) const;

  Matrix to_dense() const;
};

/// Thomas algorithm. `rhs` may have several columns; each is solved in O(n).
Matrix tridiag_solve(const TridiagMatrix& t, const Matrix& rhs);
Vector tridiag_solve(const TridiagMatrix& t, const Vector& rhs);

}  // namespace expen
