#pragma once

// Dense kernels shared by every other module. Eigen does the factorizations;
// this layer pins ordering, sign and truncation conventions on top of it.

#include "dualgraph/core.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dualgraph {

template <typename Scalar>
struct EigPair {
  Matrix<Scalar> vectors;  // orthogonal, column i pairs with values(i)
  Vector<Scalar> values;   // ascending
};

template <typename Scalar>
struct SvdResult {
  Matrix<Scalar> U;         // m x k
  Vector<Scalar> singular;  // k, descending
  Matrix<Scalar> Z;         // n x k
};

/// Flips each column so its largest-magnitude entry is positive (first
/// occurrence wins on ties).
template <typename Derived>
void normalize_column_signs(Eigen::MatrixBase<Derived>& V) {
  for (Index j = 0; j < V.cols(); ++j) {
    Index arg = 0;
    typename Derived::Scalar best(0);
    for (Index i = 0; i < V.rows(); ++i) {
      if (std::abs(V(i, j)) > best) {
        best = std::abs(V(i, j));
        arg = i;
      }
    }
    if (V(arg, j) < 0) V.col(j) *= -1;
  }
}

template <typename Derived>
auto symmetry_defect(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  const Scalar norm = M.norm();
  if (norm == Scalar(0)) return Scalar(0);
  return Scalar((M - M.transpose()).norm() / norm);
}

template <typename Derived>
EigPair<typename Derived::Scalar> sym_evd(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  require(M.rows() == M.cols(), Errc::DimensionMismatch, "sym_evd needs a square matrix");
  require(symmetry_defect(M) <= Scalar(1e-10), Errc::NonSymmetric,
          "relative asymmetry exceeds 1e-10");
  const Matrix<Scalar> sym = (M + M.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  EigPair<Scalar> out{solver.eigenvectors(), solver.eigenvalues()};
  normalize_column_signs(out.vectors);
  return out;
}

/// Economy-size SVD, M = U diag(s) Z^T.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  Eigen::BDCSVD<Matrix<Scalar>> dec(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

template <typename Derived>
Matrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& M,
                                      typename Derived::Scalar rel_tol = 1e-12) {
  using Scalar = typename Derived::Scalar;
  if (M.size() == 0) return Matrix<Scalar>::Zero(M.cols(), M.rows());
  const auto dec = svd(M);
  const Scalar cutoff = rel_tol * (dec.singular.size() ? dec.singular(0) : Scalar(0));
  Vector<Scalar> inv = Vector<Scalar>::Zero(dec.singular.size());
  for (Index i = 0; i < inv.size(); ++i) {
    if (dec.singular(i) > cutoff && dec.singular(i) > Scalar(0)) inv(i) = Scalar(1) / dec.singular(i);
  }
  return dec.Z * inv.asDiagonal() * dec.U.transpose();
}

/// Minimum-norm least squares via truncated SVD; same contract as pinv(A) * B.
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> lstsq(const Eigen::MatrixBase<DerivedA>& A,
                                        const Eigen::MatrixBase<DerivedB>& B,
                                        typename DerivedA::Scalar rel_tol = 1e-12) {
  using Scalar = typename DerivedA::Scalar;
  require(A.rows() == B.rows(), Errc::DimensionMismatch, "lstsq row mismatch");
  const auto dec = svd(A);
  const Scalar cutoff = rel_tol * (dec.singular.size() ? dec.singular(0) : Scalar(0));
  Matrix<Scalar> coef = dec.U.transpose() * B;
  for (Index i = 0; i < coef.rows(); ++i) {
    const Scalar s = dec.singular(i);
    if (s > cutoff && s > Scalar(0)) coef.row(i) /= s;
    else coef.row(i).setZero();
  }
  return dec.Z * coef;
}

/// Column j of the result is kron(A.col(j), B.col(j)).
template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> khatri_rao(const Eigen::MatrixBase<DerivedA>& A,
                                             const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename DerivedA::Scalar;
  require(A.cols() == B.cols(), Errc::ColumnMismatch, "khatri_rao needs equal column counts");
  Matrix<Scalar> out(A.rows() * B.rows(), A.cols());
  for (Index j = 0; j < A.cols(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      out.col(j).segment(i * B.rows(), B.rows()) = A(i, j) * B.col(j);
    }
  }
  return out;
}

/// Column-stacking vectorization.
template <typename Derived>
Vector<typename Derived::Scalar> vec(const Eigen::MatrixBase<Derived>& M) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> dense = M;
  return Eigen::Map<const Vector<Scalar>>(dense.data(), dense.size());
}

template <typename Derived>
Matrix<typename Derived::Scalar> unvec(const Eigen::MatrixBase<Derived>& v, Index rows, Index cols) {
  using Scalar = typename Derived::Scalar;
  require(v.size() == rows * cols, Errc::LengthMismatch, "unvec length must equal rows*cols");
  const Vector<Scalar> dense = v;
  return Eigen::Map<const Matrix<Scalar>>(dense.data(), rows, cols);
}

template <typename DerivedA, typename DerivedB>
auto nse(const Eigen::MatrixBase<DerivedA>& estimate, const Eigen::MatrixBase<DerivedB>& truth) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = truth.squaredNorm();
  require(denom > Scalar(0), Errc::InvalidArgument, "NSE reference is zero");
  return Scalar((estimate - truth).squaredNorm() / denom);
}

}  // namespace dualgraph
