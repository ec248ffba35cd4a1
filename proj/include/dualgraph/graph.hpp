#pragma once

#include "dualgraph/spectral.hpp"

#include <utility>

namespace dualgraph {

enum class ShiftKind { Adjacency, Laplacian, NormalizedLaplacian, Custom };

/// Real symmetric graph shift operator S = V diag(lambda) V^T with its cached
/// eigendecomposition.
template <typename Scalar>
class ShiftOperator {
 public:
  ShiftOperator() = default;

  explicit ShiftOperator(Matrix<Scalar> S, ShiftKind kind = ShiftKind::Custom)
      : matrix_(std::move(S)), eig_(sym_evd(matrix_)), kind_(kind) {}

  const Matrix<Scalar>& matrix() const { return matrix_; }
  const Matrix<Scalar>& V() const { return eig_.vectors; }
  const Vector<Scalar>& lambda() const { return eig_.values; }
  const EigPair<Scalar>& eig() const { return eig_; }
  ShiftKind kind() const { return kind_; }
  Index size() const { return matrix_.rows(); }

 private:
  Matrix<Scalar> matrix_;
  EigPair<Scalar> eig_;
  ShiftKind kind_ = ShiftKind::Custom;
};

namespace detail {

template <typename Derived>
void validate_weights(const Eigen::MatrixBase<Derived>& W) {
  using Scalar = typename Derived::Scalar;
  require(W.rows() == W.cols(), Errc::DimensionMismatch, "weight matrix must be square");
  require(symmetry_defect(W) <= Scalar(1e-12), Errc::AsymmetricInput, "weight matrix is not symmetric");
  require((W.array() >= Scalar(0)).all(), Errc::NegativeWeight, "weights must be nonnegative");
  require((W.diagonal().array() == Scalar(0)).all(), Errc::InvalidArgument,
          "weight matrix must have a zero diagonal");
}

}  // namespace detail

template <typename Derived>
ShiftOperator<typename Derived::Scalar> shift_from_adjacency(const Eigen::MatrixBase<Derived>& W) {
  detail::validate_weights(W);
  return ShiftOperator<typename Derived::Scalar>(W, ShiftKind::Adjacency);
}

/// Combinatorial Laplacian D - W.
template <typename Derived>
ShiftOperator<typename Derived::Scalar> shift_laplacian(const Eigen::MatrixBase<Derived>& W) {
  using Scalar = typename Derived::Scalar;
  detail::validate_weights(W);
  Matrix<Scalar> L = -W;
  L.diagonal() = W.rowwise().sum();
  return ShiftOperator<Scalar>(std::move(L), ShiftKind::Laplacian);
}

/// I - D^{-1/2} W D^{-1/2}; isolated nodes get an all-zero row and column.
template <typename Derived>
ShiftOperator<typename Derived::Scalar> shift_normalized_laplacian(const Eigen::MatrixBase<Derived>& W) {
  using Scalar = typename Derived::Scalar;
  detail::validate_weights(W);
  const Index n = W.rows();
  Vector<Scalar> inv_sqrt_deg(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar d = W.row(i).sum();
    inv_sqrt_deg(i) = d > Scalar(0) ? Scalar(1) / std::sqrt(d) : Scalar(0);
  }
  Matrix<Scalar> L = -(inv_sqrt_deg.asDiagonal() * W * inv_sqrt_deg.asDiagonal());
  for (Index i = 0; i < n; ++i) L(i, i) = inv_sqrt_deg(i) > Scalar(0) ? Scalar(1) : Scalar(0);
  return ShiftOperator<Scalar>(std::move(L), ShiftKind::NormalizedLaplacian);
}

/// x_hat = V^{-1} x (= V^T x). Accepts a single signal or an N x T ensemble.
template <typename Scalar, typename Derived>
Matrix<Scalar> gft(const ShiftOperator<Scalar>& S, const Eigen::MatrixBase<Derived>& x) {
  require(x.rows() == S.size(), Errc::DimensionMismatch, "gft: signal length differs from N");
  return S.V().transpose() * x;
}

template <typename Scalar, typename Derived>
Matrix<Scalar> igft(const ShiftOperator<Scalar>& S, const Eigen::MatrixBase<Derived>& x_hat) {
  require(x_hat.rows() == S.size(), Errc::DimensionMismatch, "igft: signal length differs from N");
  return S.V() * x_hat;
}

/// Frequency-domain graph S_f = V^{-1} diag(lambda_f) V. Entry i of lambda_f
/// pairs with row i of V, i.e. the dual eigenvectors are V_f = V^{-1}.
template <typename Scalar>
class DualGraph {
 public:
  DualGraph(Vector<Scalar> lambda_f, const Matrix<Scalar>& primal_V)
      : lambda_f_(std::move(lambda_f)), primal_V_(primal_V) {
    matrix_ = primal_V_.transpose() * lambda_f_.asDiagonal() * primal_V_;
  }

  const Vector<Scalar>& lambda_f() const { return lambda_f_; }
  const Matrix<Scalar>& matrix() const { return matrix_; }
  /// V_f = V^{-1}.
  Matrix<Scalar> eigenvectors() const { return primal_V_.transpose(); }
  /// The dual GFT V_f^{-1} = V maps x_hat back to the primal signal.
  const Matrix<Scalar>& gft_matrix() const { return primal_V_; }
  Index size() const { return lambda_f_.size(); }

 private:
  Vector<Scalar> lambda_f_;
  Matrix<Scalar> primal_V_;
  Matrix<Scalar> matrix_;
};

template <typename Scalar, typename Derived>
DualGraph<Scalar> dual_from_frequencies(const ShiftOperator<Scalar>& S,
                                        const Eigen::MatrixBase<Derived>& lambda_f) {
  require(lambda_f.size() == S.size(), Errc::DimensionMismatch, "lambda_f length differs from N");
  require(lambda_f.allFinite(), Errc::InvalidArgument, "lambda_f must be finite");
  return DualGraph<Scalar>(Vector<Scalar>(lambda_f), S.V());
}

/// M x K matrix [1, x, x^2, ..., x^{K-1}] (elementwise powers).
template <typename Derived>
Matrix<typename Derived::Scalar> vandermonde(const Eigen::MatrixBase<Derived>& x, Index K) {
  using Scalar = typename Derived::Scalar;
  require(K >= 1, Errc::InvalidArgument, "vandermonde needs K >= 1");
  Matrix<Scalar> out(x.size(), K);
  out.col(0).setOnes();
  for (Index k = 1; k < K; ++k) out.col(k) = out.col(k - 1).cwiseProduct(x);
  return out;
}

}  // namespace dualgraph
