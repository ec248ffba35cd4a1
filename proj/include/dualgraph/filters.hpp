#pragma once

// Classical and node-variant graph filters and the primal <-> dual conversion.
//
// A type-I filter sum_l diag(p_l) S^l on the primal graph equals, after the
// GFT, a type-II filter sum_k S_f^k diag(p_hat_k) on the dual graph whenever the
// taps expand as P = Psi_f C and P_hat = Psi C^T.

#include "dualgraph/graph.hpp"

namespace dualgraph {

enum class FilterType { TypeI, TypeII };

template <typename Scalar>
struct NodeVariantTaps {
  Matrix<Scalar> P;  // N x L, column l holds the l-th hop taps
  FilterType flavor = FilterType::TypeI;

  Index nodes() const { return P.rows(); }
  Index order() const { return P.cols(); }
};

template <typename Scalar>
NodeVariantTaps<Scalar> make_taps(Matrix<Scalar> P, FilterType flavor = FilterType::TypeI) {
  require(P.cols() >= 1, Errc::InvalidArgument, "tap matrix needs at least one column");
  require(P.allFinite(), Errc::InvalidArgument, "tap matrix must be finite");
  return {std::move(P), flavor};
}

/// sum_l p_l S^l, Horner-evaluated.
template <typename DerivedP, typename DerivedS>
Matrix<typename DerivedS::Scalar> cgf_matrix(const Eigen::MatrixBase<DerivedP>& p,
                                             const Eigen::MatrixBase<DerivedS>& S) {
  using Scalar = typename DerivedS::Scalar;
  require(p.size() >= 1, Errc::InvalidArgument, "classical filter needs L >= 1");
  const Index n = S.rows();
  const Index L = p.size();
  Matrix<Scalar> H = p(L - 1) * Matrix<Scalar>::Identity(n, n);
  for (Index l = L - 2; l >= 0; --l) {
    H = H * S;
    H.diagonal().array() += p(l);
  }
  return H;
}

template <typename Scalar, typename DerivedP>
Matrix<Scalar> cgf_matrix(const Eigen::MatrixBase<DerivedP>& p, const ShiftOperator<Scalar>& S) {
  return cgf_matrix(p, S.matrix());
}

template <typename Scalar, typename DerivedS>
Matrix<Scalar> nvgf_matrix(const NodeVariantTaps<Scalar>& taps, const Eigen::MatrixBase<DerivedS>& S) {
  require(taps.P.rows() == S.rows(), Errc::RowMismatch, "tap rows differ from graph size");
  const Index L = taps.order();
  Matrix<Scalar> H = taps.P.col(L - 1).asDiagonal();
  for (Index l = L - 2; l >= 0; --l) {
    if (taps.flavor == FilterType::TypeI) H = H * S;  // diag(p) S^l: shift then scale
    else H = S * H;                                 // S^l diag(p): scale then shift
    H.diagonal() += taps.P.col(l);
  }
  return H;
}

template <typename Scalar>
Matrix<Scalar> nvgf_matrix(const NodeVariantTaps<Scalar>& taps, const ShiftOperator<Scalar>& S) {
  return nvgf_matrix(taps, S.matrix());
}

/// Applies the filter to an N x T ensemble with the shift-and-scale recursion;
/// the N x N filter matrix is never formed.
template <typename Scalar, typename DerivedS, typename DerivedX>
Matrix<Scalar> nvgf_apply(const NodeVariantTaps<Scalar>& taps, const Eigen::MatrixBase<DerivedS>& S,
                          const Eigen::MatrixBase<DerivedX>& X) {
  require(taps.P.rows() == S.rows(), Errc::RowMismatch, "tap rows differ from graph size");
  require(X.rows() == S.rows(), Errc::RowMismatch, "signal rows differ from graph size");
  const Index L = taps.order();
  if (taps.flavor == FilterType::TypeI) {
    Matrix<Scalar> shifted = X;
    Matrix<Scalar> Y = taps.P.col(0).asDiagonal() * shifted;
    for (Index l = 1; l < L; ++l) {
      shifted = S * shifted;
      Y.noalias() += taps.P.col(l).asDiagonal() * shifted;
    }
    return Y;
  }
  Matrix<Scalar> Y = taps.P.col(L - 1).asDiagonal() * X;
  for (Index l = L - 2; l >= 0; --l) {
    Y = S * Y;
    Y.noalias() += taps.P.col(l).asDiagonal() * X;
  }
  return Y;
}

template <typename Scalar, typename DerivedX>
Matrix<Scalar> nvgf_apply(const NodeVariantTaps<Scalar>& taps, const ShiftOperator<Scalar>& S,
                          const Eigen::MatrixBase<DerivedX>& X) {
  return nvgf_apply(taps, S.matrix(), X);
}

/// Basis-expansion link between primal and dual taps: P = Psi_f C, P_hat = Psi C^T.
template <typename Scalar>
class ExpansionModel {
 public:
  /// C is K x L; lambda_f the dual frequencies; lambda the primal eigenvalues.
  ExpansionModel(Matrix<Scalar> C, Vector<Scalar> lambda_f, Vector<Scalar> lambda)
      : C_(std::move(C)), lambda_f_(std::move(lambda_f)), lambda_(std::move(lambda)) {
    require(C_.rows() >= 1 && C_.cols() >= 1, Errc::DimensionMismatch, "C must be non-empty");
    require(lambda_f_.size() == lambda_.size(), Errc::DimensionMismatch,
            "lambda_f and lambda must both have length N");
    psi_f_ = vandermonde(lambda_f_, C_.rows());
    psi_ = vandermonde(lambda_, C_.cols());
  }

  ExpansionModel(Matrix<Scalar> C, Vector<Scalar> lambda_f, const ShiftOperator<Scalar>& S)
      : ExpansionModel(std::move(C), std::move(lambda_f), S.lambda()) {}

  const Matrix<Scalar>& C() const { return C_; }
  const Vector<Scalar>& lambda_f() const { return lambda_f_; }
  const Vector<Scalar>& lambda() const { return lambda_; }
  const Matrix<Scalar>& psi_f() const { return psi_f_; }
  const Matrix<Scalar>& psi() const { return psi_; }
  Index K() const { return C_.rows(); }
  Index L() const { return C_.cols(); }
  Index N() const { return lambda_.size(); }

 private:
  Matrix<Scalar> C_;
  Vector<Scalar> lambda_f_;
  Vector<Scalar> lambda_;
  Matrix<Scalar> psi_f_;
  Matrix<Scalar> psi_;
};

template <typename Scalar>
NodeVariantTaps<Scalar> primal_taps(const ExpansionModel<Scalar>& model) {
  return {model.psi_f() * model.C(), FilterType::TypeI};
}

template <typename Scalar>
NodeVariantTaps<Scalar> dual_taps(const ExpansionModel<Scalar>& model) {
  return {model.psi() * model.C().transpose(), FilterType::TypeII};
}

/// ||V^{-1} H_I(P,S) - H_II(P_hat,S_f) V^{-1}||_F^2 / ||V^{-1} H_I(P,S)||_F^2.
template <typename Scalar>
Scalar corollary_error(const NodeVariantTaps<Scalar>& primal, const NodeVariantTaps<Scalar>& dual,
                       const ShiftOperator<Scalar>& S, const DualGraph<Scalar>& Sf) {
  require(primal.nodes() == S.size() && dual.nodes() == S.size() && Sf.size() == S.size(),
          Errc::DimensionMismatch, "corollary_error: inconsistent N");
  const NodeVariantTaps<Scalar> p1{primal.P, FilterType::TypeI};
  const NodeVariantTaps<Scalar> p2{dual.P, FilterType::TypeII};
  const Matrix<Scalar> Vinv = S.V().transpose();
  const Matrix<Scalar> lhs = Vinv * nvgf_matrix(p1, S.matrix());
  const Matrix<Scalar> rhs = nvgf_matrix(p2, Sf.matrix()) * Vinv;
  const Scalar denom = lhs.squaredNorm();
  require(denom > Scalar(0), Errc::InvalidArgument, "corollary_error: primal filter is zero");
  return (lhs - rhs).squaredNorm() / denom;
}

template <typename Scalar>
Scalar corollary_error(const ExpansionModel<Scalar>& model, const ShiftOperator<Scalar>& S) {
  require(model.N() == S.size(), Errc::DimensionMismatch, "model and graph differ in N");
  const auto Sf = dual_from_frequencies(S, model.lambda_f());
  return corollary_error(primal_taps(model), dual_taps(model), S, Sf);
}

/// sum_l H(c_l, S_f) (lambda^l .* x_hat): the dual-domain action written as L
/// classical convolutions on modulated copies of x_hat.
template <typename Scalar, typename Derived>
Vector<Scalar> dual_convolution_split(const ExpansionModel<Scalar>& model, const ShiftOperator<Scalar>& S,
                                      const Eigen::MatrixBase<Derived>& x_hat) {
  require(model.N() == S.size(), Errc::DimensionMismatch, "model and graph differ in N");
  require(x_hat.size() == S.size(), Errc::DimensionMismatch, "x_hat length differs from N");
  const auto Sf = dual_from_frequencies(S, model.lambda_f());
  Vector<Scalar> out = Vector<Scalar>::Zero(S.size());
  Vector<Scalar> modulated = x_hat;
  for (Index l = 0; l < model.L(); ++l) {
    out += cgf_matrix(model.C().col(l), Sf.matrix()) * modulated;
    modulated = modulated.cwiseProduct(model.lambda());
  }
  return out;
}

}  // namespace dualgraph
