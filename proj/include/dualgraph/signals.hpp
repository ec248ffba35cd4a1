#pragma once

#include "dualgraph/filters.hpp"

#include <random>

namespace dualgraph {

/// N x T ensemble of graph signals; columns are realizations.
template <typename Scalar>
struct SignalEnsemble {
  Matrix<Scalar> data;
  bool centered = false;

  Index nodes() const { return data.rows(); }
  Index samples() const { return data.cols(); }
};

template <typename Scalar>
SignalEnsemble<Scalar> center(const SignalEnsemble<Scalar>& Y) {
  if (Y.centered) return Y;
  SignalEnsemble<Scalar> out{Y.data, true};
  if (out.samples() > 0) out.data.colwise() -= out.data.rowwise().mean();
  return out;
}

template <typename Scalar = double>
SignalEnsemble<Scalar> white_ensemble(Index N, Index T, std::uint64_t seed) {
  require(N >= 1 && T >= 1, Errc::InvalidArgument, "white_ensemble needs N, T >= 1");
  std::mt19937_64 gen(seed);
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  SignalEnsemble<Scalar> out{Matrix<Scalar>(N, T), false};
  for (Index t = 0; t < T; ++t)
    for (Index i = 0; i < N; ++i) out.data(i, t) = normal(gen);
  return out;
}

template <typename Scalar, typename DerivedS>
SignalEnsemble<Scalar> nvgf_apply(const NodeVariantTaps<Scalar>& taps, const Eigen::MatrixBase<DerivedS>& S,
                                  const SignalEnsemble<Scalar>& X) {
  return {nvgf_apply(taps, S, X.data), false};
}

template <typename Scalar>
SignalEnsemble<Scalar> nvgf_apply(const NodeVariantTaps<Scalar>& taps, const ShiftOperator<Scalar>& S,
                                  const SignalEnsemble<Scalar>& X) {
  return {nvgf_apply(taps, S.matrix(), X.data), false};
}

/// y = R x for every column; population covariance R R^T.
template <typename Scalar, typename Derived>
SignalEnsemble<Scalar> generate_nonstationary(const Eigen::MatrixBase<Derived>& R, const SignalEnsemble<Scalar>& X) {
  require(R.rows() == R.cols(), Errc::DimensionMismatch, "generator R must be square");
  require(R.cols() == X.nodes(), Errc::DimensionMismatch, "generator R and X disagree on N");
  return {R * X.data, false};
}

/// (1/T) Y Y^T of the row-centered data. Ensembles already flagged as centered
/// are used as-is.
template <typename Scalar>
Matrix<Scalar> sample_covariance(const SignalEnsemble<Scalar>& Y) {
  require(Y.samples() >= 1, Errc::InvalidArgument, "sample_covariance needs T >= 1");
  const SignalEnsemble<Scalar> c = center(Y);
  Matrix<Scalar> cov = c.data * c.data.transpose() / Scalar(c.samples());
  return (cov + cov.transpose()) / Scalar(2);
}

/// Property 1: C_y = H C_x H^T and C_yhat = V^{-1} C_y V.
template <typename Scalar, typename Derived>
std::pair<Matrix<Scalar>, Matrix<Scalar>> covariance_propagate(const NodeVariantTaps<Scalar>& taps,
                                                               const ShiftOperator<Scalar>& S,
                                                               const Eigen::MatrixBase<Derived>& Cx) {
  require(Cx.rows() == S.size() && Cx.cols() == S.size(), Errc::DimensionMismatch,
          "input covariance must be N x N");
  const Matrix<Scalar> H = nvgf_matrix(taps, S);
  Matrix<Scalar> Cy = H * Cx * H.transpose();
  Matrix<Scalar> Cyhat = S.V().transpose() * Cy * S.V();
  return {std::move(Cy), std::move(Cyhat)};
}

/// ||diag(V^{-1} C V)||^2 / ||V^{-1} C V||_F^2 for a given covariance.
template <typename Scalar, typename Derived>
Scalar stationarity_proxy_cov(const Eigen::MatrixBase<Derived>& Cy, const ShiftOperator<Scalar>& S) {
  require(Cy.rows() == S.size() && Cy.cols() == S.size(), Errc::DimensionMismatch,
          "covariance must be N x N");
  const Matrix<Scalar> spectral = S.V().transpose() * Cy * S.V();
  const Scalar total = spectral.squaredNorm();
  require(total > Scalar(0), Errc::ZeroCovariance, "covariance is identically zero");
  return spectral.diagonal().squaredNorm() / total;
}

template <typename Scalar>
Scalar stationarity_proxy(const SignalEnsemble<Scalar>& Y, const ShiftOperator<Scalar>& S) {
  require(Y.nodes() == S.size(), Errc::DimensionMismatch, "signals and graph disagree on N");
  return stationarity_proxy_cov(sample_covariance(Y), S);
}

/// ||A B - B A||_F / ||B||_F.
template <typename DerivedA, typename DerivedB>
auto commutator_ratio(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = B.norm();
  require(denom > Scalar(0), Errc::InvalidArgument, "commutator_ratio reference is zero");
  return Scalar((A * B - B * A).norm() / denom);
}

/// Ways to pick a square R with R R^T = C_y.
///   SymSqrt:    U L^{1/2} U^T from the EVD of C_y
///   SvdUyLyUyT: (1/sqrt(T)) U_y S_y U_y^T from the SVD of Y
///   SvdUyLy:    (1/sqrt(T)) U_y S_y from the SVD of Y (zero-padded to N x N)
enum class FactorChoice { SymSqrt, SvdUyLyUyT, SvdUyLy };

template <typename Derived>
Matrix<typename Derived::Scalar> covariance_factor(const Eigen::MatrixBase<Derived>& Cy,
                                                   FactorChoice choice = FactorChoice::SymSqrt) {
  using Scalar = typename Derived::Scalar;
  const auto eig = sym_evd(Cy);
  const Scalar top = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : Scalar(0);
  Vector<Scalar> root(eig.values.size());
  for (Index i = 0; i < root.size(); ++i) {
    const Scalar v = eig.values(i);
    require(v >= -Scalar(1e-8) * top, Errc::IndefiniteInput, "covariance has a negative eigenvalue");
    root(i) = v > Scalar(0) ? std::sqrt(v) : Scalar(0);
  }
  if (choice == FactorChoice::SvdUyLy) return eig.vectors * root.asDiagonal();
  return eig.vectors * root.asDiagonal() * eig.vectors.transpose();
}

/// Factor of the sample covariance computed from the data SVD.
template <typename Scalar>
Matrix<Scalar> factor_from_signals(const SignalEnsemble<Scalar>& Y, FactorChoice choice = FactorChoice::SymSqrt) {
  if (choice == FactorChoice::SymSqrt) return covariance_factor(sample_covariance(Y), choice);
  const SignalEnsemble<Scalar> c = center(Y);
  const auto dec = svd(c.data);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(c.samples()));
  const Matrix<Scalar> US = dec.U * dec.singular.asDiagonal() * scale;
  if (choice == FactorChoice::SvdUyLyUyT) return US * dec.U.transpose();
  Matrix<Scalar> R = Matrix<Scalar>::Zero(c.nodes(), c.nodes());
  R.leftCols(US.cols()) = US;
  return R;
}

}  // namespace dualgraph
