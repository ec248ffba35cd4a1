#pragma once

// Node-variant filter tap estimation: closed-form least squares from
// input/output pairs, and alternating minimization (least squares + orthogonal
// Procrustes) when only outputs are observed.

#include "dualgraph/signals.hpp"

#include <limits>

namespace dualgraph {

template <typename Scalar>
struct TapEstimate {
  NodeVariantTaps<Scalar> taps;
  Scalar residual_nse = 0;
  Index iterations = 0;  // 0 for the closed-form solve
  std::vector<Scalar> objective_trace;
  Matrix<Scalar> rotation;  // U of the output-only fit; empty otherwise
  Warnings warnings;
};

struct AltMinConfig {
  Index max_iters = 200;
  double rel_obj_tol = 1e-8;
  FactorChoice factor_choice = FactorChoice::SymSqrt;
  bool random_init = false;  // identity start unless set
  std::uint64_t seed = 0;
};

/// A = [X^T o I_N, (S X)^T o I_N, ..., (S^{L-1} X)^T o I_N], so that
/// A vec(P) = vec(H_I(P, S) X).
template <typename Scalar, typename DerivedX>
Matrix<Scalar> design_matrix(const Eigen::MatrixBase<DerivedX>& X, const ShiftOperator<Scalar>& S, Index L) {
  require(X.rows() == S.size(), Errc::DimensionMismatch, "X rows differ from N");
  require(L >= 1, Errc::InvalidArgument, "order L must be >= 1");
  const Index N = S.size();
  const Index T = X.cols();
  const Matrix<Scalar> I = Matrix<Scalar>::Identity(N, N);
  Matrix<Scalar> A(N * T, N * L);
  Matrix<Scalar> shifted = X;
  for (Index l = 0; l < L; ++l) {
    if (l > 0) shifted = S.matrix() * shifted;
    A.middleCols(l * N, N) = khatri_rao(Matrix<Scalar>(shifted.transpose()), I);
  }
  return A;
}

namespace detail {

/// Solves vec(P) = A^+ vec(Y) without forming A. Rows of A belonging to node i
/// only touch the taps of node i, so A is a row/column permutation of a block
/// diagonal matrix and its pseudoinverse splits into N independent T x L
/// problems. The truncation threshold is taken relative to the largest
/// singular value over all blocks, which is sigma_max(A).
template <typename Scalar>
Matrix<Scalar> solve_taps(const Matrix<Scalar>& X, const Matrix<Scalar>& Y, const Matrix<Scalar>& S, Index L,
                          Warnings& warnings, Scalar rel_tol = Scalar(1e-12)) {
  const Index N = S.rows();
  const Index T = X.cols();
  std::vector<Matrix<Scalar>> shifted(static_cast<std::size_t>(L));
  shifted[0] = X;
  for (Index l = 1; l < L; ++l) shifted[l] = S * shifted[l - 1];

  std::vector<SvdResult<Scalar>> blocks;
  blocks.reserve(static_cast<std::size_t>(N));
  Scalar sigma_max(0);
  Matrix<Scalar> B(T, L);
  for (Index i = 0; i < N; ++i) {
    for (Index l = 0; l < L; ++l) B.col(l) = shifted[l].row(i).transpose();
    blocks.push_back(svd(B));
    if (blocks.back().singular.size()) sigma_max = std::max(sigma_max, blocks.back().singular(0));
  }

  const Scalar cutoff = rel_tol * sigma_max;
  bool deficient = T < L;
  Matrix<Scalar> P = Matrix<Scalar>::Zero(N, L);
  for (Index i = 0; i < N; ++i) {
    const auto& dec = blocks[i];
    Vector<Scalar> coef = dec.U.transpose() * Y.row(i).transpose();
    for (Index k = 0; k < coef.size(); ++k) {
      if (dec.singular(k) > cutoff && dec.singular(k) > Scalar(0)) coef(k) /= dec.singular(k);
      else {
        coef(k) = 0;
        deficient = true;
      }
    }
    P.row(i) = (dec.Z * coef).transpose();
  }
  if (T < L) warnings.push_back("fewer samples than filter order (T < L); solution is not unique");
  if (deficient && sigma_max > Scalar(0))
    warnings.push_back("RankDeficientDesign: singular values below 1e-12 * sigma_max truncated");
  return P;
}

}  // namespace detail

template <typename Scalar, typename DerivedX, typename DerivedY>
TapEstimate<Scalar> estimate_taps_io(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& Y,
                                     const ShiftOperator<Scalar>& S, Index L) {
  require(X.rows() == S.size() && Y.rows() == S.size(), Errc::DimensionMismatch, "X and Y must have N rows");
  require(X.cols() == Y.cols(), Errc::DimensionMismatch, "X and Y must have the same number of samples");
  require(L >= 1, Errc::InvalidArgument, "order L must be >= 1");
  TapEstimate<Scalar> out;
  const Matrix<Scalar> Xd = X;
  const Matrix<Scalar> Yd = Y;
  out.taps = {detail::solve_taps<Scalar>(Xd, Yd, S.matrix(), L, out.warnings), FilterType::TypeI};
  const Scalar energy = Yd.squaredNorm();
  out.residual_nse = energy > Scalar(0) ? (Yd - nvgf_apply(out.taps, S, Xd)).squaredNorm() / energy : Scalar(0);
  return out;
}

template <typename Scalar>
TapEstimate<Scalar> estimate_taps_io(const SignalEnsemble<Scalar>& X, const SignalEnsemble<Scalar>& Y,
                                     const ShiftOperator<Scalar>& S, Index L) {
  return estimate_taps_io(X.data, Y.data, S, L);
}

/// argmax_U trace(M U) over orthogonal U: with M = U_p S V_p^T, U = V_p U_p^T.
template <typename Derived>
Matrix<typename Derived::Scalar> procrustes(const Eigen::MatrixBase<Derived>& M) {
  require(M.rows() == M.cols(), Errc::DimensionMismatch, "procrustes needs a square matrix");
  const auto dec = svd(M);
  return dec.Z * dec.U.transpose();
}

template <typename Scalar = double>
Matrix<Scalar> random_orthogonal(Index N, std::uint64_t seed) {
  const auto G = white_ensemble<Scalar>(N, N, seed).data;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(G);
  Matrix<Scalar> Q = qr.householderQ();
  const Matrix<Scalar> R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < N; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1;
  return Q;
}

/// Fits R ~ H_I(P, S) U with U orthogonal, where R R^T is the sample covariance
/// of Y. Each sweep solves for P with U fixed, then for U with P fixed; both are
/// exact minimizers so the objective never increases.
template <typename Scalar>
TapEstimate<Scalar> estimate_taps_output_only(const SignalEnsemble<Scalar>& Y, const ShiftOperator<Scalar>& S,
                                              Index L, const AltMinConfig& cfg = {}) {
  require(Y.nodes() == S.size(), Errc::DimensionMismatch, "Y rows differ from N");
  require(Y.samples() >= 1, Errc::InvalidArgument, "output-only estimation needs T >= 1");
  require(L >= 1, Errc::InvalidArgument, "order L must be >= 1");
  require(cfg.max_iters >= 1 && cfg.rel_obj_tol > 0, Errc::InvalidArgument, "invalid alternating-minimization config");

  const Index N = S.size();
  const Matrix<Scalar> R = factor_from_signals(Y, cfg.factor_choice);
  Matrix<Scalar> U = cfg.random_init ? random_orthogonal<Scalar>(N, cfg.seed) : Matrix<Scalar>::Identity(N, N);

  TapEstimate<Scalar> out;
  Matrix<Scalar> P = Matrix<Scalar>::Zero(N, L);
  Scalar previous = std::numeric_limits<Scalar>::infinity();
  for (Index n = 1; n <= cfg.max_iters; ++n) {
    Warnings step_warnings;
    P = detail::solve_taps<Scalar>(U, R, S.matrix(), L, step_warnings);
    const Matrix<Scalar> H = nvgf_matrix(NodeVariantTaps<Scalar>{P, FilterType::TypeI}, S);
    U = procrustes(Matrix<Scalar>(R.transpose() * H));
    const Scalar objective = (R - H * U).squaredNorm();
    out.objective_trace.push_back(objective);
    out.iterations = n;
    if (n == 1) out.warnings = step_warnings;
    if (objective == Scalar(0) || (n > 1 && previous - objective <= Scalar(cfg.rel_obj_tol) * previous)) break;
    previous = objective;
  }

  // diag(p) U is unchanged by flipping the sign of p_i together with row i of U.
  if (L == 1) {
    for (Index i = 0; i < N; ++i) {
      if (P(i, 0) < 0) {
        P(i, 0) = -P(i, 0);
        U.row(i) *= -1;
      }
    }
  }

  out.taps = {P, FilterType::TypeI};
  out.rotation = U;
  const Scalar energy = R.squaredNorm();
  out.residual_nse = energy > Scalar(0) ? out.objective_trace.back() / energy : Scalar(0);
  return out;
}

}  // namespace dualgraph
