#pragma once

// Dual-frequency recovery: given taps P ~ Psi_f(lambda_f) C, find lambda_f whose
// Vandermonde matrix lies in the K-dimensional column space of P.
//
//   f(lambda_f) = 1/2 || Pi Psi_f(lambda_f) ||_F^2,   Pi = I - U U^T
//
// minimized with sequential convex programming: a linearized step over a
// shrinking trust region followed by a line search along the segment between
// the current iterate and the step.

#include "dualgraph/graph.hpp"

#include <functional>
#include <random>

namespace dualgraph {

template <typename Scalar>
struct SubspaceProblem {
  Matrix<Scalar> projector;  // N x N, onto the orthogonal complement of span(U)
  Matrix<Scalar> basis;      // N x K, leading left singular vectors of P
  Index K = 0;
  Warnings warnings;

  Index N() const { return basis.rows(); }
};

template <typename Derived>
SubspaceProblem<typename Derived::Scalar> subspace_problem(const Eigen::MatrixBase<Derived>& P, Index K) {
  using Scalar = typename Derived::Scalar;
  require(K >= 1, Errc::InvalidArgument, "degree count K must be >= 1");
  require(P.cols() >= K, Errc::OrderMismatch, "subspace fitting needs L >= K");
  require(P.rows() >= K, Errc::OrderMismatch, "subspace fitting needs N >= K");
  SubspaceProblem<Scalar> prob;
  prob.K = K;
  const auto dec = svd(P);
  prob.basis = dec.U.leftCols(K);
  const Index N = P.rows();
  prob.projector = Matrix<Scalar>::Identity(N, N) - prob.basis * prob.basis.transpose();
  const Scalar top = dec.singular(0);
  if (!(top > Scalar(0)) || dec.singular(K - 1) / top <= Scalar(1e-10))
    prob.warnings.push_back("RankDeficientTaps: sigma_K / sigma_1 <= 1e-10");
  if (K == N) prob.warnings.push_back("degenerate problem: K == N makes the objective identically zero");
  return prob;
}

namespace detail {

/// Pi M computed through the orthonormal basis: M - U (U^T M).
template <typename Scalar>
Matrix<Scalar> project_out(const SubspaceProblem<Scalar>& prob, const Matrix<Scalar>& M) {
  return M - prob.basis * (prob.basis.transpose() * M);
}

}  // namespace detail

template <typename Scalar, typename Derived>
Scalar objective(const SubspaceProblem<Scalar>& prob, const Eigen::MatrixBase<Derived>& lambda_f) {
  require(lambda_f.size() == prob.N(), Errc::DimensionMismatch, "lambda_f length differs from N");
  return Scalar(0.5) * detail::project_out(prob, vandermonde(lambda_f, prob.K)).squaredNorm();
}

/// diag(Pi^T Pi Psi_f D_k^T Psi_f^T), D_k the polynomial differentiation
/// matrix ((D_k)_{j,j+1} = j).
template <typename Scalar, typename Derived>
Vector<Scalar> gradient(const SubspaceProblem<Scalar>& prob, const Eigen::MatrixBase<Derived>& lambda_f) {
  require(lambda_f.size() == prob.N(), Errc::DimensionMismatch, "lambda_f length differs from N");
  const Matrix<Scalar> psi = vandermonde(lambda_f, prob.K);
  const Matrix<Scalar> residual = detail::project_out(prob, detail::project_out(prob, psi));
  Vector<Scalar> grad = Vector<Scalar>::Zero(prob.N());
  for (Index k = 1; k < prob.K; ++k) grad += Scalar(k) * residual.col(k).cwiseProduct(psi.col(k - 1));
  return grad;
}

enum class TrustNorm { L2, Linf };

template <typename Scalar = double>
struct ScpConfig {
  /// Trust-region radius rho(r). Empty means geometric rho0 * gamma^r.
  std::function<Scalar(Index)> radius_schedule;
  Scalar rho0 = -1;  // <= 0: 0.1 * range of the starting point
  Scalar gamma = 0.97;
  TrustNorm norm = TrustNorm::L2;
  Index max_iters = 500;
  Index alpha_grid = 64;
  Scalar obj_tol = 1e-14;
  Index num_starts = 5;
  std::uint64_t seed = 0;
  /// Domain of the uniform-grid start and jitter of the remaining starts.
  Scalar u_min = -1;
  Scalar u_max = 1;
  Scalar start_delta = 300;
};

template <typename Scalar>
struct ScpResult {
  Vector<Scalar> lambda_f;
  Scalar objective = 0;
  std::vector<Scalar> trace;  // objective at the start, then after each iteration
  Index start_index = 0;
  Index iterations = 0;
};

template <typename Scalar, typename Derived>
ScpResult<Scalar> scp_solve(const SubspaceProblem<Scalar>& prob, const Eigen::MatrixBase<Derived>& start,
                            const ScpConfig<Scalar>& cfg = {}) {
  require(start.size() == prob.N(), Errc::DimensionMismatch, "start length differs from N");
  require(cfg.max_iters >= 0 && cfg.alpha_grid >= 1 && cfg.gamma > 0 && cfg.gamma <= 1, Errc::InvalidArgument,
          "invalid SCP config");

  Vector<Scalar> current = start;
  Scalar range = current.size() ? current.maxCoeff() - current.minCoeff() : Scalar(0);
  const Scalar rho0 = cfg.rho0 > 0 ? cfg.rho0 : Scalar(0.1) * (range > 0 ? range : Scalar(1));
  auto radius = [&](Index r) {
    return cfg.radius_schedule ? cfg.radius_schedule(r) : rho0 * std::pow(cfg.gamma, Scalar(r));
  };

  ScpResult<Scalar> out;
  Scalar value = objective(prob, current);
  out.trace.push_back(value);
  for (Index r = 0; r < cfg.max_iters && value > cfg.obj_tol; ++r) {
    const Vector<Scalar> g = gradient(prob, current);
    const Scalar gnorm = g.norm();
    if (!(gnorm > Scalar(1e-12))) break;

    // Minimizer of the linear model over the trust-region ball.
    const Scalar rho = radius(r);
    Vector<Scalar> step;
    if (cfg.norm == TrustNorm::L2) step = current - rho * g / gnorm;
    else step = current - rho * g.array().sign().matrix();

    // Best point on the segment: alpha = 0 is the pure step, interior grid
    // points mix it with the current iterate, and alpha = 1 (no move) is kept
    // when nothing improves.
    Vector<Scalar> best = current;
    Scalar best_value = value;
    for (Index j = 0; j <= cfg.alpha_grid; ++j) {
      const Scalar alpha = Scalar(j) / Scalar(cfg.alpha_grid + 1);
      const Vector<Scalar> candidate = alpha * current + (Scalar(1) - alpha) * step;
      const Scalar v = objective(prob, candidate);
      if (v < best_value) {
        best_value = v;
        best = candidate;
      }
    }
    current = best;
    value = best_value;
    out.trace.push_back(value);
    out.iterations = r + 1;
  }
  out.lambda_f = current;
  out.objective = value;
  return out;
}

template <typename Scalar>
ScpResult<Scalar> multi_start(const SubspaceProblem<Scalar>& prob, const std::vector<Vector<Scalar>>& starts,
                              const ScpConfig<Scalar>& cfg = {}) {
  require(!starts.empty(), Errc::InvalidArgument, "multi_start needs at least one start");
  ScpResult<Scalar> best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    ScpResult<Scalar> result = scp_solve(prob, starts[s], cfg);
    result.start_index = static_cast<Index>(s);
    if (s == 0 || result.objective < best.objective) best = std::move(result);
  }
  return best;
}

/// Uniform grid on [u_min, u_max] with each point moved by a normal jitter of
/// std delta * spacing / 2, redrawn until it falls within one std.
template <typename Scalar = double>
Vector<Scalar> jittered_grid(Index N, Scalar u_min, Scalar u_max, Scalar delta, std::uint64_t seed) {
  require(N >= 1, Errc::InvalidArgument, "grid needs N >= 1");
  require(u_min < u_max, Errc::InvalidArgument, "grid needs u_min < u_max");
  require(delta >= 0, Errc::InvalidArgument, "jitter delta must be >= 0");
  Vector<Scalar> grid = Vector<Scalar>::Constant(N, u_min);
  if (N > 1) grid = Vector<Scalar>::LinSpaced(N, u_min, u_max);
  const Scalar spacing = N > 1 ? (u_max - u_min) / Scalar(N - 1) : Scalar(0);
  const Scalar sd = delta * spacing / Scalar(2);
  if (sd == Scalar(0)) return grid;
  std::mt19937_64 gen(seed);
  std::normal_distribution<Scalar> normal(Scalar(0), sd);
  for (Index n = 0; n < N; ++n) {
    Scalar j;
    do {
      j = normal(gen);
    } while (std::abs(j) > sd);
    grid(n) += j;
  }
  return grid;
}

/// Start 0 is the uniform grid; the rest are jittered grids with derived seeds.
template <typename Scalar>
std::vector<Vector<Scalar>> make_starts(Index N, const ScpConfig<Scalar>& cfg) {
  std::vector<Vector<Scalar>> starts;
  const Index count = std::max<Index>(cfg.num_starts, 1);
  starts.push_back(jittered_grid<Scalar>(N, cfg.u_min, cfg.u_max, Scalar(0), cfg.seed));
  for (Index s = 1; s < count; ++s)
    starts.push_back(jittered_grid<Scalar>(N, cfg.u_min, cfg.u_max, cfg.start_delta,
                                           cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(s)));
  return starts;
}

/// Upper generalized Pascal matrix, T(i,j) = binom(j,i) t0^{j-i} t1^i for j >= i,
/// so that v(t0 + t1 x)^T = v(x)^T T for Vandermonde rows v.
template <typename Scalar = double>
Matrix<Scalar> pascal_matrix(Scalar t0, Scalar t1, Index K) {
  require(t1 != Scalar(0), Errc::SingularPascal, "t1 must be nonzero");
  require(K >= 1, Errc::InvalidArgument, "K must be >= 1");
  Matrix<Scalar> T = Matrix<Scalar>::Zero(K, K);
  for (Index j = 0; j < K; ++j) {
    Scalar binom = 1;
    for (Index i = 0; i <= j; ++i) {
      T(i, j) = binom * std::pow(t0, Scalar(j - i)) * std::pow(t1, Scalar(i));
      binom = binom * Scalar(j - i) / Scalar(i + 1);
    }
  }
  return T;
}

/// Orthogonal projection of lambda_f onto span{1, estimate}.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> ambiguity_correct(const Eigen::MatrixBase<DerivedA>& estimate,
                                                    const Eigen::MatrixBase<DerivedB>& truth,
                                                    Warnings* warnings = nullptr) {
  using Scalar = typename DerivedA::Scalar;
  require(estimate.size() == truth.size(), Errc::DimensionMismatch, "estimate and truth lengths differ");
  const Index N = estimate.size();
  Matrix<Scalar> basis(N, 2);
  basis.col(0).setOnes();
  basis.col(1) = estimate;
  const Scalar scale = estimate.cwiseAbs().maxCoeff();
  const Scalar spread = N ? estimate.maxCoeff() - estimate.minCoeff() : Scalar(0);
  if (warnings && !(spread > Scalar(1e-14) * scale))
    warnings->push_back("DegenerateEstimate: constant estimate, scale t1 is unidentifiable");
  return basis * lstsq(basis, Matrix<Scalar>(truth));
}

/// min_{t0,t1} ||truth - (t0 + t1 estimate)||^2 / ||truth||^2.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pne(const Eigen::MatrixBase<DerivedA>& estimate, const Eigen::MatrixBase<DerivedB>& truth,
                              Warnings* warnings = nullptr) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = truth.squaredNorm();
  require(denom > Scalar(0), Errc::InvalidArgument, "PNE reference is zero");
  return (truth - ambiguity_correct(estimate, truth, warnings)).squaredNorm() / denom;
}

}  // namespace dualgraph
