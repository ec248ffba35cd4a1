#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dualgraph;
using namespace dualgraph::testing;

namespace {

NodeVariantTaps<double> taps(const MatrixXd& P, FilterType flavor = FilterType::TypeI) { return {P, flavor}; }

}  // namespace

TEST(Cgf, HandExamples) {
  const MatrixXd S = path_adjacency(3);
  EXPECT_EQ(cgf_matrix(VectorXd::Ones(1), S), MatrixXd::Identity(3, 3));
  EXPECT_EQ(cgf_matrix((VectorXd(2) << 0, 1).finished(), S), S);
  const VectorXd y = cgf_matrix((VectorXd(2) << 1, 1).finished(), S) * VectorXd::Unit(3, 0);
  EXPECT_EQ(y, (VectorXd(3) << 1, 1, 0).finished());
}

TEST(Cgf, MatchesExplicitPowers) {
  std::mt19937_64 gen(20);
  const Shift S = random_shift(6, gen);
  const VectorXd p = random_vector(5, gen);
  EXPECT_LE((cgf_matrix(p, S) - nvgf_oracle(MatrixXd(VectorXd::Ones(6) * p.transpose()), S.matrix(),
                                            FilterType::TypeI)).norm(),
            1e-10);
}

TEST(Nvgf, ConstantColumnsReduceToClassical) {
  std::mt19937_64 gen(21);
  const Shift S = random_shift(5, gen);
  const VectorXd p = random_vector(4, gen);
  const MatrixXd P = VectorXd::Ones(5) * p.transpose();
  for (auto flavor : {FilterType::TypeI, FilterType::TypeII})
    EXPECT_LE((nvgf_matrix(taps(P, flavor), S) - cgf_matrix(p, S)).norm(), 1e-12);
}

TEST(Nvgf, OrderOneIsDiagonal) {
  std::mt19937_64 gen(22);
  const Shift S = random_shift(5, gen);
  const MatrixXd P = random_matrix(5, 1, gen);
  for (auto flavor : {FilterType::TypeI, FilterType::TypeII})
    EXPECT_EQ(nvgf_matrix(taps(P, flavor), S), MatrixXd(P.col(0).asDiagonal()));
}

TEST(Nvgf, MatchesExplicitPowers) {
  std::mt19937_64 gen(23);
  const Shift S = random_shift(5, gen);
  const MatrixXd P = random_matrix(5, 3, gen);
  for (auto flavor : {FilterType::TypeI, FilterType::TypeII})
    EXPECT_LE((nvgf_matrix(taps(P, flavor), S) - nvgf_oracle(P, S.matrix(), flavor)).norm(), 1e-12);
}

TEST(Nvgf, RejectsRowMismatch) {
  std::mt19937_64 gen(24);
  const Shift S = random_shift(5, gen);
  try {
    nvgf_matrix(taps(MatrixXd::Ones(4, 2)), S);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RowMismatch);
  }
}

TEST(NvgfApply, IdentityInputZeroTapsAndMatrixRoute) {
  std::mt19937_64 gen(25);
  const Shift S = random_shift(6, gen);
  const MatrixXd P = random_matrix(6, 4, gen);
  const MatrixXd X = random_matrix(6, 3, gen);
  for (auto flavor : {FilterType::TypeI, FilterType::TypeII}) {
    const auto t = taps(P, flavor);
    EXPECT_LE((nvgf_apply(t, S, MatrixXd::Identity(6, 6)) - nvgf_matrix(t, S)).norm(), 1e-12);
    EXPECT_LE((nvgf_apply(t, S, X) - nvgf_matrix(t, S) * X).norm(), 1e-12);
    EXPECT_TRUE(nvgf_apply(taps(MatrixXd::Zero(6, 4), flavor), S, X).isZero());
  }
}

TEST(Expansion, FirstRowOfCGivesConstantPrimalTaps) {
  std::mt19937_64 gen(26);
  const Shift S = random_shift(6, gen);
  MatrixXd C = MatrixXd::Zero(3, 4);
  C.row(0) = random_vector(4, gen).transpose();
  const ExpansionModel<double> model(C, random_vector(6, gen), S);
  const MatrixXd P = primal_taps(model).P;
  for (Index l = 0; l < 4; ++l) EXPECT_LE((P.col(l).array() - C(0, l)).matrix().norm(), 1e-14);
}

TEST(Expansion, FirstColumnOfCIsWindowing) {
  std::mt19937_64 gen(27);
  const Shift S = random_shift(6, gen);
  MatrixXd C = MatrixXd::Zero(3, 2);
  C.col(0) = random_vector(3, gen);
  const ExpansionModel<double> model(C, random_vector(6, gen), S);
  const MatrixXd Ph = dual_taps(model).P;
  for (Index k = 0; k < 3; ++k) EXPECT_LE((Ph.col(k).array() - C(k, 0)).matrix().norm(), 1e-14);
  const MatrixXd H = nvgf_matrix(primal_taps(model), S);
  EXPECT_LE((H - MatrixXd((model.psi_f() * C.col(0)).asDiagonal())).norm(), 1e-12);
}

TEST(Expansion, PseudoinverseRecoversC) {
  std::mt19937_64 gen(28);
  const Shift S = random_shift(10, gen);
  const MatrixXd C = random_matrix(4, 3, gen);
  const ExpansionModel<double> model(C, VectorXd::LinSpaced(10, -1, 1), S);
  EXPECT_LE((pinv(model.psi_f()) * primal_taps(model).P - C).norm(), 1e-10);
}

TEST(DualityError, ConsistentModelIsExact) {
  std::mt19937_64 gen(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Index N = uniform_index(2, 20, gen), L = uniform_index(1, 5, gen), K = uniform_index(1, 5, gen);
    const Shift S = random_shift(N, gen);
    const ExpansionModel<double> model(random_matrix(K, L, gen), random_vector(N, gen).cwiseMin(1).cwiseMax(-1), S);
    EXPECT_LE(corollary_error(model, S), 1e-18);
  }
}

TEST(DualityError, ZeroDualTapsGiveOne) {
  std::mt19937_64 gen(30);
  const Shift S = random_shift(6, gen);
  const ExpansionModel<double> model(random_matrix(3, 3, gen), random_vector(6, gen), S);
  const auto Sf = dual_from_frequencies(S, model.lambda_f());
  const NodeVariantTaps<double> zero{MatrixXd::Zero(6, 3), FilterType::TypeII};
  EXPECT_DOUBLE_EQ(corollary_error(primal_taps(model), zero, S, Sf), 1.0);
}

TEST(DualityError, DualFilterMatchesOnSignals) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Index N = uniform_index(2, 30, gen), L = uniform_index(1, 6, gen), K = uniform_index(1, 6, gen);
    const Shift S = random_shift(N, gen);
    const ExpansionModel<double> model(random_matrix(K, L, gen), random_vector(N, gen).cwiseMin(1).cwiseMax(-1), S);
    const auto Sf = dual_from_frequencies(S, model.lambda_f());
    const VectorXd x = random_vector(N, gen);
    const VectorXd lhs = gft(S, nvgf_apply(primal_taps(model), S, x));
    const VectorXd rhs = nvgf_apply(dual_taps(model), Sf.matrix(), gft(S, x));
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * x.norm());
  }
}

TEST(Convolution, ConstantTapsGivePointwiseProductInFrequency) {
  std::mt19937_64 gen(32);
  const Shift S = random_shift(8, gen);
  const VectorXd p = random_vector(3, gen);
  const VectorXd x = random_vector(8, gen);
  const VectorXd lhs = gft(S, cgf_matrix(p, S) * x);
  const VectorXd rhs = (vandermonde(S.lambda(), 3) * p).cwiseProduct(gft(S, x));
  EXPECT_LE((lhs - rhs).norm(), 1e-10);
}

TEST(Convolution, SharedWeightsAct) {
  std::mt19937_64 gen(33);
  const Index N = 7, L = 4, K = 3;
  const Shift S = random_shift(N, gen);
  const VectorXd p = random_vector(N, gen);
  MatrixXd C = MatrixXd::Zero(K, L);
  C.row(1).setOnes();
  const ExpansionModel<double> model(C, p, S);
  EXPECT_LE((primal_taps(model).P - p * VectorXd::Ones(L).transpose()).norm(), 1e-14);
  const auto Sf = dual_from_frequencies(S, p);
  const VectorXd x = random_vector(N, gen);
  const VectorXd lhs = gft(S, nvgf_apply(primal_taps(model), S, x));
  const VectorXd weights = vandermonde(S.lambda(), L) * VectorXd::Ones(L);
  const VectorXd rhs = Sf.matrix() * weights.cwiseProduct(gft(S, x));
  EXPECT_LE((lhs - rhs).norm(), 1e-10 * x.norm());
}

TEST(Convolution, FlavorsAgreeOnlyForConstantColumns) {
  std::mt19937_64 gen(34);
  const Shift S = random_shift(6, gen);
  const MatrixXd constant = VectorXd::Ones(6) * random_vector(3, gen).transpose();
  EXPECT_LE((nvgf_matrix(taps(constant, FilterType::TypeI), S) - nvgf_matrix(taps(constant, FilterType::TypeII), S))
                .norm(),
            1e-12);
  const MatrixXd varying = random_matrix(6, 3, gen);
  EXPECT_GT((nvgf_matrix(taps(varying, FilterType::TypeI), S) - nvgf_matrix(taps(varying, FilterType::TypeII), S))
                .norm(),
            1e-6);
}

TEST(DualSplit, MatchesDualFilter) {
  std::mt19937_64 gen(35);
  const Shift S = random_shift(8, gen);
  const ExpansionModel<double> model(random_matrix(3, 3, gen), random_vector(8, gen), S);
  const auto Sf = dual_from_frequencies(S, model.lambda_f());
  const VectorXd xh = random_vector(8, gen);
  const VectorXd split = dual_convolution_split(model, S, xh);
  EXPECT_LE((split - nvgf_apply(dual_taps(model), Sf.matrix(), xh)).norm(), 1e-10);
  EXPECT_TRUE(dual_convolution_split(model, S, VectorXd::Zero(8)).isZero());
}

TEST(DualSplit, OrderOneIsClassicalDualConvolution) {
  std::mt19937_64 gen(36);
  const Shift S = random_shift(5, gen);
  const ExpansionModel<double> model(random_matrix(3, 1, gen), random_vector(5, gen), S);
  const auto Sf = dual_from_frequencies(S, model.lambda_f());
  const VectorXd xh = random_vector(5, gen);
  EXPECT_LE((dual_convolution_split(model, S, xh) - cgf_matrix(model.C().col(0), Sf.matrix()) * xh).norm(), 1e-12);
}
