#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dualgraph;
using namespace dualgraph::testing;

TEST(SymEvd, IdentityHasUnitEigenvalues) {
  const auto eig = sym_evd(MatrixXd::Identity(3, 3));
  EXPECT_TRUE(eig.values.isApprox(VectorXd::Ones(3)));
  EXPECT_TRUE((eig.vectors.transpose() * eig.vectors).isApprox(MatrixXd::Identity(3, 3), 1e-12));
  for (Index j = 0; j < 3; ++j) {
    Index arg;
    eig.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(eig.vectors(arg, j), 0);
  }
}

TEST(SymEvd, DiagonalSortsAscendingWithPermutedBasis) {
  const VectorXd d = (VectorXd(3) << 3, 1, 2).finished();
  const auto eig = sym_evd(MatrixXd(d.asDiagonal()));
  EXPECT_TRUE(eig.values.isApprox((VectorXd(3) << 1, 2, 3).finished()));
  MatrixXd expected = MatrixXd::Zero(3, 3);
  expected(1, 0) = expected(2, 1) = expected(0, 2) = 1;
  EXPECT_TRUE(eig.vectors.isApprox(expected, 1e-12));
}

TEST(SymEvd, TwoByTwoExchangeMatrix) {
  const MatrixXd M = (MatrixXd(2, 2) << 0, 1, 1, 0).finished();
  const auto eig = sym_evd(M);
  EXPECT_NEAR(eig.values(0), -1, 1e-14);
  EXPECT_NEAR(eig.values(1), 1, 1e-14);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_TRUE(eig.vectors.col(0).isApprox((VectorXd(2) << r, -r).finished(), 1e-12));
  EXPECT_TRUE(eig.vectors.col(1).isApprox((VectorXd(2) << r, r).finished(), 1e-12));
}

TEST(SymEvd, RejectsAsymmetricInput) {
  MatrixXd M = MatrixXd::Identity(3, 3);
  M(0, 1) = 1e-3;
  try {
    sym_evd(M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonSymmetric);
  }
}

TEST(SymEvd, ReconstructsRandomSymmetric) {
  std::mt19937_64 gen(1);
  for (Index n : {1, 2, 7, 30, 100}) {
    const MatrixXd M = random_symmetric(n, gen);
    const auto eig = sym_evd(M);
    const MatrixXd back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    EXPECT_LE((back - M).norm(), 1e-10 * M.norm());
    for (Index i = 1; i < n; ++i) EXPECT_LE(eig.values(i - 1), eig.values(i));
  }
}

TEST(Svd, IdentityAndRankOne) {
  EXPECT_TRUE(svd(MatrixXd::Identity(2, 2)).singular.isApprox(VectorXd::Ones(2)));
  std::mt19937_64 gen(2);
  const VectorXd a = random_vector(4, gen), b = random_vector(3, gen);
  const auto dec = svd(MatrixXd(a * b.transpose()));
  EXPECT_NEAR(dec.singular(0), a.norm() * b.norm(), 1e-12);
  EXPECT_LE(dec.singular(1), 1e-12);
  EXPECT_LE(dec.singular(2), 1e-12);
}

TEST(Svd, ReconstructionAndOrthonormality) {
  std::mt19937_64 gen(3);
  const MatrixXd M = random_matrix(5, 3, gen);
  const auto dec = svd(M);
  EXPECT_LE((dec.U * dec.singular.asDiagonal() * dec.Z.transpose() - M).norm(), 1e-12);
  EXPECT_LE((dec.U.transpose() * dec.U - MatrixXd::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LE((dec.Z.transpose() * dec.Z - MatrixXd::Identity(3, 3)).norm(), 1e-12);
  for (Index i = 1; i < 3; ++i) EXPECT_GE(dec.singular(i - 1), dec.singular(i));
  EXPECT_GE(dec.singular.minCoeff(), 0);
}

TEST(Pinv, MatchesInverseAndZero) {
  const MatrixXd M = (MatrixXd(2, 2) << 2, 1, 1, 3).finished();
  EXPECT_LE((pinv(M) - M.inverse()).norm(), 1e-12);
  EXPECT_TRUE(pinv(MatrixXd::Zero(3, 2)).isZero());
  EXPECT_EQ(pinv(MatrixXd::Zero(3, 2)).rows(), 2);
}

TEST(Pinv, TallLeftInverseAndPenroseIdentities) {
  std::mt19937_64 gen(4);
  const MatrixXd tall = random_matrix(7, 3, gen);
  EXPECT_LE((pinv(tall) * tall - MatrixXd::Identity(3, 3)).norm(), 1e-10);

  const MatrixXd M = random_matrix(6, 2, gen) * random_matrix(2, 5, gen);  // rank 2
  const MatrixXd X = pinv(M);
  EXPECT_LE((M * X * M - M).norm(), 1e-9);
  EXPECT_LE((X * M * X - X).norm(), 1e-9);
  EXPECT_LE(((M * X).transpose() - M * X).norm(), 1e-9);
  EXPECT_LE(((X * M).transpose() - X * M).norm(), 1e-9);
}

TEST(Lstsq, AgreesWithPinv) {
  std::mt19937_64 gen(5);
  const MatrixXd A = random_matrix(8, 3, gen), B = random_matrix(8, 2, gen);
  EXPECT_LE((lstsq(A, B) - pinv(A) * B).norm(), 1e-12);
}

TEST(KhatriRao, IdentityAndOnesRow) {
  const MatrixXd kr = khatri_rao(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2));
  MatrixXd expected = MatrixXd::Zero(4, 2);
  expected(0, 0) = expected(3, 1) = 1;
  EXPECT_EQ(kr, expected);

  std::mt19937_64 gen(6);
  const MatrixXd B = random_matrix(3, 4, gen);
  EXPECT_EQ(khatri_rao(MatrixXd::Ones(1, 4), B), B);
}

TEST(KhatriRao, MatchesNestedLoopOracle) {
  std::mt19937_64 gen(7);
  const MatrixXd A = random_matrix(3, 2, gen), B = random_matrix(4, 2, gen);
  const MatrixXd kr = khatri_rao(A, B);
  for (Index j = 0; j < 2; ++j)
    for (Index i = 0; i < 3; ++i)
      for (Index k = 0; k < 4; ++k) EXPECT_EQ(kr(i * 4 + k, j), A(i, j) * B(k, j));
}

TEST(KhatriRao, RejectsColumnMismatch) {
  try {
    khatri_rao(MatrixXd::Ones(2, 2), MatrixXd::Ones(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ColumnMismatch);
  }
}

TEST(Vec, ColumnStackingAndRoundTrip) {
  const MatrixXd M = (MatrixXd(2, 2) << 1, 3, 2, 4).finished();
  EXPECT_EQ(vec(M), (VectorXd(4) << 1, 2, 3, 4).finished());
  std::mt19937_64 gen(8);
  const MatrixXd R = random_matrix(3, 4, gen);
  EXPECT_EQ(unvec(vec(R), 3, 4), R);
  EXPECT_THROW(unvec(vec(R), 5, 2), Error);
}

TEST(Vec, DiagonalScalingIsKhatriRao) {
  std::mt19937_64 gen(9);
  const VectorXd d = random_vector(4, gen);
  const MatrixXd M = random_matrix(4, 6, gen);
  const VectorXd lhs = vec(MatrixXd(d.asDiagonal() * M));
  const VectorXd rhs = khatri_rao(MatrixXd(M.transpose()), MatrixXd::Identity(4, 4)) * d;
  EXPECT_LE((lhs - rhs).norm(), 1e-12);
}
