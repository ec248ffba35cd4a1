#include "test_util.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace dualgraph;
using namespace dualgraph::testing;

namespace {

double fiedler_value(const MatrixXd& W) {
  MatrixXd L = -W;
  L.diagonal() = W.rowwise().sum();
  return sym_evd(L).values(1);
}

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.N = 12;
  cfg.T = 200;
  cfg.delta = 10;
  cfg.seed = seed;
  cfg.scp.max_iters = 60;
  return cfg;
}

}  // namespace

TEST(Config, Validation) {
  SynthConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.K = 4;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.T = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.u_min = 1;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.sigma = -1;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Seeds, StreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 8; ++s) seen.insert(derive_seed(42, s));
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
}

TEST(DualFrequencies, ZeroJitterIsGrid) {
  SynthConfig cfg;
  cfg.delta = 0;
  EXPECT_EQ(gen_dual_frequencies(cfg), VectorXd::LinSpaced(40, -1, 1));
}

TEST(DualFrequencies, SubUnitJitterKeepsRanking) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthConfig cfg;
    cfg.delta = 0.999;
    cfg.seed = seed;
    const VectorXd lf = gen_dual_frequencies(cfg);
    for (Index i = 1; i < lf.size(); ++i) ASSERT_LT(lf(i - 1), lf(i));
  }
}

TEST(DualFrequencies, JitterIsBoundedAndDeterministic) {
  SynthConfig cfg;
  cfg.delta = 1e3;
  cfg.seed = 4;
  const VectorXd lf = gen_dual_frequencies(cfg);
  const double sd = cfg.delta * (2.0 / 39.0) / 2;
  EXPECT_LE((lf - VectorXd::LinSpaced(40, -1, 1)).cwiseAbs().maxCoeff(), sd);
  EXPECT_EQ(lf, gen_dual_frequencies(cfg));
}

TEST(Coefficients, MaskScalesRows) {
  SynthConfig cfg;
  cfg.K = 3;
  cfg.L = 4;
  cfg.seed = 5;
  cfg.curvature_mask = false;
  const MatrixXd plain = gen_coefficients(cfg);
  cfg.curvature_mask = true;
  const MatrixXd masked = gen_coefficients(cfg);
  for (Index k = 0; k < 3; ++k) EXPECT_EQ(masked.row(k), plain.row(k) * double(k + 1));
  EXPECT_EQ(masked, gen_coefficients(cfg));
}

TEST(Coefficients, MaskOfOnes) {
  MatrixXd C = MatrixXd::Ones(3, 2);
  for (Index k = 0; k < 3; ++k) C.row(k) *= double(k + 1);
  EXPECT_EQ(C.col(1), (VectorXd(3) << 1, 2, 3).finished());
}

TEST(SensorGraph, TwoNodesOneEdge) {
  const Shift S = random_sensor_graph(2, 1);
  EXPECT_GT(S.matrix()(0, 1), 0);
  EXPECT_EQ(S.matrix()(0, 1), S.matrix()(1, 0));
  EXPECT_EQ(S.matrix().diagonal(), VectorXd::Zero(2));
}

TEST(SensorGraph, ConnectedAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Shift S = random_sensor_graph(40, seed);
    EXPECT_GT(fiedler_value(S.matrix()), 1e-10);
    EXPECT_EQ(S.matrix(), random_sensor_graph(40, seed).matrix());
    EXPECT_EQ(S.kind(), ShiftKind::Adjacency);
  }
}

TEST(SensorGraph, ThresholdIsTight) {
  // Dropping the lightest kept edge level must disconnect the graph.
  const Shift S = random_sensor_graph(30, 9);
  MatrixXd W = S.matrix();
  double lightest = 1e300;
  for (Index i = 0; i < 30; ++i)
    for (Index j = i + 1; j < 30; ++j)
      if (W(i, j) > 0) lightest = std::min(lightest, W(i, j));
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 30; ++j)
      if (W(i, j) == lightest) W(i, j) = 0;
  EXPECT_LE(fiedler_value(W), 1e-10);
}

TEST(OtherGraphs, PathAndGrid) {
  EXPECT_EQ(path_graph(3).matrix(), path_adjacency(3));
  const Shift G = grid_graph(3);
  EXPECT_EQ(G.kind(), ShiftKind::NormalizedLaplacian);
  EXPECT_NEAR(G.lambda()(0), 0, 1e-12);
  SynthConfig cfg;
  cfg.graph_kind = GraphKind::Grid;
  cfg.N = 10;
  EXPECT_THROW(make_graph(cfg), Error);
}

TEST(Synth, NoiselessOutputIsExactFilter) {
  const Dataset d = synth_dataset(small_config(1));
  EXPECT_EQ(d.P, vandermonde(d.lambda_f, 3) * d.C);
  const MatrixXd H = nvgf_matrix(NodeVariantTaps<double>{d.P, FilterType::TypeI}, d.S);
  EXPECT_LE((d.Y - H * d.X).norm(), 1e-12 * d.Y.norm());
}

TEST(Synth, NoiseHasRequestedLevel) {
  SynthConfig cfg = small_config(2);
  cfg.T = 5000;
  cfg.sigma = 3;
  const Dataset noisy = synth_dataset(cfg);
  cfg.sigma = 0;
  const Dataset clean = synth_dataset(cfg);
  const MatrixXd noise = noisy.Y - clean.Y;
  EXPECT_NEAR(std::sqrt(noise.squaredNorm() / double(noise.size())), 3.0, 0.05);
  EXPECT_EQ(noisy.X, clean.X);
}

TEST(Pipeline, DeterministicApartFromTimings) {
  const auto a = run_synthetic(small_config(3), PipelineMode::InputOutput);
  const auto b = run_synthetic(small_config(3), PipelineMode::InputOutput);
  EXPECT_EQ(a.lambda_f, b.lambda_f);
  EXPECT_EQ(a.taps, b.taps);
  EXPECT_EQ(a.scp_trace, b.scp_trace);
  EXPECT_EQ(a.corollary_error, b.corollary_error);
  EXPECT_EQ(a.pne, b.pne);
  EXPECT_EQ(a.nse_taps, b.nse_taps);
  EXPECT_EQ(a.timings.size(), 3u);
}

TEST(Pipeline, MetricsAreFiniteAndNonnegative) {
  for (auto mode : {PipelineMode::InputOutput, PipelineMode::OutputOnly}) {
    const auto r = run_synthetic(small_config(4), mode);
    ASSERT_TRUE(r.nse_taps && r.pne);
    for (double v : {*r.nse_taps, *r.pne, r.corollary_error, r.objective, r.residual_nse, r.stationarity}) {
      EXPECT_TRUE(std::isfinite(v));
      EXPECT_GE(v, 0);
    }
  }
}

TEST(Pipeline, RealDataReportsOnlyAvailableMetrics) {
  const Dataset d = synth_dataset(small_config(5));
  PipelineInput input{d.S, Ensemble{d.Y, false}, std::nullopt, std::nullopt, std::nullopt};
  ScpConfig<double> scp;
  scp.max_iters = 30;
  const auto r = run_pipeline(input, PipelineMode::InputOutput, 3, 3, scp);
  EXPECT_FALSE(r.nse_taps.has_value());
  EXPECT_FALSE(r.pne.has_value());
  EXPECT_TRUE(std::isfinite(r.corollary_error));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Pipeline, ExactModelHasNegligibleCorollaryError) {
  const Dataset d = synth_dataset(small_config(6));
  const auto dual = estimated_dual_taps(d.P, d.lambda_f, d.S, 3);
  const auto Sf = dual_from_frequencies(d.S, d.lambda_f);
  EXPECT_LE(corollary_error(NodeVariantTaps<double>{d.P, FilterType::TypeI}, dual, d.S, Sf), 1e-14);
}

TEST(Pipeline, RejectsBadOrders) {
  const Dataset d = synth_dataset(small_config(7));
  EXPECT_THROW(run_pipeline(pipeline_input(d), PipelineMode::InputOutput, 2, 3, {}), Error);
}

TEST(Whiten, WhiteSignalsGiveIdentityFactor) {
  const auto Y = white_ensemble(10, 10000, 1);
  const MatrixXd R = covariance_factor(sample_covariance(Y));
  EXPECT_LE((R - MatrixXd::Identity(10, 10)).norm(), 0.1);
}

TEST(Whiten, SurrogateMatchesCovarianceAndIsDeterministic) {
  std::mt19937_64 gen(90);
  const auto Y = generate_nonstationary(random_matrix(6, 6, gen), white_ensemble(6, 500, 2));
  const MatrixXd C = sample_covariance(Y);
  const auto [X, Yw] = whiten_pair(Y, 3, 100000);
  EXPECT_EQ(X.samples(), 100000);
  EXPECT_LE((sample_covariance(Yw) - C).norm(), 0.05 * C.norm());
  const auto again = whiten_pair(Y, 3, 100000);
  EXPECT_EQ(again.first.data, X.data);
  EXPECT_THROW(whiten_pair(Ensemble{MatrixXd::Ones(3, 1), false}, 1), Error);
}

TEST(ShiftInput, AlignsColumns) {
  const MatrixXd Y = (MatrixXd(2, 4) << 1, 2, 3, 4, 5, 6, 7, 8).finished();
  const auto [X, Z] = shift_input(Ensemble{Y, false}, 2);
  EXPECT_EQ(X.data, Y.leftCols(2));
  EXPECT_EQ(Z.data, Y.rightCols(2));
}

TEST(Threshold, KeepAllAndCountingRule) {
  std::mt19937_64 gen(91);
  MatrixXd M = random_symmetric(8, gen);
  M(0, 3) = M(3, 0) = 0;
  const auto all = threshold_edges(M, 1.0);
  EXPECT_EQ(all.size(), 27u);
  for (const auto& e : all) EXPECT_LT(e.u, e.v);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GE(std::abs(all[i - 1].weight), std::abs(all[i].weight));
  EXPECT_EQ(threshold_edges(M, 0.5).size(), 14u);  // ceil(13.5)
  EXPECT_EQ(threshold_edges(M, 0.1).size(), 3u);   // ceil(2.7)
  EXPECT_THROW(threshold_edges(M, 0.0), Error);
}

TEST(Threshold, MnistScale) {
  std::mt19937_64 gen(92);
  const MatrixXd M = random_symmetric(324, gen);
  const double pairs = 324.0 * 323.0 / 2.0;
  const auto edges = threshold_edges(M, 0.02);
  EXPECT_EQ(edges.size(), static_cast<std::size_t>(std::ceil(0.02 * pairs)));
  EXPECT_LE(double(edges.size()), 0.02 * pairs + 1);
}
