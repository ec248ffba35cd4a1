#pragma once

// End-to-end experiment harness: synthetic data generation, the
// tap-estimation -> subspace-fitting pipeline, and reporting helpers.

#include "dualgraph/dual_frequency.hpp"
#include "dualgraph/tap_estimation.hpp"

#include <map>
#include <optional>
#include <string>

namespace dualgraph {

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;
using Shift = ShiftOperator<double>;
using Ensemble = SignalEnsemble<double>;

enum class GraphKind { RandomSensor, Grid, Path, FromFile };
enum class PipelineMode { InputOutput, OutputOnly };

struct SynthConfig {
  Index N = 40;
  GraphKind graph_kind = GraphKind::RandomSensor;
  std::string graph_file;  // used when graph_kind == FromFile
  double u_min = -1.0;
  double u_max = 1.0;
  double delta = 1.0;
  Index L = 3;
  Index K = 3;
  Index T = 3000;
  double sigma = 0.0;
  bool curvature_mask = true;
  std::uint64_t seed = 0;

  ScpConfig<double> scp;
  AltMinConfig altmin;

  /// Throws Error(InvalidArgument) unless K <= L <= N, delta >= 0, sigma >= 0,
  /// u_min < u_max and T >= 1.
  void validate() const;
};

/// Independent stream seeds derived from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

VectorXd gen_dual_frequencies(const SynthConfig& cfg);
MatrixXd gen_coefficients(const SynthConfig& cfg);

/// Random geometric graph in the unit square with Gaussian-kernel weights,
/// thresholded at the largest level that keeps it connected.
Shift random_sensor_graph(Index N, std::uint64_t seed);
Shift path_graph(Index N);
/// 4-neighbour grid on side x side nodes, normalized Laplacian.
Shift grid_graph(Index side);

Shift make_graph(const SynthConfig& cfg);

struct Dataset {
  Shift S;
  VectorXd lambda_f;
  MatrixXd C;
  MatrixXd P;
  MatrixXd X;
  MatrixXd Y;
};

Dataset synth_dataset(const SynthConfig& cfg);

/// What the pipeline sees. Ground truth is optional; metrics that need it are
/// only reported when it is present.
struct PipelineInput {
  Shift S;
  Ensemble Y;
  std::optional<Ensemble> X;
  std::optional<MatrixXd> true_P;
  std::optional<VectorXd> true_lambda_f;
};

PipelineInput pipeline_input(const Dataset& data);

struct PipelineReport {
  std::optional<double> nse_taps;
  std::optional<double> pne;
  double corollary_error = 0;
  double objective = 0;
  double residual_nse = 0;
  double stationarity = 0;
  VectorXd lambda_f;
  MatrixXd taps;
  Index start_index = 0;
  std::vector<double> scp_trace;
  std::map<std::string, double> timings;  // seconds per stage
  Warnings warnings;
};

PipelineReport run_pipeline(const PipelineInput& input, PipelineMode mode, Index L, Index K,
                            const ScpConfig<double>& scp, const AltMinConfig& altmin = {});

/// Synthetic generation followed by the pipeline, both driven by cfg.
PipelineReport run_synthetic(const SynthConfig& cfg, PipelineMode mode);

/// Builds an input/output pair from outputs alone: R R^T = sample covariance of
/// Y, X' white, Y' = R X'.
std::pair<Ensemble, Ensemble> whiten_pair(const Ensemble& Y, std::uint64_t seed, Index samples = -1);

/// Input = Y delayed by `shift` columns, output = Y advanced accordingly.
std::pair<Ensemble, Ensemble> shift_input(const Ensemble& Y, Index shift);

struct Edge {
  Index u;
  Index v;
  double weight;
};

/// Largest-|w| off-diagonal pairs of a symmetric matrix: ceil(keep * nnz_pairs)
/// of them, ordered by |w| descending then (u, v).
std::vector<Edge> threshold_edges(const MatrixXd& Sf, double keep_fraction);

/// Dual taps estimated from primal taps and fitted dual frequencies:
/// C = Psi_f^+ P, P_hat = Psi C^T.
NodeVariantTaps<double> estimated_dual_taps(const MatrixXd& P, const VectorXd& lambda_f, const Shift& S, Index K);

}  // namespace dualgraph
