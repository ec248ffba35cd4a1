#include "dualgraph/workbench.hpp"

#include "dualgraph/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

namespace dualgraph {

void SynthConfig::validate() const {
  require(N >= 2, Errc::InvalidArgument, "N must be >= 2");
  require(K >= 1 && K <= L && L <= N, Errc::InvalidArgument, "orders must satisfy 1 <= K <= L <= N");
  require(delta >= 0, Errc::InvalidArgument, "delta must be >= 0");
  require(sigma >= 0, Errc::InvalidArgument, "sigma must be >= 0");
  require(u_min < u_max, Errc::InvalidArgument, "u_min must be < u_max");
  require(T >= 1, Errc::InvalidArgument, "T must be >= 1");
  require(graph_kind != GraphKind::FromFile || !graph_file.empty(), Errc::InvalidArgument,
          "graph_kind from_file needs graph_file");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

VectorXd gen_dual_frequencies(const SynthConfig& cfg) {
  return jittered_grid<double>(cfg.N, cfg.u_min, cfg.u_max, cfg.delta, derive_seed(cfg.seed, 2));
}

MatrixXd gen_coefficients(const SynthConfig& cfg) {
  std::mt19937_64 gen(derive_seed(cfg.seed, 3));
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd C(cfg.K, cfg.L);
  for (Index l = 0; l < cfg.L; ++l)
    for (Index k = 0; k < cfg.K; ++k) C(k, l) = normal(gen);
  if (cfg.curvature_mask)
    for (Index k = 0; k < cfg.K; ++k) C.row(k) *= double(k + 1);
  return C;
}

namespace {

struct DisjointSets {
  explicit DisjointSets(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index(0));
  }
  Index find(Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
  std::vector<Index> parent;
};

struct WeightedPair {
  Index i, j;
  double w;
};

bool connected_with_top(const std::vector<WeightedPair>& pairs, std::size_t count, Index N) {
  DisjointSets sets(N);
  Index components = N;
  for (std::size_t e = 0; e < count; ++e)
    if (sets.unite(pairs[e].i, pairs[e].j)) --components;
  return components == 1;
}

}  // namespace

Shift random_sensor_graph(Index N, std::uint64_t seed) {
  require(N >= 2, Errc::InvalidArgument, "random_sensor_graph needs N >= 2");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MatrixXd points(N, 2);
  for (Index i = 0; i < N; ++i) {
    points(i, 0) = unit(gen);
    points(i, 1) = unit(gen);
  }

  MatrixXd dist = MatrixXd::Zero(N, N);
  double total = 0;
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j) {
      dist(i, j) = dist(j, i) = (points.row(i) - points.row(j)).norm();
      total += dist(i, j);
    }
  const double width = total / double(N * (N - 1) / 2) / 2.0;

  std::vector<WeightedPair> pairs;
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j)
      pairs.push_back({i, j, std::exp(-dist(i, j) * dist(i, j) / (2 * width * width))});
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.w > b.w; });

  // Smallest prefix (heaviest edges first) that connects the graph.
  std::size_t lo = 1, hi = pairs.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (connected_with_top(pairs, mid, N)) hi = mid;
    else lo = mid + 1;
  }
  const double threshold = pairs[lo - 1].w;

  MatrixXd W = MatrixXd::Zero(N, N);
  for (const auto& p : pairs)
    if (p.w >= threshold) W(p.i, p.j) = W(p.j, p.i) = p.w;
  return shift_from_adjacency(W);
}

Shift path_graph(Index N) {
  require(N >= 1, Errc::InvalidArgument, "path_graph needs N >= 1");
  MatrixXd W = MatrixXd::Zero(N, N);
  for (Index i = 0; i + 1 < N; ++i) W(i, i + 1) = W(i + 1, i) = 1.0;
  return shift_from_adjacency(W);
}

Shift grid_graph(Index side) {
  require(side >= 1, Errc::InvalidArgument, "grid_graph needs side >= 1");
  const Index N = side * side;
  MatrixXd W = MatrixXd::Zero(N, N);
  for (Index r = 0; r < side; ++r)
    for (Index c = 0; c < side; ++c) {
      const Index i = r * side + c;
      if (c + 1 < side) W(i, i + 1) = W(i + 1, i) = 1.0;
      if (r + 1 < side) W(i, i + side) = W(i + side, i) = 1.0;
    }
  return shift_normalized_laplacian(W);
}

Shift make_graph(const SynthConfig& cfg) {
  switch (cfg.graph_kind) {
    case GraphKind::RandomSensor: return random_sensor_graph(cfg.N, derive_seed(cfg.seed, 1));
    case GraphKind::Path: return path_graph(cfg.N);
    case GraphKind::Grid: {
      const auto side = static_cast<Index>(std::llround(std::sqrt(double(cfg.N))));
      require(side * side == cfg.N, Errc::InvalidArgument, "grid graph needs N to be a perfect square");
      return grid_graph(side);
    }
    case GraphKind::FromFile: break;
  }
  require(!cfg.graph_file.empty(), Errc::InvalidArgument, "graph_kind from_file needs graph_file");
  return io::load_graph(cfg.graph_file);
}

Dataset synth_dataset(const SynthConfig& cfg) {
  cfg.validate();
  Dataset d{make_graph(cfg), gen_dual_frequencies(cfg), gen_coefficients(cfg), {}, {}, {}};
  require(d.S.size() == cfg.N, Errc::DimensionMismatch, "graph size differs from N");
  d.P = vandermonde(d.lambda_f, cfg.K) * d.C;
  d.X = white_ensemble<double>(cfg.N, cfg.T, derive_seed(cfg.seed, 4)).data;
  d.Y = nvgf_apply(NodeVariantTaps<double>{d.P, FilterType::TypeI}, d.S, d.X);
  if (cfg.sigma > 0) d.Y += cfg.sigma * white_ensemble<double>(cfg.N, cfg.T, derive_seed(cfg.seed, 5)).data;
  return d;
}

PipelineInput pipeline_input(const Dataset& data) {
  return {data.S, Ensemble{data.Y, false}, Ensemble{data.X, false}, data.P, data.lambda_f};
}

NodeVariantTaps<double> estimated_dual_taps(const MatrixXd& P, const VectorXd& lambda_f, const Shift& S, Index K) {
  const MatrixXd C = lstsq(vandermonde(lambda_f, K), P);
  return {vandermonde(S.lambda(), P.cols()) * C.transpose(), FilterType::TypeII};
}

namespace {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink), last_(Clock::now()) {}
  void lap(const std::string& stage) {
    const auto now = Clock::now();
    sink_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::map<std::string, double>& sink_;
  Clock::time_point last_;
};

}  // namespace

PipelineReport run_pipeline(const PipelineInput& input, PipelineMode mode, Index L, Index K,
                            const ScpConfig<double>& scp, const AltMinConfig& altmin) {
  const Index N = input.S.size();
  require(input.Y.nodes() == N, Errc::DimensionMismatch, "signals and graph disagree on N");
  require(K >= 1 && K <= L && L <= N, Errc::InvalidArgument, "orders must satisfy 1 <= K <= L <= N");

  PipelineReport report;
  StageTimer timer(report.timings);

  TapEstimate<double> taps;
  if (mode == PipelineMode::InputOutput) {
    if (input.X) {
      require(input.X->nodes() == N && input.X->samples() == input.Y.samples(), Errc::DimensionMismatch,
              "inputs and outputs must both be N x T");
      taps = estimate_taps_io(*input.X, input.Y, input.S, L);
    } else {
      report.warnings.push_back("no inputs given: using whitened surrogate pairs");
      const auto [Xw, Yw] = whiten_pair(center(input.Y), altmin.seed);
      taps = estimate_taps_io(Xw, Yw, input.S, L);
    }
  } else {
    taps = estimate_taps_output_only(center(input.Y), input.S, L, altmin);
  }
  timer.lap("tap_estimation");
  report.warnings.insert(report.warnings.end(), taps.warnings.begin(), taps.warnings.end());
  report.taps = taps.taps.P;
  report.residual_nse = taps.residual_nse;

  const auto prob = subspace_problem(taps.taps.P, K);
  report.warnings.insert(report.warnings.end(), prob.warnings.begin(), prob.warnings.end());
  const auto result = multi_start(prob, make_starts(N, scp), scp);
  timer.lap("dual_frequency");
  report.lambda_f = result.lambda_f;
  report.objective = result.objective;
  report.start_index = result.start_index;
  report.scp_trace = result.trace;

  const auto Sf = dual_from_frequencies(input.S, result.lambda_f);
  report.corollary_error =
      corollary_error(taps.taps, estimated_dual_taps(taps.taps.P, result.lambda_f, input.S, K), input.S, Sf);
  report.stationarity = stationarity_proxy(input.Y, input.S);
  if (input.true_P) report.nse_taps = nse(taps.taps.P, *input.true_P);
  if (input.true_lambda_f) report.pne = pne(result.lambda_f, *input.true_lambda_f, &report.warnings);
  timer.lap("metrics");
  return report;
}

PipelineReport run_synthetic(const SynthConfig& cfg, PipelineMode mode) {
  const Dataset data = synth_dataset(cfg);
  ScpConfig<double> scp = cfg.scp;
  scp.seed = derive_seed(cfg.seed, 6 + cfg.scp.seed);
  AltMinConfig altmin = cfg.altmin;
  altmin.seed = derive_seed(cfg.seed, 7 + cfg.altmin.seed);
  return run_pipeline(pipeline_input(data), mode, cfg.L, cfg.K, scp, altmin);
}

std::pair<Ensemble, Ensemble> whiten_pair(const Ensemble& Y, std::uint64_t seed, Index samples) {
  require(Y.samples() >= 2, Errc::InvalidArgument, "whiten_pair needs T >= 2");
  const MatrixXd R = covariance_factor(sample_covariance(Y));
  const Index T = samples > 0 ? samples : Y.samples();
  Ensemble X = white_ensemble<double>(Y.nodes(), T, seed);
  Ensemble Yw = generate_nonstationary(R, X);
  return {std::move(X), std::move(Yw)};
}

std::pair<Ensemble, Ensemble> shift_input(const Ensemble& Y, Index shift) {
  require(shift >= 0 && shift < Y.samples(), Errc::InvalidArgument, "shift must be in [0, T)");
  const Index T = Y.samples() - shift;
  return {Ensemble{Y.data.leftCols(T), false}, Ensemble{Y.data.rightCols(T), false}};
}

std::vector<Edge> threshold_edges(const MatrixXd& Sf, double keep_fraction) {
  require(Sf.rows() == Sf.cols(), Errc::DimensionMismatch, "threshold_edges needs a square matrix");
  require(keep_fraction > 0 && keep_fraction <= 1, Errc::InvalidArgument, "keep fraction must be in (0, 1]");
  std::vector<Edge> edges;
  for (Index i = 0; i < Sf.rows(); ++i)
    for (Index j = i + 1; j < Sf.cols(); ++j)
      if (Sf(i, j) != 0.0) edges.push_back({i, j, Sf(i, j)});
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& a, const Edge& b) { return std::abs(a.weight) > std::abs(b.weight); });
  const auto keep = static_cast<std::size_t>(std::ceil(keep_fraction * double(edges.size()) - 1e-9));
  edges.resize(std::min(keep, edges.size()));
  return edges;
}

}  // namespace dualgraph
