#include "dualgraph/io.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>

using namespace dualgraph;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

PipelineMode parse_mode(const std::string& mode) {
  if (mode == "io") return PipelineMode::InputOutput;
  if (mode == "output-only") return PipelineMode::OutputOnly;
  throw Error(Errc::InvalidArgument, "mode must be io or output-only");
}

void print_warnings(const Warnings& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void require_finite(double value, const std::string& what) {
  if (!std::isfinite(value)) throw Error(Errc::IndefiniteInput, what + " is not finite");
}

struct SynthArgs {
  std::string config;
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  const SynthConfig cfg = io::parse_synth_config(io::read_text(a.config));
  const Dataset d = synth_dataset(cfg);
  const io::fs::path dir = a.out;
  io::write_csv(dir / "S.csv", d.S.matrix());
  io::write_csv(dir / "lambda_f.csv", d.lambda_f);
  io::write_csv(dir / "C.csv", d.C);
  io::write_csv(dir / "P.csv", d.P);
  io::write_csv(dir / "X.csv", d.X);
  io::write_csv(dir / "Y.csv", d.Y);
  return kOk;
}

struct EstimateArgs {
  std::string mode = "io";
  std::string graph;
  std::string signals;
  std::string inputs;
  Index order = 3;
  std::string out;
  std::string altmin_config;
  std::uint64_t seed = 0;
};

int cmd_estimate_taps(const EstimateArgs& a) {
  const Shift S = io::load_graph(a.graph);
  const Ensemble Y = io::load_signals(a.signals);
  AltMinConfig altmin;
  if (!a.altmin_config.empty()) altmin = io::parse_altmin_config(io::read_text(a.altmin_config));
  altmin.seed = a.seed;

  TapEstimate<double> est;
  if (parse_mode(a.mode) == PipelineMode::InputOutput) {
    if (a.inputs.empty()) {
      std::cerr << "warning: no inputs given: using whitened surrogate pairs\n";
      const auto [Xw, Yw] = whiten_pair(center(Y), derive_seed(a.seed, 4));
      est = estimate_taps_io(Xw, Yw, S, a.order);
    } else {
      est = estimate_taps_io(io::load_signals(a.inputs), Y, S, a.order);
    }
  } else {
    est = estimate_taps_output_only(center(Y), S, a.order, altmin);
  }
  print_warnings(est.warnings);
  require_finite(est.residual_nse, "residual NSE");
  io::atomic_write(a.out, io::tap_estimate_json(est));
  std::cout << "residual_nse " << est.residual_nse << '\n';
  return kOk;
}

struct LearnArgs {
  std::string taps;
  Index degree = 3;
  Index starts = 5;
  std::uint64_t seed = 0;
  std::string scp_config;
  std::string out;
};

int cmd_learn_dual(const LearnArgs& a) {
  const TapEstimate<double> est = io::parse_tap_estimate(io::read_text(a.taps));
  ScpConfig<double> cfg;
  if (!a.scp_config.empty()) cfg = io::parse_scp_config(io::read_text(a.scp_config));
  cfg.num_starts = a.starts;
  cfg.seed = a.seed;
  require(a.starts >= 1, Errc::InvalidArgument, "--starts must be >= 1");

  const auto prob = subspace_problem(est.taps.P, a.degree);
  print_warnings(prob.warnings);
  const auto result = multi_start(prob, make_starts(prob.N(), cfg), cfg);
  require_finite(result.objective, "objective");
  io::atomic_write(a.out, io::scp_result_json(result, cfg, a.degree));
  std::cout << "objective " << result.objective << " start " << result.start_index << '\n';
  return kOk;
}

struct PipelineArgs {
  std::string config;
  std::string mode = "io";
  std::string out;
  std::string graph;
  std::string signals;
  std::string inputs;
  Index shift_input = 0;
};

int cmd_pipeline(const PipelineArgs& a) {
  const std::string config_text = io::read_text(a.config);
  const SynthConfig cfg = io::parse_synth_config(config_text);
  const PipelineMode mode = parse_mode(a.mode);

  PipelineReport report;
  if (a.signals.empty()) {
    require(a.graph.empty() && a.inputs.empty() && a.shift_input == 0, Errc::InvalidArgument,
            "--graph, --inputs and --shift-input need --signals");
    report = run_synthetic(cfg, mode);
  } else {
    require(!a.graph.empty(), Errc::InvalidArgument, "--signals needs --graph");
    require(a.inputs.empty() || a.shift_input == 0, Errc::InvalidArgument,
            "--inputs and --shift-input are mutually exclusive");
    PipelineInput input{io::load_graph(a.graph), center(io::load_signals(a.signals)), std::nullopt, std::nullopt,
                        std::nullopt};
    if (!a.inputs.empty()) {
      input.X = center(io::load_signals(a.inputs));
    } else if (a.shift_input > 0) {
      auto [X, Y] = shift_input(input.Y, a.shift_input);
      input.X = std::move(X);
      input.Y = std::move(Y);
    }
    ScpConfig<double> scp = cfg.scp;
    scp.seed = derive_seed(cfg.seed, 6 + cfg.scp.seed);
    AltMinConfig altmin = cfg.altmin;
    altmin.seed = derive_seed(cfg.seed, 7 + cfg.altmin.seed);
    report = run_pipeline(input, mode, cfg.L, cfg.K, scp, altmin);
  }
  print_warnings(report.warnings);
  require_finite(report.corollary_error, "corollary error");
  require_finite(report.residual_nse, "residual NSE");
  io::atomic_write(a.out, io::pipeline_report_json(report, io::synth_config_json(cfg)));

  std::cout << "corollary_error " << report.corollary_error << '\n';
  std::cout << "residual_nse " << report.residual_nse << '\n';
  std::cout << "stationarity " << report.stationarity << '\n';
  if (report.nse_taps) std::cout << "nse_taps " << *report.nse_taps << '\n';
  if (report.pne) std::cout << "pne " << *report.pne << '\n';
  return kOk;
}

struct StationarityArgs {
  std::string graph;
  std::string signals;
};

int cmd_stationarity(const StationarityArgs& a) {
  const Shift S = io::load_graph(a.graph);
  const double rho = stationarity_proxy(io::load_signals(a.signals), S);
  std::cout.precision(17);
  std::cout << rho << '\n';
  return kOk;
}

struct DualGraphArgs {
  std::string graph;
  std::string lambda_f;
  double keep = 0.02;
  std::string out;
};

int cmd_dual_graph(const DualGraphArgs& a) {
  const Shift S = io::load_graph(a.graph);
  const VectorXd lambda_f = io::parse_lambda_f(io::read_text(a.lambda_f));
  const auto Sf = dual_from_frequencies(S, lambda_f);
  io::atomic_write(a.out, io::format_edge_list(threshold_edges(Sf.matrix(), a.keep)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node-variant graph filters and dual graph learning"};
  app.require_subcommand(1);
  std::function<int()> run;

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  c_synth->add_option("--config", synth.config, "SynthConfig JSON")->required();
  c_synth->add_option("--out", synth.out, "Output directory")->required();
  c_synth->callback([&] { run = [&] { return cmd_synth(synth); }; });

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate-taps", "Estimate node-variant filter taps");
  c_est->add_option("--mode", est.mode, "io or output-only")->check(CLI::IsMember({"io", "output-only"}));
  c_est->add_option("--graph", est.graph, "Shift operator (.edges or .csv)")->required();
  c_est->add_option("--signals", est.signals, "Output signals CSV (rows = nodes)")->required();
  c_est->add_option("--inputs", est.inputs, "Input signals CSV (io mode)");
  c_est->add_option("--order", est.order, "Filter order L")->required();
  c_est->add_option("--altmin-config", est.altmin_config, "AltMinConfig JSON (output-only mode)");
  c_est->add_option("--seed", est.seed, "Seed");
  c_est->add_option("--out", est.out, "Output taps JSON")->required();
  c_est->callback([&] { run = [&] { return cmd_estimate_taps(est); }; });

  LearnArgs learn;
  auto* c_learn = app.add_subcommand("learn-dual", "Fit dual graph frequencies to estimated taps");
  c_learn->add_option("--taps", learn.taps, "Taps JSON")->required();
  c_learn->add_option("--degree", learn.degree, "Dual order K")->required();
  c_learn->add_option("--starts", learn.starts, "Number of SCP starts");
  c_learn->add_option("--seed", learn.seed, "Seed for the jittered starts");
  c_learn->add_option("--scp-config", learn.scp_config, "ScpConfig JSON");
  c_learn->add_option("--out", learn.out, "Output JSON")->required();
  c_learn->callback([&] { run = [&] { return cmd_learn_dual(learn); }; });

  PipelineArgs pipe;
  auto* c_pipe = app.add_subcommand("pipeline", "Run tap estimation and dual frequency learning end to end");
  c_pipe->add_option("--config", pipe.config, "SynthConfig JSON")->required();
  c_pipe->add_option("--mode", pipe.mode, "io or output-only")->check(CLI::IsMember({"io", "output-only"}));
  c_pipe->add_option("--out", pipe.out, "Report JSON")->required();
  c_pipe->add_option("--graph", pipe.graph, "Shift operator of user data");
  c_pipe->add_option("--signals", pipe.signals, "User output signals CSV");
  c_pipe->add_option("--inputs", pipe.inputs, "User input signals CSV");
  c_pipe->add_option("--shift-input", pipe.shift_input, "Use signals delayed by this many columns as inputs");
  c_pipe->callback([&] { run = [&] { return cmd_pipeline(pipe); }; });

  StationarityArgs stat;
  auto* c_stat = app.add_subcommand("stationarity", "Print the stationarity proxy rho");
  c_stat->add_option("--graph", stat.graph, "Shift operator")->required();
  c_stat->add_option("--signals", stat.signals, "Signals CSV")->required();
  c_stat->callback([&] { run = [&] { return cmd_stationarity(stat); }; });

  DualGraphArgs dual;
  auto* c_dual = app.add_subcommand("dual-graph", "Export the strongest edges of the dual graph");
  c_dual->add_option("--graph", dual.graph, "Primal shift operator")->required();
  c_dual->add_option("--lambda-f", dual.lambda_f, "JSON with lambda_f")->required();
  c_dual->add_option("--keep", dual.keep, "Fraction of edges to keep");
  c_dual->add_option("--out", dual.out, "Output edges CSV")->required();
  c_dual->callback([&] { run = [&] { return cmd_dual_graph(dual); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return is_numerical(e.code()) ? kNumerical : kValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
