#include "dualgraph/io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <unistd.h>

namespace dualgraph::io {

using json = nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(Errc::ParseError, msg); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

json matrix_to_json(const MatrixXd& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double number(const json& j, const std::string& what) {
  if (!j.is_number()) parse_fail(what + " must be a number");
  return j.get<double>();
}

MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + " must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (rows == 0) return MatrixXd(0, 0);
  if (!j[0].is_array()) parse_fail(what + " must be an array of rows");
  const auto cols = static_cast<Index>(j[0].size());
  MatrixXd M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) parse_fail(what + " has ragged rows");
    for (Index c = 0; c < cols; ++c) M(i, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return M;
}

VectorXd vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) parse_fail(what + " must be an array");
  VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], what);
  return v;
}

/// Reads the keys of a config object, rejecting anything it does not know so
/// that typos surface as validation errors.
class Fields {
 public:
  Fields(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
    if (!j_.is_object()) parse_fail(scope_ + " must be a JSON object");
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      target = j_.at(key).get<T>();
    } catch (const json::exception&) {
      parse_fail(scope_ + "." + key + " has the wrong type");
    }
  }

  const json* sub(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) parse_fail("unknown field " + scope_ + "." + item.key());
  }

 private:
  const json& j_;
  std::string scope_;
  std::set<std::string> seen_;
};

template <typename E>
E enum_from(const std::string& text, const std::vector<std::pair<std::string, E>>& names, const std::string& what) {
  for (const auto& [name, value] : names)
    if (name == text) return value;
  parse_fail("unknown " + what + " '" + text + "'");
}

template <typename E>
std::string enum_name(E value, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [name, v] : names)
    if (v == value) return name;
  return "?";
}

const std::vector<std::pair<std::string, GraphKind>> kGraphKinds = {
    {"random_sensor", GraphKind::RandomSensor}, {"grid", GraphKind::Grid},
    {"path", GraphKind::Path}, {"from_file", GraphKind::FromFile}};
const std::vector<std::pair<std::string, TrustNorm>> kNorms = {{"l2", TrustNorm::L2}, {"linf", TrustNorm::Linf}};
const std::vector<std::pair<std::string, FactorChoice>> kFactors = {
    {"sym_sqrt", FactorChoice::SymSqrt}, {"svd_uy_ly_uyt", FactorChoice::SvdUyLyUyT}, {"svd_uy_ly", FactorChoice::SvdUyLy}};
const std::vector<std::pair<std::string, FilterType>> kFlavors = {{"type_i", FilterType::TypeI},
                                                                 {"type_ii", FilterType::TypeII}};

void read_scp(const json& j, ScpConfig<double>& cfg) {
  Fields f(j, "scp");
  f.read("rho0", cfg.rho0);
  f.read("gamma", cfg.gamma);
  std::string norm = enum_name(cfg.norm, kNorms);
  f.read("norm", norm);
  cfg.norm = enum_from(norm, kNorms, "norm");
  f.read("max_iters", cfg.max_iters);
  f.read("alpha_grid", cfg.alpha_grid);
  f.read("obj_tol", cfg.obj_tol);
  f.read("num_starts", cfg.num_starts);
  f.read("seed", cfg.seed);
  f.read("u_min", cfg.u_min);
  f.read("u_max", cfg.u_max);
  f.read("start_delta", cfg.start_delta);
  f.finish();
}

json scp_to_json(const ScpConfig<double>& cfg) {
  return {{"rho0", cfg.rho0},         {"gamma", cfg.gamma},
          {"norm", enum_name(cfg.norm, kNorms)},
          {"max_iters", cfg.max_iters}, {"alpha_grid", cfg.alpha_grid},
          {"obj_tol", cfg.obj_tol},     {"num_starts", cfg.num_starts},
          {"seed", cfg.seed},           {"u_min", cfg.u_min},
          {"u_max", cfg.u_max},         {"start_delta", cfg.start_delta}};
}

void read_altmin(const json& j, AltMinConfig& cfg) {
  Fields f(j, "altmin");
  f.read("max_iters", cfg.max_iters);
  f.read("rel_obj_tol", cfg.rel_obj_tol);
  std::string factor = enum_name(cfg.factor_choice, kFactors);
  f.read("factor_choice", factor);
  cfg.factor_choice = enum_from(factor, kFactors, "factor_choice");
  f.read("random_init", cfg.random_init);
  f.read("seed", cfg.seed);
  f.finish();
}

json altmin_to_json(const AltMinConfig& cfg) {
  return {{"max_iters", cfg.max_iters},
          {"rel_obj_tol", cfg.rel_obj_tol},
          {"factor_choice", enum_name(cfg.factor_choice, kFactors)},
          {"random_init", cfg.random_init},
          {"seed", cfg.seed}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void atomic_write(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      fs::remove(tmp);
      throw Error(Errc::InvalidArgument, "failed writing " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

bool parse_number(const std::string& token, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(token, &pos);
  } catch (const std::exception&) {
    return false;
  }
  while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
  return pos == token.size();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

MatrixXd parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& cell : split(line, ',')) {
      double v = 0;
      if (!parse_number(cell, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      parse_fail("non-numeric CSV cell on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      parse_fail("CSV line " + std::to_string(line_no) + " has " + std::to_string(row.size()) + " cells, expected " +
                 std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return MatrixXd(0, 0);
  MatrixXd M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

MatrixXd read_csv(const fs::path& path) { return parse_csv(read_text(path)); }

std::string format_csv(const MatrixXd& M, const std::vector<std::string>& header) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? "," : "") << M(i, j);
    out << '\n';
  }
  return out.str();
}

void write_csv(const fs::path& path, const MatrixXd& M, const std::vector<std::string>& header) {
  atomic_write(path, format_csv(M, header));
}

MatrixXd parse_edge_list(const std::string& text, Index N) {
  struct Row {
    Index u, v;
    double w;
  };
  std::vector<Row> rows;
  Index max_index = -1;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a)) continue;
    double u = 0, v = 0, w = 0;
    if (!(ls >> b >> c) || (ls >> extra) || !parse_number(a, u) || !parse_number(b, v) || !parse_number(c, w))
      parse_fail("edge list line " + std::to_string(line_no) + " is not 'u v weight'");
    if (u < 0 || v < 0 || u != std::floor(u) || v != std::floor(v))
      parse_fail("edge list line " + std::to_string(line_no) + " has a bad node index");
    rows.push_back({static_cast<Index>(u), static_cast<Index>(v), w});
    max_index = std::max({max_index, rows.back().u, rows.back().v});
  }
  if (N < 0) N = max_index + 1;
  require(max_index < N, Errc::DimensionMismatch, "edge list references a node beyond N");
  MatrixXd W = MatrixXd::Zero(N, N);
  for (const auto& r : rows) {
    W(r.u, r.v) = r.w;
    W(r.v, r.u) = r.w;
  }
  return W;
}

std::string format_edge_list(const std::vector<Edge>& edges) {
  std::ostringstream out;
  out << std::setprecision(17) << "u,v,weight\n";
  for (const auto& e : edges) out << e.u << ',' << e.v << ',' << e.weight << '\n';
  return out.str();
}

Shift load_graph(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".edges") return Shift(parse_edge_list(read_text(path)));
  if (ext == ".csv") {
    MatrixXd S = read_csv(path);
    require(S.rows() == S.cols() && S.rows() > 0, Errc::DimensionMismatch, "graph CSV must be a square matrix");
    return Shift(std::move(S));
  }
  throw Error(Errc::InvalidArgument, "graph file must end in .edges or .csv: " + path.string());
}

Ensemble load_signals(const fs::path& path) {
  MatrixXd Y = read_csv(path);
  require(Y.size() > 0, Errc::InvalidArgument, "signal file is empty: " + path.string());
  return Ensemble{std::move(Y), false};
}

SynthConfig parse_synth_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  SynthConfig cfg;
  Fields f(j, "config");
  f.read("N", cfg.N);
  std::string kind = enum_name(cfg.graph_kind, kGraphKinds);
  f.read("graph_kind", kind);
  cfg.graph_kind = enum_from(kind, kGraphKinds, "graph_kind");
  f.read("graph_file", cfg.graph_file);
  f.read("u_min", cfg.u_min);
  f.read("u_max", cfg.u_max);
  f.read("delta", cfg.delta);
  f.read("L", cfg.L);
  f.read("K", cfg.K);
  f.read("T", cfg.T);
  f.read("sigma", cfg.sigma);
  f.read("curvature_mask", cfg.curvature_mask);
  f.read("seed", cfg.seed);
  if (const json* s = f.sub("scp")) read_scp(*s, cfg.scp);
  if (const json* a = f.sub("altmin")) read_altmin(*a, cfg.altmin);
  f.finish();
  cfg.validate();
  return cfg;
}

std::string synth_config_json(const SynthConfig& cfg) {
  const json j = {{"N", cfg.N},
                  {"graph_kind", enum_name(cfg.graph_kind, kGraphKinds)},
                  {"graph_file", cfg.graph_file},
                  {"u_min", cfg.u_min},
                  {"u_max", cfg.u_max},
                  {"delta", cfg.delta},
                  {"L", cfg.L},
                  {"K", cfg.K},
                  {"T", cfg.T},
                  {"sigma", cfg.sigma},
                  {"curvature_mask", cfg.curvature_mask},
                  {"seed", cfg.seed},
                  {"scp", scp_to_json(cfg.scp)},
                  {"altmin", altmin_to_json(cfg.altmin)}};
  return j.dump(2);
}

ScpConfig<double> parse_scp_config(const std::string& json_text) {
  ScpConfig<double> cfg;
  read_scp(parse_json(json_text), cfg);
  return cfg;
}

std::string scp_config_json(const ScpConfig<double>& cfg) { return scp_to_json(cfg).dump(2); }

AltMinConfig parse_altmin_config(const std::string& json_text) {
  AltMinConfig cfg;
  read_altmin(parse_json(json_text), cfg);
  return cfg;
}

std::string tap_estimate_json(const TapEstimate<double>& est) {
  const json j = {{"taps", matrix_to_json(est.taps.P)},
                  {"flavor", enum_name(est.taps.flavor, kFlavors)},
                  {"residual_nse", est.residual_nse},
                  {"iterations", est.iterations},
                  {"objective_trace", est.objective_trace},
                  {"warnings", est.warnings}};
  return j.dump(2);
}

TapEstimate<double> parse_tap_estimate(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("taps")) parse_fail("tap estimate must contain 'taps'");
  TapEstimate<double> est;
  est.taps.P = matrix_from_json(j.at("taps"), "taps");
  est.taps.flavor = FilterType::TypeI;
  if (j.contains("flavor")) est.taps.flavor = enum_from(j.at("flavor").get<std::string>(), kFlavors, "flavor");
  if (j.contains("residual_nse")) est.residual_nse = number(j.at("residual_nse"), "residual_nse");
  if (j.contains("iterations")) est.iterations = j.at("iterations").get<Index>();
  if (j.contains("objective_trace")) {
    const VectorXd trace = vector_from_json(j.at("objective_trace"), "objective_trace");
    est.objective_trace.assign(trace.data(), trace.data() + trace.size());
  }
  return est;
}

std::string scp_result_json(const ScpResult<double>& result, const ScpConfig<double>& cfg, Index K) {
  json echo = scp_to_json(cfg);
  echo["K"] = K;
  const json j = {{"lambda_f", vector_to_json(result.lambda_f)},
                  {"objective", result.objective},
                  {"trace", result.trace},
                  {"start_index", result.start_index},
                  {"config_echo", echo}};
  return j.dump(2);
}

VectorXd parse_lambda_f(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object() || !j.contains("lambda_f")) parse_fail("document has no 'lambda_f'");
  return vector_from_json(j.at("lambda_f"), "lambda_f");
}

std::string pipeline_report_json(const PipelineReport& report, const std::string& config_echo_json) {
  const json j = {{"nse_taps", optional_number(report.nse_taps)},
                  {"pne", optional_number(report.pne)},
                  {"corollary_error", report.corollary_error},
                  {"objective", report.objective},
                  {"residual_nse", report.residual_nse},
                  {"stationarity", report.stationarity},
                  {"lambda_f", vector_to_json(report.lambda_f)},
                  {"taps", matrix_to_json(report.taps)},
                  {"start_index", report.start_index},
                  {"scp_trace", report.scp_trace},
                  {"timings", report.timings},
                  {"warnings", report.warnings},
                  {"config_echo", config_echo_json.empty() ? json(nullptr) : parse_json(config_echo_json)}};
  return j.dump(2);
}

}  // namespace dualgraph::io
