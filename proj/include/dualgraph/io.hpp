#pragma once

// File formats: CSV matrices, edge lists, and the JSON documents exchanged by
// the command-line tool. All writers are atomic (temp file, then rename).

#include "dualgraph/workbench.hpp"

#include <filesystem>
#include <string>

namespace dualgraph::io {

namespace fs = std::filesystem;

/// Writes `contents` to a sibling temp file and renames it over `path`.
void atomic_write(const fs::path& path, const std::string& contents);
std::string read_text(const fs::path& path);

/// Comma-separated, one matrix row per line. A first line that does not parse
/// as numbers is treated as a header and skipped.
MatrixXd read_csv(const fs::path& path);
MatrixXd parse_csv(const std::string& text);
std::string format_csv(const MatrixXd& M, const std::vector<std::string>& header = {});
void write_csv(const fs::path& path, const MatrixXd& M, const std::vector<std::string>& header = {});

/// Lines of `u v weight` (0-indexed, whitespace separated, '#' comments).
/// Each edge is mirrored; N is one more than the largest index unless given.
MatrixXd parse_edge_list(const std::string& text, Index N = -1);
std::string format_edge_list(const std::vector<Edge>& edges);

/// `.edges` -> edge list, `.csv` -> dense matrix; the matrix is used as the
/// shift operator as is.
Shift load_graph(const fs::path& path);

/// Signals: rows are nodes, columns are samples.
Ensemble load_signals(const fs::path& path);

SynthConfig parse_synth_config(const std::string& json_text);
std::string synth_config_json(const SynthConfig& cfg);
ScpConfig<double> parse_scp_config(const std::string& json_text);
std::string scp_config_json(const ScpConfig<double>& cfg);
AltMinConfig parse_altmin_config(const std::string& json_text);

std::string tap_estimate_json(const TapEstimate<double>& est);
TapEstimate<double> parse_tap_estimate(const std::string& json_text);

std::string scp_result_json(const ScpResult<double>& result, const ScpConfig<double>& cfg, Index K);
/// lambda_f from an ScpResult or PipelineReport document.
VectorXd parse_lambda_f(const std::string& json_text);

std::string pipeline_report_json(const PipelineReport& report, const std::string& config_echo_json);

}  // namespace dualgraph::io
