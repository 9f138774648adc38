#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edgelab/model.hpp"
#include "json.hpp"

namespace edgelab::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "EDGELAB_OUT_DIR";

struct ModelConfig {
  double t = 0.25;
  std::vector<double> x, y;
  int p = 3;
  int N = 2;
  // "generic" (fixed distinct rates), "perturbed" (edge-scaled from t, x, y)
  // or "explicit" (pi and pihat below, each of length p).
  std::string rates = "generic";
  std::vector<double> pi, pihat;
};

struct SamplingConfig {
  std::size_t n_samples = 10000;
  std::uint64_t seed = 20240601;
  int seeds = 10;
  std::vector<int> p_sweep;
  double tolerance = 0.05;
  int bootstrap = 200;
};

struct QuadratureConfig {
  int nodes_per_block = 40;
  double truncation = 14.0;
  int wedge_panels = 24;
  int circle_nodes = 256;
};

struct ThresholdConfig {
  std::vector<double> xi_grid;
  std::vector<double> times{0.0};
  std::vector<double> xis{0.0};
};

// Kernel tabulation / gap targets. kind: "airy" (extended Airy with the
// model's x, y), "scaled" (edge-scaled finite kernel at model.p) or "finite"
// (raw finite kernel of the model rates; times are levels).
struct KernelConfig {
  std::string kind = "airy";
  double t1 = 0.0, t2 = 0.0;
  std::vector<double> x{0.0}, y{0.0};
};

struct OutputConfig {
  std::string path;
  std::string format = "json";
};

struct ExperimentConfig {
  std::string command;
  ModelConfig model;
  SamplingConfig sampling;
  QuadratureConfig quadrature;
  ThresholdConfig thresholds;
  KernelConfig kernel;
  OutputConfig output;
  json resolved;  // the merged document the fields were read from
};

// Per-command defaults as a JSON document.
json default_config(const std::string& command);

// Overrides a dotted path ("model.t") with a value parsed as JSON when
// possible, otherwise as a string. Unknown paths raise ConfigError.
void apply_override(json& doc, const std::string& dotted, const std::string& value);

// Recursive merge of `patch` into `doc`; unknown keys raise ConfigError.
void merge_config(json& doc, const json& patch);

// Typed view plus validation (0 < t < 1, x_i > y_j, N <= p, sizes).
ExperimentConfig parse_config(const std::string& command, const json& doc);

// Rates for the sampling commands according to model.rates.
ModelParams resolve_params(const ModelConfig& model);
ScalingSpec resolve_spec(const ModelConfig& model);

struct Report {
  json body;
  bool pass = true;
  bool diagnostic = false;
  // Extra CSV tables (suffix -> content) written next to the main output.
  std::vector<std::pair<std::string, std::string>> tables;
  // Main CSV content for the tabulation commands.
  std::string csv;
};

Report run_simulate_lpp(const ExperimentConfig& config);
Report run_simulate_wishart(const ExperimentConfig& config);
Report run_check_thm1(const ExperimentConfig& config);
Report run_check_thm2(const ExperimentConfig& config);
Report run_check_thm4(const ExperimentConfig& config);
Report run_compare_joint(const ExperimentConfig& config);
Report run_kernel_eval(const ExperimentConfig& config);
Report run_gap_prob(const ExperimentConfig& config);
Report run_tw_table(const ExperimentConfig& config);

Report run_command(const ExperimentConfig& config);

// Output location: --out / output.path, defaulting to <command>.<ext>; the
// directory is replaced by $EDGELAB_OUT_DIR when set.
std::filesystem::path output_path(const ExperimentConfig& config);

// Writes the report (JSON or CSV plus side tables) and returns the main path.
std::filesystem::path write_report(const ExperimentConfig& config, const Report& report);

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;

int main_entry(int argc, char** argv);

}  // namespace edgelab::cli
