#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csp/report.hpp"

namespace csplab {

/// Output settings shared by every subcommand.
struct OutputConfig {
  std::string out_path;        ///< empty: print to stdout
  std::string format = "csv";  ///< csv | json
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0; ///< filled by the CLI layer
};

/// A finished suite: report rows plus pass/fail. Commands never exit
/// themselves; the CLI maps `ok` to the process exit code.
struct SuiteOutcome {
  bool ok = true;
  std::string failure; ///< machine-readable reason when !ok
  std::vector<std::string> schema;
  std::vector<std::vector<std::string>> rows;
  std::string summary; ///< one-line human summary for stdout
};

struct RankDecayConfig {
  std::size_t depth = 6;
  std::size_t n = 64;
  std::size_t c = 32;
  std::size_t groups = 8;
  std::size_t heads = 4;
  bool with_spectra = true;
};
SuiteOutcome run_rank_decay(const RankDecayConfig& cfg, std::uint64_t seed);

struct OtCheckConfig {
  std::size_t trials = 1000;
  std::size_t gmin = 2;
  std::size_t gmax = 6;
  bool parallel = false;
  std::size_t workers = 4;
};
SuiteOutcome run_ot_check(const OtCheckConfig& cfg, std::uint64_t seed);

struct SinkhornConvergeConfig {
  std::size_t n = 16;
  std::size_t groups = 2;
  std::size_t channels = 3;
  double span = 2.5;
  double final_threshold = 1e-2; ///< frozen from the calibration sweep
};
SuiteOutcome run_sinkhorn_converge(const SinkhornConvergeConfig& cfg, std::uint64_t seed);

struct BenchCommandConfig {
  std::size_t min_n = 256;
  std::size_t max_n = 8192;
  std::size_t c = 8;
  std::size_t reps = 7;
  std::size_t warmup = 3;
  std::string methods = "csp,softmax";
};
SuiteOutcome run_bench(const BenchCommandConfig& cfg, std::uint64_t seed);

struct TrainCommandConfig {
  std::string task = "majority-token";
  std::string model = "csp-former";
  std::size_t layers = 2;
  std::size_t dim = 32;
  std::size_t groups = 8;
  std::size_t heads = 4;
  std::size_t ffn_hidden = 0;
  std::size_t sequence_length = 32;
  std::size_t steps = 500;
  double lr = 0.2;
  std::size_t batch = 64;
  std::string checkpoint; ///< optional path
};
SuiteOutcome run_train(const TrainCommandConfig& cfg, std::uint64_t seed);

struct SpectraConfig {
  std::size_t depth = 6;
  std::size_t n = 64;
  std::size_t c = 32;
  std::size_t groups = 8;
  std::size_t heads = 4;
};
SuiteOutcome run_spectra(const SpectraConfig& cfg, std::uint64_t seed);

SuiteOutcome run_demo(std::uint64_t seed);

/// Serializes the outcome (plus provenance) and writes it atomically, or to
/// stdout when no path is configured.
void emit_outcome(const SuiteOutcome& outcome, const OutputConfig& output);

} // namespace csplab
