#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbqa/ansatz.hpp"
#include "dbqa/cost.hpp"
#include "dbqa/dbi.hpp"
#include "dbqa/gci.hpp"
#include "dbqa/metrics.hpp"

namespace dbqa {

struct RunConfig {
  // model
  std::string model = "xxz";  // xxz | j1j2
  int L = 10;
  double delta = 0.5;       // xxz
  double j1 = 1.0, j2 = 0.2;  // j1j2
  // ansatz / training
  std::string ansatz = "hwp";  // hwp | hea
  int layers = 3;
  int epochs = 500;
  double lr = 0.05;
  std::vector<std::uint64_t> seeds;
  // dbqa
  std::string mode = "gci";  // dbi | gci
  GciVariant variant = GciVariant::RHOPF;
  int steps = 1;
  OptimizerEngine optimizer = OptimizerEngine::Powell;
  int budget = 300;
  CostKind cost = CostKind::Energy;
  int trotter_order = 2;
  int trotter_M = 1;
  double s_max = 0.05;
  double r_max = 0.5;
  // outputs
  std::string out_dir = "out";
  bool emit_qasm_file = false;
};

RunConfig validate_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

struct TrialStage {
  int stage = 0;  // 0 = warm start, 1..k = DBQA steps
  double energy = 0.0;
  double delta_e = 0.0;
  double fidelity = 0.0;
  double fidelity_bound = 0.0;
  std::int64_t n_fval = 0;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<TrialStage> stages;
};

struct StageStat {
  int stage = 0;
  double de_median = 0.0, de_mad = 0.0;
  double f_median = 0.0, f_mad = 0.0;
  double fb_median = 0.0, fb_mad = 0.0;
  double depth = 0.0;            // CZ per qubit (GCI mode; 0 for DBI)
  std::int64_t cumulative = 0;   // total two-qubit-gate budget to this stage
};

struct RunSummary {
  RunConfig config;
  SpectrumFixture fixture;
  std::vector<TrialResult> trials;
  std::vector<StageStat> stages;
};

PauliSum build_model(const RunConfig& cfg);

// Full pipeline: train VQE per seed, run k DBQA steps, aggregate.
// Writes trials.jsonl and summary.csv under cfg.out_dir (plus best.qasm
// when requested); pass write_outputs=false to skip file output.
RunSummary run_pipeline(const RunConfig& cfg, bool write_outputs = true);

std::string summary_csv(const RunSummary& summary);
std::string trials_jsonl(const RunSummary& summary);
std::string emit_tables(const std::vector<RunSummary>& summaries);
std::string emit_tables_from_csv(const std::vector<std::string>& csv_texts);

}  // namespace dbqa
