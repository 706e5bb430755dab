#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbqa/runner.hpp"

namespace {

int cmd_run(const std::string& config_path, int seeds_override,
            const std::string& out_override, bool emit_qasm,
            const std::string& mode_override) {
  dbqa::RunConfig cfg = dbqa::load_config_file(config_path);
  if (seeds_override > 0) {
    cfg.seeds.clear();
    for (int i = 0; i < seeds_override; ++i)
      cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (!mode_override.empty()) {
    if (mode_override != "dbi" && mode_override != "gci")
      throw std::invalid_argument("--mode must be dbi or gci");
    cfg.mode = mode_override;
  }
  cfg.emit_qasm_file = cfg.emit_qasm_file || emit_qasm;

  const dbqa::RunSummary summary = dbqa::run_pipeline(cfg);
  std::cout << dbqa::summary_csv(summary);
  std::cerr << "E0 = " << summary.fixture.E0 << ", E1 = " << summary.fixture.E1
            << ", trials = " << summary.trials.size() << "\n";
  std::cerr << "wrote " << cfg.out_dir << "/summary.csv and trials.jsonl\n";
  return 0;
}

int cmd_tables(const std::vector<std::string>& files) {
  std::vector<std::string> csvs;
  for (const std::string& path : files) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    csvs.push_back(ss.str());
  }
  std::cout << dbqa::emit_tables_from_csv(csvs);
  return 0;
}

int cmd_depth_budget(std::int64_t n, double pe, double pe_prime) {
  const dbqa::DepthBudget b = dbqa::depth_equivalent(n, pe, pe_prime);
  std::printf("N = %lld, p_e = %g -> success = %.6f\n",
              static_cast<long long>(b.N), b.p_e, b.success);
  std::printf("equivalent N at p_e' = %g: N' = %lld\n", b.p_e_prime,
              static_cast<long long>(b.N_prime));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground-state preparation: warm-started double-bracket pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  int seeds_override = 0;
  std::string out_override;
  std::string mode_override;
  bool emit_qasm = false;
  CLI::App* run = app.add_subcommand("run", "train + double-bracket pipeline");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--seeds", seeds_override, "override: use seeds 0..N-1");
  run->add_option("--out", out_override, "override output directory");
  run->add_option("--mode", mode_override, "override mode (dbi|gci)");
  run->add_flag("--emit-qasm", emit_qasm, "write best trial as OpenQASM 2.0");

  std::vector<std::string> table_files;
  CLI::App* tables = app.add_subcommand("tables", "render summary CSVs as markdown");
  tables->add_option("files", table_files, "summary.csv files")->required();

  std::int64_t budget_n = 920;
  double budget_pe = 2e-3;
  double budget_pep = 5e-4;
  CLI::App* depth = app.add_subcommand("depth-budget",
                                       "error-budget depth equivalence");
  depth->add_option("--N", budget_n, "two-qubit gate count");
  depth->add_option("--pe", budget_pe, "two-qubit error rate");
  depth->add_option("--pe-prime", budget_pep, "target error rate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seeds_override, out_override, emit_qasm,
                     mode_override);
    if (tables->parsed()) return cmd_tables(table_files);
    if (depth->parsed())
      return cmd_depth_budget(budget_n, budget_pe, budget_pep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
