#include "dbqa/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dbqa/compile.hpp"

namespace dbqa {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument(std::string("config: unknown key '") +
                                  it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (obj.contains(key)) return obj.at(key).get<T>();
  return fallback;
}

GciVariant parse_variant(const std::string& s) {
  if (s == "gc") return GciVariant::GC;
  if (s == "rgc") return GciVariant::RGC;
  if (s == "hopf") return GciVariant::HOPF;
  if (s == "rhopf") return GciVariant::RHOPF;
  throw std::invalid_argument("config: dbqa.variant must be one of gc/rgc/hopf/rhopf");
}

CostKind parse_cost(const std::string& s) {
  if (s == "energy") return CostKind::Energy;
  if (s == "offdiag_hs") return CostKind::OffdiagHs;
  if (s == "fluctuation") return CostKind::Fluctuation;
  throw std::invalid_argument(
      "config: dbqa.cost must be one of energy/offdiag_hs/fluctuation");
}

int worker_count() {
  if (const char* env = std::getenv("DBQA_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Warm-start unitary including the initial bitstring preparation:
// Q = U_theta * X_prep.
MatC warm_unitary(const AnsatzCircuit& c) {
  const MatC u = dbqa::circuit_unitary(to_circuit(c));
  std::size_t mask = 0;
  for (int q : c.initial_ones) mask |= (std::size_t{1} << q);
  if (mask == 0) return u;
  MatC q(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.cols(); ++j)
    q.col(j) = u.col(static_cast<Eigen::Index>(static_cast<std::size_t>(j) ^ mask));
  return q;
}

CircuitIR adjoint_circuit(const CircuitIR& c) {
  CircuitIR out(c.n_qubits);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::RX || g.kind == GateKind::RY ||
        g.kind == GateKind::RZ || g.kind == GateKind::RBS)
      g.angle = -g.angle;
    out.push(g);
  }
  return out;
}

struct TrialInternal {
  TrialResult result;
  std::vector<GciStepParams> plan_steps;  // gci mode
  VecR thetas;
};

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  json j = v;
  return j.dump();
}

}  // namespace

PauliSum build_model(const RunConfig& cfg) {
  if (cfg.model == "xxz") return build_xxz({cfg.L, cfg.delta, true});
  if (cfg.model == "j1j2") return build_j1j2({cfg.L, cfg.j1, cfg.j2});
  throw std::invalid_argument("config: model.name must be xxz or j1j2");
}

RunConfig validate_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  reject_unknown(root, "top level",
                 {"model", "ansatz", "train", "seeds", "dbqa", "output"});
  RunConfig cfg;

  if (!root.contains("model"))
    throw std::invalid_argument("config: missing 'model'");
  const json& model = root.at("model");
  reject_unknown(model, "model", {"name", "L", "delta", "j1", "j2"});
  cfg.model = model.at("name").get<std::string>();
  if (cfg.model != "xxz" && cfg.model != "j1j2")
    throw std::invalid_argument("config: model.name must be xxz or j1j2");
  cfg.L = model.at("L").get<int>();
  if (cfg.L < 2 || cfg.L > kMaxQubits)
    throw std::invalid_argument("config: model.L out of range");
  if (cfg.model == "xxz") {
    if (!model.contains("delta"))
      throw std::invalid_argument("config: model.delta is required for xxz");
    cfg.delta = model.at("delta").get<double>();
  } else {
    cfg.j1 = get_or(model, "j1", 1.0);
    cfg.j2 = get_or(model, "j2", 0.2);
  }

  if (!root.contains("ansatz"))
    throw std::invalid_argument("config: missing 'ansatz'");
  const json& ansatz = root.at("ansatz");
  reject_unknown(ansatz, "ansatz", {"kind", "layers"});
  cfg.ansatz = ansatz.at("kind").get<std::string>();
  if (cfg.ansatz != "hwp" && cfg.ansatz != "hea")
    throw std::invalid_argument("config: ansatz.kind must be hwp or hea");
  cfg.layers = get_or(ansatz, "layers", 3);
  if (cfg.layers < 1) throw std::invalid_argument("config: ansatz.layers must be >= 1");

  if (root.contains("train")) {
    const json& train = root.at("train");
    reject_unknown(train, "train", {"epochs", "lr"});
    cfg.epochs = get_or(train, "epochs", 500);
    cfg.lr = get_or(train, "lr", 0.05);
    if (cfg.epochs < 0) throw std::invalid_argument("config: train.epochs must be >= 0");
  }

  if (root.contains("seeds")) {
    const json& seeds = root.at("seeds");
    if (seeds.is_number_integer()) {
      const int n = seeds.get<int>();
      if (n < 1) throw std::invalid_argument("config: seeds must be >= 1");
      for (int i = 0; i < n; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
    } else if (seeds.is_array()) {
      for (const auto& s : seeds) cfg.seeds.push_back(s.get<std::uint64_t>());
      if (cfg.seeds.empty())
        throw std::invalid_argument("config: seeds list must be non-empty");
    } else {
      throw std::invalid_argument("config: seeds must be a count or a list");
    }
  } else {
    for (int i = 0; i < 10; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }

  if (root.contains("dbqa")) {
    const json& dbqa_j = root.at("dbqa");
    reject_unknown(dbqa_j, "dbqa",
                   {"mode", "variant", "steps", "optimizer", "budget", "cost",
                    "trotter", "s_max", "r_max"});
    cfg.mode = get_or<std::string>(dbqa_j, "mode", "gci");
    if (cfg.mode != "gci" && cfg.mode != "dbi")
      throw std::invalid_argument("config: dbqa.mode must be gci or dbi");
    cfg.variant = parse_variant(get_or<std::string>(dbqa_j, "variant", "rhopf"));
    cfg.steps = get_or(dbqa_j, "steps", 1);
    if (cfg.steps < 0 || cfg.steps > 3)
      throw std::invalid_argument("config: dbqa.steps must be in [0, 3]");
    const std::string opt = get_or<std::string>(dbqa_j, "optimizer", "powell");
    if (opt == "powell")
      cfg.optimizer = OptimizerEngine::Powell;
    else if (opt == "cmaes")
      cfg.optimizer = OptimizerEngine::CmaEs;
    else
      throw std::invalid_argument("config: dbqa.optimizer must be powell or cmaes");
    cfg.budget = get_or(dbqa_j, "budget", 300);
    if (cfg.budget < 1) throw std::invalid_argument("config: dbqa.budget must be >= 1");
    cfg.cost = parse_cost(get_or<std::string>(dbqa_j, "cost", "energy"));
    if (dbqa_j.contains("trotter")) {
      const json& tr = dbqa_j.at("trotter");
      reject_unknown(tr, "dbqa.trotter", {"order", "M"});
      cfg.trotter_order = get_or(tr, "order", 2);
      cfg.trotter_M = get_or(tr, "M", 1);
    }
    cfg.s_max = get_or(dbqa_j, "s_max", 0.05);
    cfg.r_max = get_or(dbqa_j, "r_max", 0.5);
  }

  cfg.out_dir = get_or<std::string>(root, "output", "out");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_config(ss.str());
}

RunSummary run_pipeline(const RunConfig& cfg, bool write_outputs) {
  const PauliSum h = build_model(cfg);
  const DenseOperator h_dense = pauli_to_dense(h);
  const HermitianEigen h_eigs = hermitian_eigs(h_dense.matrix);
  const SpectrumFixture fixture = fixture_from_eigs(cfg.L, h_eigs);

  const int n_trials = static_cast<int>(cfg.seeds.size());
  std::vector<TrialInternal> trials(static_cast<std::size_t>(n_trials));

  auto run_trial = [&](int idx) {
    const std::uint64_t seed = cfg.seeds[static_cast<std::size_t>(idx)];
    TrialInternal tr;
    tr.result.seed = seed;

    AnsatzCircuit circ = cfg.ansatz == "hwp" ? build_hwp(cfg.L, cfg.layers)
                                             : build_hea(cfg.L, cfg.layers);
    adam_train(circ, h, cfg.epochs, cfg.lr, seed);
    tr.thetas = circ.thetas;

    const MatC q = warm_unitary(circ);
    DenseOperator a(cfg.L, (q.adjoint() * h_dense.matrix * q).eval(), true);

    auto record = [&](int stage, double energy, const VecC& psi,
                      std::int64_t n_fval) {
      TrialStage st;
      st.stage = stage;
      st.energy = energy;
      st.delta_e = rel_diff(energy, fixture.E0);
      st.fidelity = std::norm(fixture.ground.amplitudes.dot(psi));
      st.fidelity_bound = fixture.gap() > 1e-6
                              ? fidelity_bound(energy, fixture)
                              : std::numeric_limits<double>::quiet_NaN();
      st.n_fval = n_fval;
      tr.result.stages.push_back(st);
    };

    MatC u_state = q;  // state-preparation unitary; |psi> = u_state |0>
    record(0, a.matrix(0, 0).real(), u_state.col(0), 0);

    if (cfg.mode == "gci") {
      for (int k = 0; k < cfg.steps; ++k) {
        OptimizeGciResult opt =
            optimize_gci_step(a, cfg.variant, cfg.cost, cfg.budget,
                              cfg.optimizer, cfg.r_max, seed * 97 + k);
        const MatC v =
            gci_rotation(cfg.variant, a.matrix, ising_diagonal_entries(opt.d),
                         opt.r);
        a = DenseOperator(cfg.L, (v.adjoint() * a.matrix * v).eval(), true);
        u_state = (u_state * v).eval();
        tr.plan_steps.push_back({opt.r, opt.d, cfg.variant});
        record(k + 1, a.matrix(0, 0).real(), u_state.col(0), opt.n_fval);
      }
    } else {
      DbiState state(a);
      for (int k = 0; k < cfg.steps; ++k) {
        OptimizeDResult opt = optimize_d(state, cfg.cost, cfg.budget,
                                         cfg.optimizer, cfg.s_max, seed * 97 + k);
        DbiStepDense step = dbi_step_dense(state, opt.d, opt.s, cfg.cost);
        state = std::move(step.state);
        u_state = (u_state * step.u.adjoint()).eval();
        record(k + 1, state.current.matrix(0, 0).real(), u_state.col(0),
               opt.n_fval);
      }
    }
    trials[static_cast<std::size_t>(idx)] = std::move(tr);
  };

  const int workers = std::min(worker_count(), n_trials);
  if (workers <= 1) {
    for (int i = 0; i < n_trials; ++i) run_trial(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_trials; i = next.fetch_add(1))
          run_trial(i);
      });
    for (auto& t : pool) t.join();
  }

  RunSummary summary;
  summary.config = cfg;
  summary.fixture = fixture;
  for (auto& tr : trials) summary.trials.push_back(tr.result);

  // ledger inputs
  const AnsatzCircuit proto = cfg.ansatz == "hwp" ? build_hwp(cfg.L, cfg.layers)
                                                  : build_hea(cfg.L, cfg.layers);
  const std::int64_t n_cz_vqe = proto.n_cz();
  const std::int64_t vqe_total =
      vqe_cost(proto.shift_multiplier, proto.n_params(), cfg.epochs, n_cz_vqe);
  double d_t = 0.0;
  if (cfg.mode == "gci") {
    const CircuitIR trot = trotterize(
        h, {cfg.trotter_order, cfg.trotter_M, 1.0});
    d_t = static_cast<double>(trot.count_two_qubit()) / cfg.L;
  }
  const double d_q = static_cast<double>(n_cz_vqe) / cfg.L;

  std::int64_t cumulative = vqe_total;
  for (int stage = 0; stage <= cfg.steps; ++stage) {
    StageStat st;
    st.stage = stage;
    std::vector<double> de, f, fb;
    std::vector<double> fvals;
    for (const auto& tr : summary.trials) {
      const TrialStage& ts = tr.stages[static_cast<std::size_t>(stage)];
      de.push_back(ts.delta_e);
      f.push_back(ts.fidelity);
      if (std::isfinite(ts.fidelity_bound)) fb.push_back(ts.fidelity_bound);
      fvals.push_back(static_cast<double>(ts.n_fval));
    }
    const MedianMad m_de = median_mad(de);
    const MedianMad m_f = median_mad(f);
    st.de_median = m_de.median;
    st.de_mad = m_de.mad;
    st.f_median = m_f.median;
    st.f_mad = m_f.mad;
    if (!fb.empty()) {
      const MedianMad m_fb = median_mad(fb);
      st.fb_median = m_fb.median;
      st.fb_mad = m_fb.mad;
    }
    if (cfg.mode == "gci" && cfg.variant == GciVariant::RHOPF) {
      st.depth = gci_depth(d_q, d_t, 2.0, stage);
      const MedianMad m_fv = median_mad(fvals);
      cumulative += static_cast<std::int64_t>(
          std::llround(m_fv.median * st.depth * cfg.L));
    } else if (stage == 0) {
      st.depth = d_q;
    }
    st.cumulative = cumulative;
    summary.stages.push_back(st);
  }

  if (write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
      std::ofstream out(fs::path(cfg.out_dir) / "trials.jsonl");
      out << trials_jsonl(summary);
    }
    {
      std::ofstream out(fs::path(cfg.out_dir) / "summary.csv");
      out << summary_csv(summary);
    }
    if (cfg.emit_qasm_file && cfg.mode == "gci") {
      // best trial = lowest final delta_e
      int best = 0;
      double best_de = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_trials; ++i) {
        const double v = trials[static_cast<std::size_t>(i)]
                             .result.stages.back()
                             .delta_e;
        if (v < best_de) {
          best_de = v;
          best = i;
        }
      }
      const TrialInternal& tr = trials[static_cast<std::size_t>(best)];
      AnsatzCircuit circ = cfg.ansatz == "hwp" ? build_hwp(cfg.L, cfg.layers)
                                               : build_hea(cfg.L, cfg.layers);
      circ.thetas = tr.thetas;
      CircuitIR warm(cfg.L);
      for (int qb : circ.initial_ones) warm.push(Gate::x(qb));
      warm.append(to_circuit(circ, /*lower_rbs=*/true));
      const CircuitIR warm_dag = adjoint_circuit(warm);

      GciPlan plan;
      plan.n_qubits = cfg.L;
      plan.warm = warm_unitary(circ);
      plan.steps = tr.plan_steps;
      const PrimitiveSequence seq = unfold(plan);

      CircuitIR full(cfg.L);
      // circuit time order = reversed matrix-product order
      for (auto it = seq.factors.rbegin(); it != seq.factors.rend(); ++it) {
        switch (it->kind) {
          case PrimKind::H0Evolution:
            full.append(trotterize(h, {cfg.trotter_order, cfg.trotter_M, it->t}));
            break;
          case PrimKind::DiagonalEvolution:
            full.append(compile_diagonal_ising(it->d, it->t));
            break;
          case PrimKind::WarmStart:
            full.append(warm);
            break;
          case PrimKind::WarmStartInverse:
            full.append(warm_dag);
            break;
        }
      }
      std::ofstream out(fs::path(cfg.out_dir) / "best.qasm");
      out << emit_qasm(full);
    }
  }
  return summary;
}

std::string trials_jsonl(const RunSummary& summary) {
  std::ostringstream out;
  for (const auto& tr : summary.trials) {
    for (const auto& st : tr.stages) {
      out << "{\"seed\":" << tr.seed << ",\"stage\":" << st.stage
          << ",\"mode\":\"" << summary.config.mode << "\""
          << ",\"energy\":" << json_number(st.energy)
          << ",\"delta_e\":" << json_number(st.delta_e)
          << ",\"fidelity\":" << json_number(st.fidelity)
          << ",\"fidelity_bound\":" << json_number(st.fidelity_bound)
          << ",\"n_fval\":" << st.n_fval << "}\n";
    }
  }
  return out.str();
}

std::string summary_csv(const RunSummary& summary) {
  std::ostringstream out;
  out << "model,ansatz,layers,mode,stage,de_median,de_mad,f_median,f_mad,"
         "fb_median,fb_mad,depth,cumulative\n";
  for (const auto& st : summary.stages) {
    out << summary.config.model << ',' << summary.config.ansatz << ','
        << summary.config.layers << ',' << summary.config.mode << ','
        << st.stage << ',' << json_number(st.de_median) << ','
        << json_number(st.de_mad) << ',' << json_number(st.f_median) << ','
        << json_number(st.f_mad) << ',' << json_number(st.fb_median) << ','
        << json_number(st.fb_mad) << ',' << json_number(st.depth) << ','
        << st.cumulative << "\n";
  }
  return out.str();
}

std::string emit_tables(const std::vector<RunSummary>& summaries) {
  if (summaries.empty())
    throw std::invalid_argument("emit_tables: need at least one summary");
  std::vector<std::string> csvs;
  for (const auto& s : summaries) csvs.push_back(summary_csv(s));
  return emit_tables_from_csv(csvs);
}

std::string emit_tables_from_csv(const std::vector<std::string>& csv_texts) {
  if (csv_texts.empty())
    throw std::invalid_argument("emit_tables: need at least one summary");
  std::ostringstream out;
  out << "| model | ansatz | layers | mode | stage | dE median | dE MAD | "
         "F bound | depth | cumulative |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const std::string& text : csv_texts) {
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header || line.empty()) {
        header = false;
        continue;
      }
      std::vector<std::string> cols;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cols.push_back(cell);
      if (cols.size() != 13)
        throw std::invalid_argument("emit_tables: malformed summary row: " + line);
      out << "| " << cols[0] << " | " << cols[1] << " | " << cols[2] << " | "
          << cols[3] << " | " << cols[4] << " | " << cols[5] << " | " << cols[6]
          << " | " << cols[9] << " | " << cols[11] << " | " << cols[12]
          << " |\n";
    }
  }
  return out.str();
}

}  // namespace dbqa
