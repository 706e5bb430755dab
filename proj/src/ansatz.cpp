#include "dbqa/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dbqa {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Lowered gate with gradient bookkeeping: angle = dsign * theta(param) for
// parametrized rotations.
struct LGate {
  Gate g;
  int param = -1;
  double dsign = 1.0;
};

void push_hadamard(std::vector<LGate>& out, int q) {
  // H = X * RY(pi/2) as a matrix product, i.e. RY first
  out.push_back({Gate::ry(q, kHalfPi), -1, 1.0});
  out.push_back({Gate::x(q), -1, 1.0});
}

// RBS(q1, q2, theta) -> H H CZ RY(-theta)@q1 RY(+theta)@q2 CZ H H
void push_lowered_rbs(std::vector<LGate>& out, const ParamGate& pg) {
  push_hadamard(out, pg.q1);
  push_hadamard(out, pg.q2);
  out.push_back({Gate::cz(pg.q1, pg.q2), -1, 1.0});
  out.push_back({Gate::ry(pg.q1, 0.0), pg.param, -1.0});
  out.push_back({Gate::ry(pg.q2, 0.0), pg.param, 1.0});
  out.push_back({Gate::cz(pg.q1, pg.q2), -1, 1.0});
  push_hadamard(out, pg.q1);
  push_hadamard(out, pg.q2);
}

std::vector<LGate> lowered_gates(const AnsatzCircuit& c) {
  std::vector<LGate> out;
  for (const ParamGate& pg : c.gates) {
    switch (pg.kind) {
      case GateKind::RBS:
        push_lowered_rbs(out, pg);
        break;
      case GateKind::RY:
        out.push_back({Gate::ry(pg.q1, 0.0), pg.param, pg.sign});
        break;
      case GateKind::RZ:
        out.push_back({Gate::rz(pg.q1, 0.0), pg.param, pg.sign});
        break;
      case GateKind::CZ:
        out.push_back({Gate::cz(pg.q1, pg.q2), -1, 1.0});
        break;
      default:
        throw std::logic_error("lowered_gates: unexpected gate kind");
    }
  }
  return out;
}

Gate instantiate(const LGate& lg, const VecR& thetas, double extra = 0.0) {
  Gate g = lg.g;
  if (lg.param >= 0) g.angle = lg.dsign * thetas(lg.param) + extra;
  return g;
}

Statevector initial_state(const AnsatzCircuit& c) {
  std::size_t index = 0;
  for (int q : c.initial_ones) index |= (std::size_t{1} << q);
  return Statevector::computational_basis(c.L, index);
}

double run_energy(const AnsatzCircuit& c, const std::vector<LGate>& gates,
                  const PauliSum& h, int shifted_gate, double delta) {
  Statevector s = initial_state(c);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const double extra = (static_cast<int>(i) == shifted_gate) ? delta : 0.0;
    apply_gate_in_place(s.amplitudes, c.L, instantiate(gates[i], c.thetas, extra));
  }
  return pauli_expectation(h, s);
}

// <lam| sigma_q |psi> for sigma in {Y, Z}, without temporaries.
cxd overlap_y(const VecC& lam, const VecC& psi, int q, int L) {
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t dim = dim_of(L);
  cxd acc = 0.0;
  for (std::size_t i0 = 0; i0 < dim; ++i0) {
    if (i0 & bit) continue;
    const std::size_t i1 = i0 | bit;
    acc += std::conj(lam(static_cast<Eigen::Index>(i0))) *
               (cxd(0.0, -1.0) * psi(static_cast<Eigen::Index>(i1))) +
           std::conj(lam(static_cast<Eigen::Index>(i1))) *
               (cxd(0.0, 1.0) * psi(static_cast<Eigen::Index>(i0)));
  }
  return acc;
}

cxd overlap_z(const VecC& lam, const VecC& psi, int q, int L) {
  const std::size_t bit = std::size_t{1} << q;
  const std::size_t dim = dim_of(L);
  cxd acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double sign = (i & bit) ? -1.0 : 1.0;
    acc += std::conj(lam(static_cast<Eigen::Index>(i))) * sign *
           psi(static_cast<Eigen::Index>(i));
  }
  return acc;
}

Gate inverse_gate(const Gate& g) {
  Gate inv = g;
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::RBS:
      inv.angle = -g.angle;
      break;
    default:
      break;  // CZ, CNOT, X are involutions
  }
  return inv;
}

}  // namespace

int AnsatzCircuit::n_cz() const {
  int count = 0;
  for (const ParamGate& pg : gates) {
    if (pg.kind == GateKind::RBS)
      count += 2;
    else if (pg.kind == GateKind::CZ || pg.kind == GateKind::CNOT)
      count += 1;
  }
  return count;
}

AnsatzCircuit build_hwp(int L, int layers) {
  if (L < 4 || L % 2 != 0)
    throw std::invalid_argument("build_hwp: L must be even and >= 4");
  check_capacity(L);
  AnsatzCircuit c;
  c.kind = AnsatzKind::HWP;
  c.L = L;
  c.layers = layers;
  c.shift_multiplier = 4;
  c.thetas = VecR::Zero(2 * L * layers);
  int param = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (int i = 0; i < L; ++i)
      c.gates.push_back({GateKind::RBS, i, (i + 1) % L, param++, 1.0});
    for (int i = 0; i < L; ++i)
      c.gates.push_back({GateKind::RBS, i, (i + 2) % L, param++, 1.0});
  }
  for (int q = 0; q < L / 2; ++q) c.initial_ones.push_back(q);
  return c;
}

AnsatzCircuit build_hea(int L, int layers) {
  if (L < 2) throw std::invalid_argument("build_hea: L must be >= 2");
  check_capacity(L);
  AnsatzCircuit c;
  c.kind = AnsatzKind::HEA;
  c.L = L;
  c.layers = layers;
  c.shift_multiplier = 2;
  c.thetas = VecR::Zero(4 * L * layers + L);
  int param = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (int sub = 0; sub < 2; ++sub) {
      for (int q = 0; q < L; ++q)
        c.gates.push_back({GateKind::RY, q, -1, param++, 1.0});
      for (int q = 0; q < L; ++q)
        c.gates.push_back({GateKind::RZ, q, -1, param++, 1.0});
      // half-ring of CZ: even pairs, then odd pairs with wraparound
      for (int q = sub; q < L; q += 2)
        c.gates.push_back({GateKind::CZ, q, (q + 1) % L, -1, 1.0});
    }
  }
  for (int q = 0; q < L; ++q)
    c.gates.push_back({GateKind::RY, q, -1, param++, 1.0});
  return c;
}

CircuitIR to_circuit(const AnsatzCircuit& c, bool lower_rbs) {
  CircuitIR ir(c.L);
  if (lower_rbs) {
    for (const LGate& lg : lowered_gates(c)) ir.push(instantiate(lg, c.thetas));
    return ir;
  }
  for (const ParamGate& pg : c.gates) {
    Gate g{pg.kind, pg.q1, pg.q2, 0.0};
    if (pg.param >= 0) g.angle = pg.sign * c.thetas(pg.param);
    ir.push(g);
  }
  return ir;
}

DenseOperator circuit_unitary(const AnsatzCircuit& c) {
  return DenseOperator(c.L, dbqa::circuit_unitary(to_circuit(c)), false);
}

Statevector prepare_state(const AnsatzCircuit& c) {
  Statevector s = initial_state(c);
  const CircuitIR ir = to_circuit(c);
  for (const Gate& g : ir.gates) apply_gate_in_place(s.amplitudes, c.L, g);
  return s;
}

double energy(const AnsatzCircuit& c, const PauliSum& h) {
  return pauli_expectation(h, prepare_state(c));
}

VecR parameter_shift_gradient(const AnsatzCircuit& c, const PauliSum& h) {
  const std::vector<LGate> gates = lowered_gates(c);
  VecR grad = VecR::Zero(c.n_params());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].param < 0) continue;
    const double plus = run_energy(c, gates, h, static_cast<int>(i), kHalfPi);
    const double minus = run_energy(c, gates, h, static_cast<int>(i), -kHalfPi);
    grad(gates[i].param) += gates[i].dsign * 0.5 * (plus - minus);
  }
  return grad;
}

VecR adjoint_gradient(const AnsatzCircuit& c, const PauliSum& h) {
  const std::vector<LGate> gates = lowered_gates(c);
  Statevector s = initial_state(c);
  for (const LGate& lg : gates)
    apply_gate_in_place(s.amplitudes, c.L, instantiate(lg, c.thetas));
  VecC lam = VecC::Zero(s.amplitudes.size());
  pauli_apply(h, s.amplitudes, lam);

  VecR grad = VecR::Zero(c.n_params());
  VecC psi = s.amplitudes;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->param >= 0) {
      // d/dangle exp(-i angle sigma/2) contributes Im <lam| sigma |psi>
      const cxd ov = (it->g.kind == GateKind::RY)
                         ? overlap_y(lam, psi, it->g.q1, c.L)
                         : overlap_z(lam, psi, it->g.q1, c.L);
      grad(it->param) += it->dsign * ov.imag();
    }
    const Gate inv = inverse_gate(instantiate(*it, c.thetas));
    apply_gate_in_place(psi, c.L, inv);
    apply_gate_in_place(lam, c.L, inv);
  }
  return grad;
}

TrainLog adam_train(AnsatzCircuit& c, const PauliSum& h, int epochs, double lr,
                    std::uint64_t seed) {
  if (epochs < 0) throw std::invalid_argument("adam_train: epochs must be >= 0");
  const int p = c.n_params();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-std::numbers::pi,
                                              std::numbers::pi);
  for (int i = 0; i < p; ++i) c.thetas(i) = unif(rng);

  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  VecR m = VecR::Zero(p);
  VecR v = VecR::Zero(p);
  TrainLog log;
  log.epochs = epochs;
  log.seed = seed;
  log.n_cz = c.n_cz();
  log.energies.reserve(static_cast<std::size_t>(epochs));
  for (int e = 1; e <= epochs; ++e) {
    const double en = energy(c, h);
    if (!std::isfinite(en))
      throw std::runtime_error("adam_train: non-finite energy at epoch " +
                               std::to_string(e));
    log.energies.push_back(en);
    if (lr == 0.0) continue;
    const VecR g = adjoint_gradient(c, h);
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g).eval();
    const double bc1 = 1.0 - std::pow(beta1, e);
    const double bc2 = 1.0 - std::pow(beta2, e);
    for (int i = 0; i < p; ++i)
      c.thetas(i) -= lr * (m(i) / bc1) / (std::sqrt(v(i) / bc2) + eps);
  }
  log.thetas = c.thetas;
  return log;
}

}  // namespace dbqa
