#pragma once

#include <cstdint>

#include "dbqa/circuit.hpp"
#include "dbqa/qcore.hpp"

namespace dbqa {

enum class AnsatzKind { HWP, HEA };

// A parametrized gate: `param < 0` marks a fixed gate. Parametrized
// rotations contribute sign * theta(param) as their angle; RBS gates take
// theta(param) directly.
struct ParamGate {
  GateKind kind;
  int q1 = 0;
  int q2 = -1;
  int param = -1;
  double sign = 1.0;
};

struct AnsatzCircuit {
  AnsatzKind kind = AnsatzKind::HWP;
  int L = 0;
  int layers = 0;
  VecR thetas;
  std::vector<ParamGate> gates;
  std::vector<int> initial_ones;  // qubits prepared in |1>
  int shift_multiplier = 4;       // parameter-shift evaluations per parameter

  int n_params() const { return static_cast<int>(thetas.size()); }
  int n_cz() const;  // two-qubit gate count after RBS lowering
};

AnsatzCircuit build_hwp(int L, int layers);
AnsatzCircuit build_hea(int L, int layers);

// Gate-level instantiation at the circuit's current thetas. With
// lower_rbs, each RBS becomes 2 CZ plus single-qubit rotations.
CircuitIR to_circuit(const AnsatzCircuit& c, bool lower_rbs = false);

DenseOperator circuit_unitary(const AnsatzCircuit& c);
Statevector prepare_state(const AnsatzCircuit& c);

double energy(const AnsatzCircuit& c, const PauliSum& h);

// Gradient via literal parameter shifts (HWP: 4 evaluations/parameter,
// HEA: 2).
VecR parameter_shift_gradient(const AnsatzCircuit& c, const PauliSum& h);

// Reverse-mode gradient over the lowered circuit; machine-equal to the
// shift rule but one forward+backward sweep total.
VecR adjoint_gradient(const AnsatzCircuit& c, const PauliSum& h);

struct TrainLog {
  std::vector<double> energies;  // E(theta_e) at the start of each epoch
  int epochs = 0;
  VecR thetas;
  std::uint64_t seed = 0;
  int n_cz = 0;
};

TrainLog adam_train(AnsatzCircuit& c, const PauliSum& h, int epochs,
                    double lr = 0.05, std::uint64_t seed = 0);

}  // namespace dbqa
