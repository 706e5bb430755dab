#pragma once

#include "dbqa/qcore.hpp"

namespace dbqa {

enum class GateKind { CZ, CNOT, RX, RY, RZ, RBS, X };

// Primitive gate. Two-qubit gates use q1 and q2; CNOT control is q1,
// target q2. RBS acts on the {|01>,|10>} subspace of (q1, q2) where the
// first slot of the ket is q2 and the second is q1.
struct Gate {
  GateKind kind;
  int q1 = 0;
  int q2 = -1;
  double angle = 0.0;

  static Gate cz(int a, int b) { return {GateKind::CZ, a, b, 0.0}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0}; }
  static Gate rx(int q, double t) { return {GateKind::RX, q, -1, t}; }
  static Gate ry(int q, double t) { return {GateKind::RY, q, -1, t}; }
  static Gate rz(int q, double t) { return {GateKind::RZ, q, -1, t}; }
  static Gate rbs(int a, int b, double t) { return {GateKind::RBS, a, b, t}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0.0}; }

  bool two_qubit() const {
    return kind == GateKind::CZ || kind == GateKind::CNOT || kind == GateKind::RBS;
  }
};

struct CircuitIR {
  int n_qubits = 0;
  std::vector<Gate> gates;

  explicit CircuitIR(int nq = 0) : n_qubits(nq) {}

  void push(const Gate& g);
  void append(const CircuitIR& other);

  int count_two_qubit() const;
  int count(GateKind kind) const;
};

void apply_gate_in_place(VecC& amps, int n_qubits, const Gate& gate);
Statevector apply_gate(const Statevector& s, const Gate& gate);
Statevector apply_circuit(const CircuitIR& c, const Statevector& s);
MatC circuit_unitary(const CircuitIR& c);

}  // namespace dbqa
