#include "dbqa/circuit.hpp"

namespace dbqa {

void CircuitIR::push(const Gate& g) {
  if (g.q1 < 0 || g.q1 >= n_qubits || (g.two_qubit() && (g.q2 < 0 || g.q2 >= n_qubits)))
    throw std::out_of_range("gate qubit index out of range");
  if (g.two_qubit() && g.q1 == g.q2)
    throw std::invalid_argument("two-qubit gate needs distinct qubits");
  if (!std::isfinite(g.angle)) throw std::invalid_argument("gate angle not finite");
  gates.push_back(g);
}

void CircuitIR::append(const CircuitIR& other) {
  if (other.n_qubits != n_qubits)
    throw std::invalid_argument("appending circuit with different qubit count");
  for (const auto& g : other.gates) push(g);
}

int CircuitIR::count_two_qubit() const {
  int n = 0;
  for (const auto& g : gates) n += g.two_qubit() ? 1 : 0;
  return n;
}

int CircuitIR::count(GateKind kind) const {
  int n = 0;
  for (const auto& g : gates) n += g.kind == kind ? 1 : 0;
  return n;
}

void apply_gate_in_place(VecC& amps, int n_qubits, const Gate& gate) {
  const std::size_t d = static_cast<std::size_t>(amps.size());
  if (gate.q1 < 0 || gate.q1 >= n_qubits || (gate.two_qubit() && (gate.q2 < 0 || gate.q2 >= n_qubits)))
    throw std::out_of_range("gate qubit index out of range");
  const std::size_t m1 = std::size_t{1} << gate.q1;
  switch (gate.kind) {
    case GateKind::X: {
      for (std::size_t i = 0; i < d; ++i)
        if (!(i & m1)) std::swap(amps[i], amps[i | m1]);
      break;
    }
    case GateKind::RX: {
      const double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
      for (std::size_t i = 0; i < d; ++i) {
        if (i & m1) continue;
        const cxd a0 = amps[i], a1 = amps[i | m1];
        amps[i] = c * a0 + cxd(0, -s) * a1;
        amps[i | m1] = cxd(0, -s) * a0 + c * a1;
      }
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(gate.angle / 2), s = std::sin(gate.angle / 2);
      for (std::size_t i = 0; i < d; ++i) {
        if (i & m1) continue;
        const cxd a0 = amps[i], a1 = amps[i | m1];
        amps[i] = c * a0 - s * a1;
        amps[i | m1] = s * a0 + c * a1;
      }
      break;
    }
    case GateKind::RZ: {
      const cxd p0 = std::exp(cxd(0, -gate.angle / 2)), p1 = std::exp(cxd(0, gate.angle / 2));
      for (std::size_t i = 0; i < d; ++i) amps[i] *= (i & m1) ? p1 : p0;
      break;
    }
    case GateKind::CZ: {
      const std::size_t m2 = std::size_t{1} << gate.q2;
      for (std::size_t i = 0; i < d; ++i)
        if ((i & m1) && (i & m2)) amps[i] = -amps[i];
      break;
    }
    case GateKind::CNOT: {
      const std::size_t m2 = std::size_t{1} << gate.q2;
      for (std::size_t i = 0; i < d; ++i)
        if ((i & m1) && !(i & m2)) std::swap(amps[i], amps[i | m2]);
      break;
    }
    case GateKind::RBS: {
      // |01> -> cos|01> - sin|10>, |10> -> sin|01> + cos|10>, where the
      // ket is |q2 q1>.
      const std::size_t m2 = std::size_t{1} << gate.q2;
      const double c = std::cos(gate.angle), s = std::sin(gate.angle);
      for (std::size_t i = 0; i < d; ++i) {
        if ((i & m1) && !(i & m2)) {  // i holds |01>, partner |10>
          const std::size_t j = (i ^ m1) | m2;
          const cxd a01 = amps[i], a10 = amps[j];
          amps[i] = c * a01 + s * a10;
          amps[j] = -s * a01 + c * a10;
        }
      }
      break;
    }
  }
}

Statevector apply_gate(const Statevector& s, const Gate& gate) {
  Statevector out = s;
  apply_gate_in_place(out.amplitudes, out.n_qubits, gate);
  return out;
}

Statevector apply_circuit(const CircuitIR& c, const Statevector& s) {
  if (c.n_qubits != s.n_qubits)
    throw std::invalid_argument("circuit and state qubit counts differ");
  Statevector out = s;
  for (const auto& g : c.gates) apply_gate_in_place(out.amplitudes, out.n_qubits, g);
  return out;
}

MatC circuit_unitary(const CircuitIR& c) {
  check_capacity(c.n_qubits);
  const std::size_t d = dim_of(c.n_qubits);
  MatC u = MatC::Identity(d, d);
  for (std::size_t col = 0; col < d; ++col) {
    VecC v = u.col(col);
    for (const auto& g : c.gates) apply_gate_in_place(v, c.n_qubits, g);
    u.col(col) = v;
  }
  return u;
}

}  // namespace dbqa
