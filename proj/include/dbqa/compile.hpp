#pragma once

#include <string>

#include "dbqa/circuit.hpp"
#include "dbqa/hamiltonians.hpp"
#include "dbqa/qcore.hpp"

namespace dbqa {

struct TrotterPlan {
  int order = 2;  // 1 or 2
  int M = 1;
  double t = 0.0;
};

// Product-formula circuit for exp(-i t h) where h splits into 2-qubit bond
// terms. Order 2 requires a nearest-neighbor ring on even L.
CircuitIR trotterize(const PauliSum& h, const TrotterPlan& plan);

// Any 4x4 unitary as <= 3 CNOTs plus single-qubit rotations, up to global
// phase. The matrix is indexed with q1 as the low bit.
CircuitIR compile_two_qubit_block(const MatC& u, int q1, int q2, int n_qubits);

CircuitIR compile_diagonal_ising(const IsingDiagonalSpec& spec, double t);

// exp(-i t (X_a X_b + B_a Z_a)) with exactly 2 CNOTs (a = q1).
CircuitIR compile_tfim_bond(double B_a, double t, int q1, int q2, int n_qubits);

std::string emit_qasm(const CircuitIR& c);
CircuitIR parse_qasm(const std::string& text);

}  // namespace dbqa
