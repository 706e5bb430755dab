#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "dbqa/circuit.hpp"
#include "dbqa/hamiltonians.hpp"
#include "dbqa/qcore.hpp"

using namespace dbqa;

namespace {

const cxd kI(0.0, 1.0);

MatC pauli_mat(char c) {
  MatC m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -kI, kI, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

// Independent kron-based densifier (qubit 0 = least significant bit):
// kron(m_{L-1}, ..., m_0).
MatC kron_oracle(const std::string& ops) {
  MatC m = pauli_mat(ops.back());  // highest qubit, outermost factor
  for (int q = static_cast<int>(ops.size()) - 2; q >= 0; --q) {
    const MatC p = pauli_mat(ops[static_cast<std::size_t>(q)]);
    MatC out(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out.block(i * 2, j * 2, 2, 2) = m(i, j) * p;
    m = out;
  }
  return m;
}

MatC dense_oracle(const PauliSum& p) {
  const Eigen::Index d = static_cast<Eigen::Index>(dim_of(p.n_qubits));
  MatC m = MatC::Zero(d, d);
  for (const PauliTerm& t : p.terms) m += t.coefficient * kron_oracle(t.ops);
  return m;
}

MatC random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatC m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cxd(g(rng), g(rng));
  return ((m + m.adjoint()) / 2.0).eval();
}

MatC random_unitary(int d, std::mt19937_64& rng) {
  const MatC h = random_hermitian(d, rng);
  return expm_from_eigs(hermitian_eigs(h), 1.0);
}

}  // namespace

TEST_CASE("pauli_to_dense: single Z is diag(1,-1)") {
  PauliSum p(1);
  p.add(1.0, "Z");
  const DenseOperator d = pauli_to_dense(p);
  MatC expect(2, 2);
  expect << 1, 0, 0, -1;
  CHECK(max_abs(d.matrix - expect) < 1e-14);
}

TEST_CASE("pauli_to_dense: X0 X1 is the anti-diagonal") {
  PauliSum p(2);
  p.add(1.0, "XX");
  const DenseOperator d = pauli_to_dense(p);
  MatC expect = MatC::Zero(4, 4);
  expect(0, 3) = expect(1, 2) = expect(2, 1) = expect(3, 0) = 1.0;
  CHECK(max_abs(d.matrix - expect) < 1e-14);
}

TEST_CASE("pauli_to_dense: XXZ L=4 spectrum matches kron oracle") {
  const PauliSum h = build_xxz({4, 0.5, true});
  const DenseOperator d = pauli_to_dense(h);
  const MatC oracle = dense_oracle(h);
  CHECK(max_abs(d.matrix - oracle) < 1e-12);
  const VecR ev1 = hermitian_eigs(d.matrix).values;
  const VecR ev2 = hermitian_eigs(oracle).values;
  CHECK((ev1 - ev2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("pauli_to_dense: capacity guard") {
  PauliSum p(kMaxQubits + 1);
  p.add(1.0, std::string(kMaxQubits + 1, 'Z'));
  CHECK_THROWS(pauli_to_dense(p));
}

TEST_CASE("pauli merging removes duplicate strings") {
  PauliSum p(2);
  p.add(0.25, "XZ");
  p.add(0.75, "XZ");
  CHECK(p.terms.size() == 1);
  CHECK(p.terms[0].coefficient == doctest::Approx(1.0));
}

TEST_CASE("expm_hermitian: diagonal generator") {
  PauliSum p(1);
  p.add(1.0, "Z");
  const DenseOperator z = pauli_to_dense(p);
  DenseOperator zh(1, z.matrix, true);
  const double t = 0.7;
  const DenseOperator u = expm_hermitian(zh, t);
  CHECK(std::abs(u.matrix(0, 0) - std::exp(-kI * t)) < 1e-12);
  CHECK(std::abs(u.matrix(1, 1) - std::exp(kI * t)) < 1e-12);
  CHECK(std::abs(u.matrix(0, 1)) < 1e-14);
}

TEST_CASE("expm_hermitian: zero time is the identity") {
  std::mt19937_64 rng(3);
  DenseOperator h(2, random_hermitian(4, rng), true);
  const DenseOperator u = expm_hermitian(h, 0.0);
  CHECK(max_abs(u.matrix - MatC::Identity(4, 4)) < 1e-12);
}

TEST_CASE("expm_hermitian: exp(-i pi/2 X) = -iX") {
  DenseOperator x(1, kron_oracle("X"), true);
  const DenseOperator u = expm_hermitian(x, std::acos(-1.0) / 2.0);
  CHECK(max_abs(u.matrix - (-kI * kron_oracle("X"))) < 1e-12);
}

TEST_CASE("expm_hermitian rejects non-Hermitian input") {
  MatC m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS(expm_hermitian(DenseOperator(1, m, false), 1.0));
}

TEST_CASE("unitarity of generated exponentials") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    DenseOperator h(3, random_hermitian(8, rng), true);
    const DenseOperator u = expm_hermitian(h, 0.3 * (trial + 1));
    CHECK(max_abs(u.matrix.adjoint() * u.matrix - MatC::Identity(8, 8)) < 1e-10);
  }
}

TEST_CASE("conjugate: by the identity") {
  std::mt19937_64 rng(5);
  DenseOperator a(2, random_hermitian(4, rng), true);
  const DenseOperator c = conjugate(a, DenseOperator::identity(2));
  CHECK(max_abs(c.matrix - a.matrix) < 1e-12);
}

TEST_CASE("conjugate: X flips Z") {
  DenseOperator z(1, kron_oracle("Z"), true);
  DenseOperator x(1, kron_oracle("X"), false);
  const DenseOperator c = conjugate(z, x);
  CHECK(max_abs(c.matrix + kron_oracle("Z")) < 1e-12);
}

TEST_CASE("conjugate preserves the spectrum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3, d = 8;
    DenseOperator a(n, random_hermitian(d, rng), true);
    DenseOperator u(n, random_unitary(d, rng), false);
    const DenseOperator c = conjugate(a, u);
    const VecR ev1 = hermitian_eigs(a.matrix).values;
    const VecR ev2 = hermitian_eigs(c.matrix).values;
    CHECK((ev1 - ev2).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(hs_norm(c.matrix) - hs_norm(a.matrix)) < 1e-10);
  }
}

TEST_CASE("expectation: computational and superposition states") {
  DenseOperator z(1, kron_oracle("Z"), true);
  CHECK(expectation(Statevector::computational_basis(1, 0), z) ==
        doctest::Approx(1.0));
  VecC plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(expectation(Statevector(1, plus), z) == doctest::Approx(0.0));
}

TEST_CASE("expectation: ground eigenvector returns its eigenvalue") {
  const PauliSum h = build_xxz({4, 0.5, true});
  const DenseOperator d = pauli_to_dense(h);
  const HermitianEigen eig = hermitian_eigs(d.matrix);
  const Statevector gs(4, eig.vectors.col(0));
  CHECK(expectation(gs, d) == doctest::Approx(eig.values(0)).epsilon(1e-10));
  CHECK(pauli_expectation(h, gs) == doctest::Approx(eig.values(0)).epsilon(1e-10));
}

TEST_CASE("apply_gate: X flips |0> to |1>") {
  const Statevector s =
      apply_gate(Statevector::computational_basis(1, 0), Gate::x(0));
  CHECK(std::abs(s.amplitudes(1) - 1.0) < 1e-14);
  CHECK(std::abs(s.amplitudes(0)) < 1e-14);
}

TEST_CASE("apply_gate: RBS(0) is the identity") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  VecC amps(4);
  for (int i = 0; i < 4; ++i) amps(i) = cxd(g(rng), g(rng));
  amps /= amps.norm();
  const Statevector s(2, amps);
  const Statevector out = apply_gate(s, Gate::rbs(0, 1, 0.0));
  CHECK((out.amplitudes - amps).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply_gate: RBS(pi/2) swaps the one-hot pair with a sign") {
  // basis index 1 = qubit 0 set = |q1 q0> = |01>
  const Statevector s = Statevector::computational_basis(2, 1);
  const Statevector out = apply_gate(s, Gate::rbs(0, 1, std::acos(-1.0) / 2.0));
  CHECK(std::abs(out.amplitudes(2) + 1.0) < 1e-12);  // -|10>
  CHECK(std::abs(out.amplitudes(1)) < 1e-12);
}

TEST_CASE("apply_gate rejects out-of-range qubits") {
  Statevector s = Statevector::computational_basis(2, 0);
  CHECK_THROWS(apply_gate(s, Gate::x(2)));
  CHECK_THROWS(apply_gate(s, Gate::cz(0, 2)));
}

TEST_CASE("gate application preserves the norm") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  VecC amps(8);
  for (int i = 0; i < 8; ++i) amps(i) = cxd(g(rng), g(rng));
  amps /= amps.norm();
  Statevector s(3, amps);
  for (const Gate& gate :
       {Gate::rbs(0, 2, 0.4), Gate::cz(1, 2), Gate::cnot(0, 1), Gate::rx(2, 0.3),
        Gate::ry(0, -0.9), Gate::rz(1, 2.2), Gate::x(1)}) {
    s = apply_gate(s, gate);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gate-by-gate application equals the dense circuit unitary") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  CircuitIR c(3);
  c.push(Gate::ry(0, 0.3));
  c.push(Gate::cnot(0, 2));
  c.push(Gate::rbs(1, 2, -0.8));
  c.push(Gate::cz(0, 1));
  c.push(Gate::rz(2, 1.1));
  c.push(Gate::rx(1, -0.4));
  c.push(Gate::x(0));
  VecC amps(8);
  for (int i = 0; i < 8; ++i) amps(i) = cxd(g(rng), g(rng));
  amps /= amps.norm();
  const Statevector out = apply_circuit(c, Statevector(3, amps));
  const VecC expect = circuit_unitary(c) * amps;
  CHECK((out.amplitudes - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Hilbert-Schmidt norm is unitarily invariant") {
  std::mt19937_64 rng(19);
  const MatC a = random_hermitian(8, rng);
  const MatC u = random_unitary(8, rng);
  CHECK(std::abs(hs_norm(u.adjoint() * a * u) - hs_norm(a)) < 1e-10);
}
