#include "dbqa/qcore.hpp"

#include <lapacke.h>

namespace dbqa {

void check_capacity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::invalid_argument("qubit count " + std::to_string(n_qubits) +
                                " outside supported range [1, " +
                                std::to_string(kMaxQubits) + "]");
}

Statevector::Statevector(int nq, VecC amps) : n_qubits(nq), amplitudes(std::move(amps)) {
  check_capacity(nq);
  if (amplitudes.size() != static_cast<Eigen::Index>(dim_of(nq)))
    throw std::invalid_argument("statevector length does not match qubit count");
}

Statevector Statevector::computational_basis(int n_qubits, std::size_t index) {
  check_capacity(n_qubits);
  VecC v = VecC::Zero(dim_of(n_qubits));
  v[index] = 1.0;
  return Statevector(n_qubits, std::move(v));
}

DenseOperator::DenseOperator(int nq, MatC m, bool hermitian_flag)
    : n_qubits(nq), matrix(std::move(m)), hermitian(hermitian_flag) {
  check_capacity(nq);
  const auto d = static_cast<Eigen::Index>(dim_of(nq));
  if (matrix.rows() != d || matrix.cols() != d)
    throw std::invalid_argument("operator dimension does not match qubit count");
  if (hermitian && !is_hermitian(matrix))
    throw std::invalid_argument("operator flagged Hermitian is not Hermitian");
}

DenseOperator DenseOperator::identity(int n_qubits) {
  const auto d = dim_of(n_qubits);
  return DenseOperator(n_qubits, MatC::Identity(d, d), true);
}

void PauliSum::add(double coefficient, const std::string& ops) {
  if (static_cast<int>(ops.size()) != n_qubits)
    throw std::invalid_argument("pauli string length does not match qubit count");
  for (char c : ops)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw std::invalid_argument("invalid pauli label in string " + ops);
  if (coefficient == 0.0) return;
  for (auto it = terms.begin(); it != terms.end(); ++it) {
    if (it->ops == ops) {
      it->coefficient += coefficient;
      if (it->coefficient == 0.0) terms.erase(it);
      return;
    }
  }
  terms.push_back({coefficient, ops});
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits != n_qubits)
    throw std::invalid_argument("pauli sums act on different qubit counts");
  for (const auto& t : other.terms) add(t.coefficient, t.ops);
  return *this;
}

PauliSum PauliSum::scaled(double factor) const {
  PauliSum out(n_qubits);
  for (const auto& t : terms) out.add(factor * t.coefficient, t.ops);
  return out;
}

namespace {

// Action of one Pauli label on a basis index: flips the bit for X/Y and
// collects the phase.
inline void pauli_char_action(char op, int bit, std::size_t& index, cxd& phase) {
  const std::size_t mask = std::size_t{1} << bit;
  switch (op) {
    case 'I':
      break;
    case 'X':
      index ^= mask;
      break;
    case 'Y':
      phase *= (index & mask) ? cxd(0, -1) : cxd(0, 1);
      index ^= mask;
      break;
    case 'Z':
      if (index & mask) phase = -phase;
      break;
  }
}

}  // namespace

DenseOperator pauli_to_dense(const PauliSum& p) {
  check_capacity(p.n_qubits);
  const std::size_t d = dim_of(p.n_qubits);
  MatC m = MatC::Zero(d, d);
  for (const auto& term : p.terms) {
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t row = col;
      cxd phase = term.coefficient;
      for (int q = 0; q < p.n_qubits; ++q) pauli_char_action(term.ops[q], q, row, phase);
      m(row, col) += phase;
    }
  }
  const bool herm = is_hermitian(m);
  return DenseOperator(p.n_qubits, std::move(m), herm);
}

void pauli_apply(const PauliSum& p, const VecC& x, VecC& y) {
  const std::size_t d = static_cast<std::size_t>(x.size());
  if (y.size() != x.size()) y = VecC::Zero(x.size());
  for (const auto& term : p.terms) {
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t row = col;
      cxd phase = term.coefficient;
      for (int q = 0; q < p.n_qubits; ++q) pauli_char_action(term.ops[q], q, row, phase);
      y[row] += phase * x[col];
    }
  }
}

double pauli_expectation(const PauliSum& p, const Statevector& s) {
  VecC hx = VecC::Zero(s.amplitudes.size());
  pauli_apply(p, s.amplitudes, hx);
  return s.amplitudes.dot(hx).real();
}

HermitianEigen hermitian_eigs(const MatC& h) {
  const auto n = h.rows();
  if (n != h.cols()) throw std::invalid_argument("hermitian_eigs: matrix not square");
  HermitianEigen out;
  if (n >= 64) {
    out.vectors = h;
    out.values.resize(n);
    const int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
        reinterpret_cast<lapack_complex_double*>(out.vectors.data()),
        static_cast<lapack_int>(n), out.values.data());
    if (info != 0) throw std::runtime_error("zheevd failed with info " + std::to_string(info));
  } else {
    Eigen::SelfAdjointEigenSolver<MatC> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("hermitian eigendecomposition failed");
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
  }
  return out;
}

MatC expm_from_eigs(const HermitianEigen& eig, double t) {
  VecC phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    phases[i] = std::exp(cxd(0, -t * eig.values[i]));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

DenseOperator expm_hermitian(const DenseOperator& h, double t) {
  if (!h.hermitian || !is_hermitian(h.matrix))
    throw std::invalid_argument("expm_hermitian requires a Hermitian-flagged operator");
  return DenseOperator(h.n_qubits, expm_from_eigs(hermitian_eigs(h.matrix), t), false);
}

DenseOperator conjugate(const DenseOperator& a, const DenseOperator& u) {
  if (a.n_qubits != u.n_qubits)
    throw std::invalid_argument("conjugate: dimension mismatch");
  if (!is_unitary(u.matrix))
    throw std::invalid_argument("conjugate: u is not unitary");
  MatC out = u.matrix.adjoint() * a.matrix * u.matrix;
  const bool herm = a.hermitian && is_hermitian(out, 1e-9);
  return DenseOperator(a.n_qubits, std::move(out), herm);
}

double expectation(const Statevector& s, const DenseOperator& h) {
  if (s.n_qubits != h.n_qubits)
    throw std::invalid_argument("expectation: dimension mismatch");
  const cxd value = s.amplitudes.dot(h.matrix * s.amplitudes);
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real())))
    throw std::runtime_error("expectation of non-Hermitian observable");
  return value.real();
}

double max_abs(const MatC& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const MatC& m, double tol) {
  return max_abs(m - m.adjoint()) < tol;
}

bool is_unitary(const MatC& m, double tol) {
  return max_abs(m.adjoint() * m - MatC::Identity(m.rows(), m.cols())) < tol;
}

double hs_norm(const MatC& m) { return m.norm(); }

}  // namespace dbqa
