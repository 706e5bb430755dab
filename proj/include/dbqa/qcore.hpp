#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dbqa {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

inline constexpr int kMaxQubits = 14;

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

void check_capacity(int n_qubits);

// State of an L-qubit register. Qubit 0 is the least significant bit of the
// basis index; every module inherits this convention.
struct Statevector {
  int n_qubits = 0;
  VecC amplitudes;

  Statevector() = default;
  Statevector(int nq, VecC amps);

  static Statevector computational_basis(int n_qubits, std::size_t index = 0);

  double norm() const { return amplitudes.norm(); }
};

struct DenseOperator {
  int n_qubits = 0;
  MatC matrix;
  bool hermitian = false;

  DenseOperator() = default;
  DenseOperator(int nq, MatC m, bool hermitian_flag = false);

  static DenseOperator identity(int n_qubits);

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct PauliTerm {
  double coefficient = 0.0;
  std::string ops;  // one of I,X,Y,Z per qubit; ops[i] acts on qubit i
};

// Weighted sum of Pauli strings; duplicate strings are merged on insertion.
struct PauliSum {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  explicit PauliSum(int nq = 0) : n_qubits(nq) {}

  void add(double coefficient, const std::string& ops);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum scaled(double factor) const;
};

DenseOperator pauli_to_dense(const PauliSum& p);

// y += H x  without densifying H.
void pauli_apply(const PauliSum& p, const VecC& x, VecC& y);
double pauli_expectation(const PauliSum& p, const Statevector& s);

// Eigendecomposition of a Hermitian matrix (ascending eigenvalues).
struct HermitianEigen {
  VecR values;
  MatC vectors;
};
HermitianEigen hermitian_eigs(const MatC& h);

// U = exp(-i t h), via the eigendecomposition of h.
DenseOperator expm_hermitian(const DenseOperator& h, double t);
MatC expm_from_eigs(const HermitianEigen& eig, double t);

DenseOperator conjugate(const DenseOperator& a, const DenseOperator& u);

double expectation(const Statevector& s, const DenseOperator& h);

double max_abs(const MatC& m);
bool is_hermitian(const MatC& m, double tol = 1e-12);
bool is_unitary(const MatC& m, double tol = 1e-10);
double hs_norm(const MatC& m);

}  // namespace dbqa
