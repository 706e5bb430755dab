#pragma once

#include "dbqa/qcore.hpp"

namespace dbqa {

struct XxzSpec {
  int L = 0;
  double delta = 0.5;
  bool periodic = true;
};

struct J1J2Spec {
  int L = 0;
  double j1 = 1.0;
  double j2 = 0.2;
};

// Diagonal generator D = sum_a (alpha_a Z_a + beta_a Z_a Z_{a+1}), ring.
struct IsingDiagonalSpec {
  VecR alpha;
  VecR beta;

  IsingDiagonalSpec() = default;
  IsingDiagonalSpec(VecR a, VecR b);

  int n_qubits() const { return static_cast<int>(alpha.size()); }
  static IsingDiagonalSpec zero(int L);
};

struct TfimSpec {
  int L = 0;
  VecR B;  // transverse fields
  VecR C;  // longitudinal fields
};

PauliSum build_xxz(const XxzSpec& spec);
PauliSum build_j1j2(const J1J2Spec& spec);
PauliSum build_ising_diagonal(const IsingDiagonalSpec& spec);
PauliSum build_tfim(const TfimSpec& spec);
PauliSum build_xxz_with_field(const XxzSpec& spec, const VecR& field);

// Diagonal entries of the densified Ising generator, without densifying.
VecR ising_diagonal_entries(const IsingDiagonalSpec& spec);

}  // namespace dbqa
