#include "dbqa/hamiltonians.hpp"

#include <iostream>

namespace dbqa {

namespace {

std::string two_site(int L, int i, int j, char a, char b) {
  std::string s(L, 'I');
  s[i] = a;
  s[j] = b;
  return s;
}

}  // namespace

IsingDiagonalSpec::IsingDiagonalSpec(VecR a, VecR b) : alpha(std::move(a)), beta(std::move(b)) {
  if (alpha.size() != beta.size())
    throw std::invalid_argument("ising diagonal: alpha/beta length mismatch");
  if (!alpha.allFinite() || !beta.allFinite())
    throw std::invalid_argument("ising diagonal: entries must be finite");
}

IsingDiagonalSpec IsingDiagonalSpec::zero(int L) {
  return IsingDiagonalSpec(VecR::Zero(L), VecR::Zero(L));
}

PauliSum build_xxz(const XxzSpec& spec) {
  if (spec.L < 2) throw std::invalid_argument("xxz: L must be at least 2");
  if (spec.L == 2 && spec.periodic)
    std::cerr << "warning: periodic XXZ with L=2 duplicates the (0,1) bond; "
                 "coefficients merge and double\n";
  PauliSum h(spec.L);
  const int n_bonds = spec.periodic ? spec.L : spec.L - 1;
  for (int i = 0; i < n_bonds; ++i) {
    const int j = (i + 1) % spec.L;
    h.add(1.0, two_site(spec.L, i, j, 'X', 'X'));
    h.add(1.0, two_site(spec.L, i, j, 'Y', 'Y'));
    h.add(spec.delta, two_site(spec.L, i, j, 'Z', 'Z'));
  }
  return h;
}

PauliSum build_j1j2(const J1J2Spec& spec) {
  if (spec.L < 4) throw std::invalid_argument("j1j2: L must be at least 4");
  // Nearest-neighbor part is the isotropic (delta = 1) XXZ ring.
  PauliSum h = build_xxz({spec.L, 1.0, true}).scaled(spec.j1);
  for (int i = 0; i < spec.L; ++i) {
    const int j = (i + 2) % spec.L;
    h.add(spec.j2, two_site(spec.L, i, j, 'X', 'X'));
    h.add(spec.j2, two_site(spec.L, i, j, 'Y', 'Y'));
    h.add(spec.j2, two_site(spec.L, i, j, 'Z', 'Z'));
  }
  return h;
}

PauliSum build_ising_diagonal(const IsingDiagonalSpec& spec) {
  const int L = spec.n_qubits();
  if (L < 1) throw std::invalid_argument("ising diagonal: empty spec");
  PauliSum h(L);
  for (int i = 0; i < L; ++i) {
    std::string z(L, 'I');
    z[i] = 'Z';
    if (spec.alpha[i] != 0.0) h.add(spec.alpha[i], z);
    if (spec.beta[i] != 0.0) h.add(spec.beta[i], two_site(L, i, (i + 1) % L, 'Z', 'Z'));
  }
  return h;
}

PauliSum build_tfim(const TfimSpec& spec) {
  if (spec.B.size() != spec.L || spec.C.size() != spec.L)
    throw std::invalid_argument("tfim: field vectors must have length L");
  PauliSum h(spec.L);
  for (int a = 0; a < spec.L; ++a) {
    const int b = (a + 1) % spec.L;
    h.add(1.0, two_site(spec.L, a, b, 'X', 'X'));
    std::string z(spec.L, 'I'), x(spec.L, 'I');
    z[a] = 'Z';
    x[a] = 'X';
    if (spec.B[a] != 0.0) h.add(spec.B[a], z);
    if (spec.C[a] != 0.0) h.add(spec.C[a], x);
  }
  return h;
}

PauliSum build_xxz_with_field(const XxzSpec& spec, const VecR& field) {
  if (field.size() != spec.L)
    throw std::invalid_argument("xxz with field: field length mismatch");
  XxzSpec iso = spec;
  iso.delta = 1.0;
  PauliSum h = build_xxz(iso);
  for (int a = 0; a < spec.L; ++a) {
    std::string z(spec.L, 'I');
    z[a] = 'Z';
    if (field[a] != 0.0) h.add(field[a], z);
  }
  return h;
}

VecR ising_diagonal_entries(const IsingDiagonalSpec& spec) {
  const int L = spec.n_qubits();
  const std::size_t d = dim_of(L);
  VecR diag = VecR::Zero(d);
  for (std::size_t idx = 0; idx < d; ++idx) {
    double e = 0.0;
    for (int i = 0; i < L; ++i) {
      const double zi = (idx >> i) & 1 ? -1.0 : 1.0;
      const double zj = (idx >> ((i + 1) % L)) & 1 ? -1.0 : 1.0;
      e += spec.alpha[i] * zi + spec.beta[i] * zi * zj;
    }
    diag[idx] = e;
  }
  return diag;
}

}  // namespace dbqa
