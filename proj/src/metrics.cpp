#include "dbqa/metrics.hpp"

#include <algorithm>

namespace dbqa {

SpectrumFixture fixture_from_eigs(int n_qubits, const HermitianEigen& eig) {
  SpectrumFixture out;
  out.E0 = eig.values[0];
  // First energy strictly above E0 + degeneracy threshold.
  out.E1 = eig.values[eig.values.size() - 1];
  for (Eigen::Index i = 1; i < eig.values.size(); ++i) {
    if (eig.values[i] > out.E0 + 1e-9) {
      out.E1 = eig.values[i];
      break;
    }
  }
  out.ground = Statevector(n_qubits, eig.vectors.col(0));
  return out;
}

SpectrumFixture exact_diag(const PauliSum& h) {
  check_capacity(h.n_qubits);
  const DenseOperator dense = pauli_to_dense(h);
  return fixture_from_eigs(h.n_qubits, hermitian_eigs(dense.matrix));
}

double rel_diff(double e_tilde, double e0) {
  if (e0 == 0.0) throw std::invalid_argument("rel_diff: E0 must be nonzero");
  return 1.0 - e_tilde / e0;
}

double fidelity_bound(double e_tilde, const SpectrumFixture& fixture) {
  if (fixture.gap() <= 0.0)
    throw std::invalid_argument("fidelity_bound: degenerate gap");
  return 1.0 - (e_tilde - fixture.E0) / fixture.gap();
}

namespace {

double median_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MedianMad median_mad(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median_mad: empty list");
  std::sort(values.begin(), values.end());
  const double med = median_sorted(values);
  for (auto& x : values) x = std::abs(x - med);
  std::sort(values.begin(), values.end());
  return {med, 1.4826 * median_sorted(values)};
}

}  // namespace dbqa
