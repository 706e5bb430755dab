#pragma once

#include "dbqa/qcore.hpp"

namespace dbqa {

struct SpectrumFixture {
  double E0 = 0.0;
  double E1 = 0.0;
  Statevector ground;

  double gap() const { return E1 - E0; }
};

SpectrumFixture exact_diag(const PauliSum& h);
SpectrumFixture fixture_from_eigs(int n_qubits, const HermitianEigen& eig);

double rel_diff(double e_tilde, double e0);
double fidelity_bound(double e_tilde, const SpectrumFixture& fixture);

struct MedianMad {
  double median = 0.0;
  double mad = 0.0;
};
MedianMad median_mad(std::vector<double> values);

}  // namespace dbqa
