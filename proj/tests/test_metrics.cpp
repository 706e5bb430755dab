#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "dbqa/hamiltonians.hpp"
#include "dbqa/metrics.hpp"

using namespace dbqa;

namespace {

// Independent median/MAD oracle using nth_element-free full sorting.
std::pair<double, double> stats_oracle(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double med =
      n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - med));
  std::sort(dev.begin(), dev.end());
  const double mdev =
      n % 2 ? dev[n / 2] : 0.5 * (dev[n / 2 - 1] + dev[n / 2]);
  return {med, 1.4826 * mdev};
}

}  // namespace

TEST_CASE("exact_diag: single-qubit Z") {
  PauliSum p(1);
  p.add(1.0, "Z");
  const SpectrumFixture f = exact_diag(p);
  CHECK(f.E0 == doctest::Approx(-1.0));
  CHECK(f.E1 == doctest::Approx(1.0));
  CHECK(std::abs(f.ground.amplitudes(1)) == doctest::Approx(1.0));
}

TEST_CASE("exact_diag: XXZ L=4 eigenpair residual") {
  const PauliSum h = build_xxz({4, 0.5, true});
  const SpectrumFixture f = exact_diag(h);
  const MatC m = pauli_to_dense(h).matrix;
  CHECK((m * f.ground.amplitudes - f.E0 * f.ground.amplitudes).norm() < 1e-9);
  CHECK(f.E0 <= f.E1);
  CHECK(f.gap() > 0.0);
}

TEST_CASE("exact_diag: J1-J2 L=6 fixture consistency") {
  const PauliSum h = build_j1j2({6, 1.0, 0.2});
  const SpectrumFixture f = exact_diag(h);
  const VecR ev = hermitian_eigs(pauli_to_dense(h).matrix).values;
  CHECK(f.E0 == doctest::Approx(ev(0)).epsilon(1e-10));
  // E1 is the lowest level strictly above E0 + 1e-9
  double e1 = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > ev(0) + 1e-9) {
      e1 = ev(i);
      break;
    }
  CHECK(f.E1 == doctest::Approx(e1).epsilon(1e-10));
}

TEST_CASE("rel_diff basics") {
  CHECK(rel_diff(-10.0, -10.0) == doctest::Approx(0.0));
  CHECK(rel_diff(0.0, -10.0) == doctest::Approx(1.0));
  CHECK(rel_diff(-9.88, -10.0) == doctest::Approx(0.012));
  CHECK_THROWS(rel_diff(1.0, 0.0));
}

TEST_CASE("fidelity_bound endpoints") {
  PauliSum p(1);
  p.add(1.0, "Z");
  const SpectrumFixture f = exact_diag(p);
  CHECK(fidelity_bound(f.E0, f) == doctest::Approx(1.0));
  CHECK(fidelity_bound(f.E1, f) == doctest::Approx(0.0));
  CHECK(fidelity_bound(f.E1 + f.gap(), f) < 0.0);  // reported as-is
}

TEST_CASE("fidelity bound never exceeds the true fidelity") {
  const PauliSum h = build_xxz({4, 0.5, true});
  const SpectrumFixture f = exact_diag(h);
  const MatC m = pauli_to_dense(h).matrix;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    VecC v(m.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(g(rng), g(rng));
    // bias toward the ground state so that E < E1 for most draws
    v = (4.0 * f.ground.amplitudes + 0.4 * v / v.norm()).eval();
    v /= v.norm();
    const double e = (v.adjoint() * m * v)(0).real();
    if (e >= f.E1) continue;
    const double truth = std::norm(f.ground.amplitudes.dot(v));
    CHECK(fidelity_bound(e, f) <= truth + 1e-9);
  }
}

TEST_CASE("variational energies never undershoot E0") {
  const PauliSum h = build_xxz({4, 0.5, true});
  const SpectrumFixture f = exact_diag(h);
  const MatC m = pauli_to_dense(h).matrix;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    VecC v(m.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cxd(g(rng), g(rng));
    v /= v.norm();
    const double e = (v.adjoint() * m * v)(0).real();
    CHECK(rel_diff(e, f.E0) >= -1e-9);
  }
}

TEST_CASE("median_mad: constant list") {
  const MedianMad m = median_mad({3.5, 3.5, 3.5, 3.5});
  CHECK(m.median == doctest::Approx(3.5));
  CHECK(m.mad == doctest::Approx(0.0));
}

TEST_CASE("median_mad: [1,2,3]") {
  const MedianMad m = median_mad({1.0, 2.0, 3.0});
  CHECK(m.median == doctest::Approx(2.0));
  CHECK(m.mad == doctest::Approx(1.4826));
}

TEST_CASE("median_mad: empty input rejected") {
  CHECK_THROWS(median_mad({}));
}

TEST_CASE("median_mad matches an independent statistics oracle") {
  std::mt19937_64 rng(17);
  std::lognormal_distribution<double> g(0.0, 1.0);
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(g(rng));
  const MedianMad m = median_mad(v);
  const auto [med, mad] = stats_oracle(v);
  CHECK(m.median == doctest::Approx(med).epsilon(1e-12));
  CHECK(m.mad == doctest::Approx(mad).epsilon(1e-12));
  // even-length median = mean of central pair
  v.push_back(g(rng));
  const MedianMad m2 = median_mad(v);
  const auto [med2, mad2] = stats_oracle(v);
  CHECK(m2.median == doctest::Approx(med2).epsilon(1e-12));
  CHECK(m2.mad == doctest::Approx(mad2).epsilon(1e-12));
}
