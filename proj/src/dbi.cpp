#include "dbqa/dbi.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dbqa {
namespace {

constexpr int kKrylovMax = 48;

// Lanczos tridiagonalization of a Hermitian operator given by matvec,
// started from |0>. Returns the orthonormal basis and the tridiagonal
// eigendecomposition, so exp(i s H)|0> = basis * vectors * exp(i s values)
// * vectors^T * e1 for any s.
struct KrylovBasis {
  MatC basis;
  VecR values;
  Eigen::MatrixXd vectors;
};

template <typename MatVec>
KrylovBasis lanczos(const MatVec& matvec, Eigen::Index n, int m_max) {
  const int m_cap = static_cast<int>(std::min<Eigen::Index>(m_max, n));
  MatC basis(n, m_cap);
  VecR alpha(m_cap);
  VecR beta(m_cap);  // beta(j) couples basis columns j and j+1
  basis.col(0).setZero();
  basis.col(0)(0) = 1.0;
  int m = m_cap;
  for (int j = 0; j < m_cap; ++j) {
    VecC w = matvec(basis.col(j));
    if (j > 0) w -= beta(j - 1) * basis.col(j - 1);
    alpha(j) = basis.col(j).dot(w).real();
    w -= alpha(j) * basis.col(j);
    // one re-orthogonalization pass keeps the basis clean at these sizes
    w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
    const double nrm = w.norm();
    if (j + 1 < m_cap) {
      if (nrm < 1e-12) {
        m = j + 1;
        break;
      }
      beta(j) = nrm;
      basis.col(j + 1) = w / nrm;
    }
  }
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    tri(j, j) = alpha(j);
    if (j + 1 < m) tri(j + 1, j) = tri(j, j + 1) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  return {basis.leftCols(m), es.eigenvalues(), es.eigenvectors()};
}

MatC commutator_with_diag(const VecR& d_diag, const MatC& a) {
  MatC w(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      w(i, j) = (d_diag(i) - d_diag(j)) * a(i, j);
  return w;
}

}  // namespace

DbiState::DbiState(DenseOperator input) : a0(input), current(std::move(input)) {
  if (!a0.hermitian) throw std::invalid_argument("DbiState: input must be Hermitian");
}

MatC bracket(const MatC& d, const MatC& a) {
  if (d.rows() != a.rows() || d.cols() != a.cols() || d.rows() != d.cols())
    throw std::invalid_argument("bracket: dimension mismatch");
  return d * a - a * d;
}

DenseOperator bracket(const DenseOperator& d, const DenseOperator& a) {
  return DenseOperator(a.n_qubits, bracket(d.matrix, a.matrix), false);
}

DenseOperator dbr(const DenseOperator& a, const DenseOperator& d, double s) {
  if (!a.hermitian || !d.hermitian)
    throw std::invalid_argument("dbr: inputs must be Hermitian");
  const MatC w = bracket(d.matrix, a.matrix);
  // W is anti-Hermitian, so iW is Hermitian and exp(sW) = exp(-is (iW)).
  const HermitianEigen eig = hermitian_eigs(cxd(0.0, 1.0) * w);
  const MatC u = expm_from_eigs(eig, s);
  return DenseOperator(a.n_qubits, u * a.matrix * u.adjoint(), true);
}

double offdiag_hs_norm(const MatC& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("offdiag_hs_norm: not square");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

double energy_fluctuation(const Statevector& state, const DenseOperator& h) {
  if (!h.hermitian) throw std::invalid_argument("energy_fluctuation: h not Hermitian");
  if (h.matrix.rows() != state.amplitudes.size())
    throw std::invalid_argument("energy_fluctuation: dimension mismatch");
  const VecC hv = h.matrix * state.amplitudes;
  const double mean = state.amplitudes.dot(hv).real();
  const double second = hv.squaredNorm();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

double dbr_cost(CostKind kind, const MatC& a) {
  switch (kind) {
    case CostKind::Energy:
      return a(0, 0).real();
    case CostKind::OffdiagHs:
      return offdiag_hs_norm(a);
    case CostKind::Fluctuation: {
      const double mean = a(0, 0).real();
      const double second = a.col(0).squaredNorm();  // <0|A^2|0> for Hermitian A
      return std::sqrt(std::max(0.0, second - mean * mean));
    }
  }
  throw std::logic_error("dbr_cost: unknown kind");
}

DbrScan::DbrScan(const MatC& a, const VecR& d_diag, CostKind kind)
    : a_(a), kind_(kind), w_(commutator_with_diag(d_diag, a)) {
  if (kind_ == CostKind::OffdiagHs) {
    iw_eigs_ = hermitian_eigs(cxd(0.0, 1.0) * w_);
  } else {
    auto matvec = [this](const Eigen::Ref<const VecC>& v) -> VecC {
      return cxd(0.0, 1.0) * (w_ * v);
    };
    KrylovBasis kb = lanczos(matvec, a.rows(), kKrylovMax);
    basis_ = std::move(kb.basis);
    krylov_values_ = std::move(kb.values);
    krylov_vectors_ = std::move(kb.vectors);
  }
}

VecC DbrScan::propagate(double s) const {
  // exp(-sW)|0> = exp(+is (iW))|0> via the Krylov tridiagonal.
  const Eigen::Index m = krylov_values_.size();
  VecC small(m);
  for (Eigen::Index j = 0; j < m; ++j)
    small(j) = std::polar(1.0, s * krylov_values_(j)) * krylov_vectors_(0, j);
  return basis_ * (krylov_vectors_.cast<cxd>() * small);
}

double DbrScan::cost(double s) const {
  if (kind_ == CostKind::OffdiagHs) {
    const MatC u = expm_from_eigs(iw_eigs_, s);
    return offdiag_hs_norm(u * a_ * u.adjoint());
  }
  const VecC phi = propagate(s);
  const VecC aphi = a_ * phi;
  const double mean = phi.dot(aphi).real();
  if (kind_ == CostKind::Energy) return mean;
  return std::sqrt(std::max(0.0, aphi.squaredNorm() - mean * mean));
}

OptimizeSResult optimize_s(const DbiState& state, const IsingDiagonalSpec& d,
                           CostKind cost, double s_max, int grid_points) {
  if (s_max <= 0.0) throw std::invalid_argument("optimize_s: s_max must be > 0");
  const VecR diag = ising_diagonal_entries(d);
  DbrScan scan(state.current.matrix, diag, cost);
  int n_fval = 0;
  auto f = [&](double s) {
    ++n_fval;
    return scan.cost(s);
  };
  ScalarMinResult res = minimize_scalar(f, 0.0, s_max, grid_points, 1e-6);
  // Tie-break toward s=0 when no genuine improvement exists.
  const double at_zero = scan.cost(0.0);
  ++n_fval;
  if (res.value >= at_zero - 1e-12 * std::max(1.0, std::abs(at_zero)))
    return {0.0, at_zero, n_fval};
  return {res.x, res.value, n_fval};
}

IsingDiagonalSpec default_d_guess(const DbiState& state) {
  const int L = state.current.n_qubits;
  const Eigen::Index dim = state.current.matrix.rows();
  IsingDiagonalSpec spec = IsingDiagonalSpec::zero(L);
  for (int q = 0; q < L; ++q) {
    double acc = 0.0;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
      const double z = ((idx >> q) & 1) ? -1.0 : 1.0;
      acc += z * state.current.matrix(idx, idx).real();
    }
    spec.alpha(q) = acc / static_cast<double>(dim);
  }
  return spec;
}

OptimizeDResult optimize_d(const DbiState& state, CostKind cost, int budget,
                           OptimizerEngine engine, double s_max,
                           std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("optimize_d: budget must be >= 1");
  const int L = state.current.n_qubits;
  const IsingDiagonalSpec guess = default_d_guess(state);

  int n_fval = 0;
  double best_s = 0.0;
  // Each candidate d is scored by its best DBR over s in [0, s_max], with a
  // coarser inner line search than the final polish.
  auto score = [&](const VecR& x, double* s_out) {
    IsingDiagonalSpec spec = IsingDiagonalSpec::zero(L);
    spec.alpha = x.head(L);
    spec.beta = x.tail(L);
    DbrScan scan(state.current.matrix, ising_diagonal_entries(spec), cost);
    auto f = [&](double s) {
      ++n_fval;
      return scan.cost(s);
    };
    ScalarMinResult res = minimize_scalar(f, 0.0, s_max, 12, 1e-3 * s_max);
    if (s_out) *s_out = res.x;
    return res.value;
  };

  VecR x0(2 * L);
  x0.head(L) = guess.alpha;
  x0.tail(L) = guess.beta;
  double s0 = 0.0;
  const double cost0 = score(x0, &s0);
  if (budget == 1) return {guess, s0, cost0, n_fval};

  auto objective = [&](const VecR& x) { return score(x, nullptr); };
  VectorMinResult res;
  if (engine == OptimizerEngine::Powell) {
    res = minimize_powell(objective, x0, 0.5, budget - 1, 1e-4);
  } else {
    std::mt19937_64 rng(seed);
    res = minimize_cmaes(objective, x0, 0.3, budget - 1, rng);
  }
  if (res.value >= cost0) return {guess, s0, cost0, n_fval};

  IsingDiagonalSpec out = IsingDiagonalSpec::zero(L);
  out.alpha = res.x.head(L);
  out.beta = res.x.tail(L);
  double s_best = 0.0;
  const double refined = score(res.x, &s_best);
  if (refined >= cost0) return {guess, s0, cost0, n_fval};
  return {out, s_best, refined, n_fval};
}

DbiStepDense dbi_step_dense(const DbiState& state, const IsingDiagonalSpec& d,
                            double s, CostKind recorded_cost) {
  const VecR diag = ising_diagonal_entries(d);
  const MatC& a = state.current.matrix;
  DbrStep step;
  step.s = s;
  step.d = d;
  step.cost_before = dbr_cost(recorded_cost, a);

  const MatC w = commutator_with_diag(diag, a);
  step.w_norm = hs_norm(w);
  DbiStepDense out{state, MatC::Identity(a.rows(), a.cols())};
  if (step.w_norm > 1e-14 && s != 0.0) {
    const HermitianEigen eig = hermitian_eigs(cxd(0.0, 1.0) * w);
    out.u = expm_from_eigs(eig, s);
    out.state.current =
        DenseOperator(state.current.n_qubits, out.u * a * out.u.adjoint(), true);
  }
  step.cost_after = dbr_cost(recorded_cost, out.state.current.matrix);
  out.state.steps.push_back(step);
  return out;
}

DbiState dbi_step(const DbiState& state, const IsingDiagonalSpec& d, double s,
                  CostKind recorded_cost) {
  return dbi_step_dense(state, d, s, recorded_cost).state;
}

MatC brockett_euler(const MatC& a0, const MatC& n, double dl, int steps) {
  const double initial_norm = hs_norm(a0);
  MatC a = a0;
  for (int it = 0; it < steps; ++it) {
    const MatC w = bracket(n, a);
    a += dl * bracket(w, a);
    a = 0.5 * (a + a.adjoint().eval());  // kill Euler drift off the Hermitian manifold
    if (hs_norm(a) > 10.0 * initial_norm)
      throw std::runtime_error("brockett_euler: divergence detected; reduce dl");
  }
  return a;
}

DenseOperator brockett_euler(const DenseOperator& a0, const DenseOperator& n,
                             double dl, int steps) {
  if (!a0.hermitian) throw std::invalid_argument("brockett_euler: a0 not Hermitian");
  return DenseOperator(a0.n_qubits, brockett_euler(a0.matrix, n.matrix, dl, steps),
                       true);
}

}  // namespace dbqa
