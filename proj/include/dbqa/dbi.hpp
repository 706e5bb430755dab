#pragma once

#include "dbqa/hamiltonians.hpp"
#include "dbqa/optimize.hpp"
#include "dbqa/qcore.hpp"

namespace dbqa {

enum class CostKind { Energy, OffdiagHs, Fluctuation };

struct DbrStep {
  double s = 0.0;
  IsingDiagonalSpec d;
  double w_norm = 0.0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

struct DbiState {
  DenseOperator a0;
  DenseOperator current;
  std::vector<DbrStep> steps;

  explicit DbiState(DenseOperator input);

  int k() const { return static_cast<int>(steps.size()); }
};

MatC bracket(const MatC& d, const MatC& a);
DenseOperator bracket(const DenseOperator& d, const DenseOperator& a);

// One double-bracket rotation exp(s W) a exp(-s W), W = [d, a].
DenseOperator dbr(const DenseOperator& a, const DenseOperator& d, double s);

double offdiag_hs_norm(const MatC& a);
double energy_fluctuation(const Statevector& state, const DenseOperator& h);

// Cost of the rotated operator as seen from |0>, or matrix-level for the
// off-diagonal norm.
double dbr_cost(CostKind kind, const MatC& a);

// Evaluates costs of exp(sW) A exp(-sW) for one fixed (A, d) pair across
// many s values. Energy and fluctuation costs go through a Krylov
// propagator of |0>; the off-diagonal norm takes the dense route.
class DbrScan {
 public:
  DbrScan(const MatC& a, const VecR& d_diag, CostKind kind);
  double cost(double s) const;

 private:
  const MatC& a_;
  CostKind kind_;
  MatC w_;  // dense commutator, w_ij = (d_i - d_j) a_ij
  // Krylov data for exp(-sW)|0>
  MatC basis_;
  VecR krylov_values_;
  Eigen::MatrixXd krylov_vectors_;
  // dense data for the off-diagonal cost
  HermitianEigen iw_eigs_;

  VecC propagate(double s) const;
};

struct OptimizeSResult {
  double s = 0.0;
  double cost = 0.0;
  int n_fval = 0;
};
OptimizeSResult optimize_s(const DbiState& state, const IsingDiagonalSpec& d,
                           CostKind cost, double s_max, int grid_points = 32);

struct OptimizeDResult {
  IsingDiagonalSpec d;
  double s = 0.0;
  double cost = 0.0;
  int n_fval = 0;
};
OptimizeDResult optimize_d(const DbiState& state, CostKind cost, int budget,
                           OptimizerEngine engine = OptimizerEngine::Powell,
                           double s_max = 0.05, std::uint64_t seed = 0);

// Initial diagonal-generator guess: single-Z projection of diag(current).
IsingDiagonalSpec default_d_guess(const DbiState& state);

DbiState dbi_step(const DbiState& state, const IsingDiagonalSpec& d, double s,
                  CostKind recorded_cost = CostKind::Energy);

// As dbi_step, but also hands back the rotation exp(s W) for callers that
// track the state-preparation unitary.
struct DbiStepDense {
  DbiState state;
  MatC u;
};
DbiStepDense dbi_step_dense(const DbiState& state, const IsingDiagonalSpec& d,
                            double s, CostKind recorded_cost = CostKind::Energy);

MatC brockett_euler(const MatC& a0, const MatC& n, double dl, int steps);
DenseOperator brockett_euler(const DenseOperator& a0, const DenseOperator& n,
                             double dl, int steps);

}  // namespace dbqa
