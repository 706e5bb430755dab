#pragma once

#include "dbqa/dbi.hpp"
#include "dbqa/hamiltonians.hpp"
#include "dbqa/optimize.hpp"
#include "dbqa/qcore.hpp"

namespace dbqa {

enum class GciVariant { GC, RGC, HOPF, RHOPF };

// Golden-ratio conjugate used by the higher-order product formulas.
inline constexpr double kGciPhi = 0.61803398874989484820;

struct GciStepParams {
  double r = 0.0;  // r_k = sqrt(s_k)
  IsingDiagonalSpec d;
  GciVariant variant = GciVariant::RHOPF;
};

struct GciPlan {
  MatC warm;  // dense warm-start unitary Q
  int n_qubits = 0;
  std::vector<GciStepParams> steps;

  int k() const { return static_cast<int>(steps.size()); }
  void validate() const;
};

enum class PrimKind { H0Evolution, DiagonalEvolution, WarmStart, WarmStartInverse };

// One factor of a state-preparation unitary, in matrix-product order.
// H0Evolution(t) = exp(-i t H0); DiagonalEvolution(d, t) = exp(-i t D(d)).
struct Primitive {
  PrimKind kind;
  double t = 0.0;
  IsingDiagonalSpec d;
  bool omissible = false;  // trailing diagonal: global phase on |0>

  static Primitive h0(double t) { return {PrimKind::H0Evolution, t, {}, false}; }
  static Primitive diag(IsingDiagonalSpec spec, double t) {
    return {PrimKind::DiagonalEvolution, t, std::move(spec), false};
  }
  static Primitive q() { return {PrimKind::WarmStart, 0.0, {}, false}; }
  static Primitive q_dag() { return {PrimKind::WarmStartInverse, 0.0, {}, false}; }
};

struct PrimitiveSequence {
  int n_qubits = 0;
  std::vector<Primitive> factors;  // leftmost factor first
};

struct QueryCounts {
  int h0_queries = 0;
  int d_evolutions = 0;
  int warmstart_calls = 0;
};

// Product of the variant's exponentials for Hermitian a, b.
MatC gc_unitary(GciVariant variant, const MatC& a, const MatC& b);

// The rotation unitary of one step: V(r A_k, -r D).
MatC gci_rotation(GciVariant variant, const MatC& a_k, const VecR& d_diag, double r);

DenseOperator gci_step(GciVariant variant, const DenseOperator& a_k,
                       const IsingDiagonalSpec& d, double r);
DenseOperator gci_step(const GciPlan& plan, int step_index, const DenseOperator& a_k);

PrimitiveSequence unfold(const GciPlan& plan);
QueryCounts count_queries(const GciPlan& plan);

// Dense product of a primitive sequence (test/verification path).
MatC sequence_unitary(const PrimitiveSequence& seq, const HermitianEigen& h0_eigs,
                      const MatC& q, bool omit_flagged = false);

// Dense state-preparation unitary Q V_1 ... V_k evaluated from operator
// recursion (reference for the unfold equality check).
MatC plan_unitary(const GciPlan& plan, const MatC& h0);

struct OptimizeGciResult {
  double r = 0.0;
  IsingDiagonalSpec d;
  double cost = 0.0;
  int n_fval = 0;
};

OptimizeGciResult optimize_gci_step(const DenseOperator& a_k, GciVariant variant,
                                    CostKind cost, int budget,
                                    OptimizerEngine engine = OptimizerEngine::Powell,
                                    double r_max = 0.5, std::uint64_t seed = 0);

}  // namespace dbqa
