#pragma once

#include <cstdint>

#include "dbqa/gci.hpp"

namespace dbqa {

struct CostLedger {
  std::int64_t n_cz_circuit = 0;  // two-qubit gates in the current circuit
  int L = 0;
  std::int64_t k = 0;  // parameter-shift evaluations per parameter
  std::int64_t p = 0;  // parameter count
  std::int64_t e = 0;  // training epochs
  std::int64_t n_fval = 0;
  std::int64_t n_cz_dbqa = 0;  // two-qubit gates per optimizer evaluation

  double depth_per_qubit() const {
    return static_cast<double>(n_cz_circuit) / static_cast<double>(L);
  }
  std::int64_t cumulative() const;
};

std::int64_t vqe_cost(std::int64_t k, std::int64_t p, std::int64_t e,
                      std::int64_t n_cz);

// Per-qubit two-qubit-gate depth of the unfolded k-step RHOPF circuit.
double gci_depth(double warm_depth, double trotter_depth, double diag_depth,
                 int steps, GciVariant variant = GciVariant::RHOPF);

std::int64_t total_cost(std::int64_t vqe, std::int64_t n_fval,
                        std::int64_t n_cz_dbqa);

struct DepthBudget {
  std::int64_t N = 0;
  double p_e = 0.0;
  double p_e_prime = 0.0;
  double success = 0.0;
  std::int64_t N_prime = 0;
};

DepthBudget depth_equivalent(std::int64_t N, double p_e, double p_e_prime);

}  // namespace dbqa
