#include "dbqa/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace dbqa {

std::int64_t CostLedger::cumulative() const {
  return vqe_cost(k, p, e, n_cz_circuit) + total_cost(0, n_fval, n_cz_dbqa);
}

std::int64_t vqe_cost(std::int64_t k, std::int64_t p, std::int64_t e,
                      std::int64_t n_cz) {
  if (k < 0 || p < 0 || e < 0 || n_cz < 0)
    throw std::invalid_argument("vqe_cost: negative input");
  return k * p * e * n_cz;
}

double gci_depth(double warm_depth, double trotter_depth, double diag_depth,
                 int steps, GciVariant variant) {
  if (variant != GciVariant::RHOPF)
    throw std::invalid_argument("gci_depth: only the RHOPF recursion is tabulated");
  if (steps < 0 || steps > 3)
    throw std::invalid_argument("gci_depth: steps must be in [0, 3]");
  // One A-conjugation in step j costs 2 (depth of U_j) + (2 d_Q + d_T) for
  // the wrapped H0 query; RHOPF has two A-factors and three D-factors.
  const double query = 2.0 * warm_depth + trotter_depth;
  double total = warm_depth;
  double u_depth = 0.0;  // depth of U_j = V_0 ... V_{j-1}
  for (int j = 0; j < steps; ++j) {
    const double c_j = 3.0 * diag_depth + 2.0 * (2.0 * u_depth + query);
    total += c_j;
    u_depth += c_j;
  }
  return total;
}

std::int64_t total_cost(std::int64_t vqe, std::int64_t n_fval,
                        std::int64_t n_cz_dbqa) {
  if (vqe < 0 || n_fval < 0 || n_cz_dbqa < 0)
    throw std::invalid_argument("total_cost: negative input");
  return vqe + n_fval * n_cz_dbqa;
}

DepthBudget depth_equivalent(std::int64_t N, double p_e, double p_e_prime) {
  if (N < 0) throw std::invalid_argument("depth_equivalent: negative N");
  if (p_e <= 0.0 || p_e >= 1.0 || p_e_prime <= 0.0 || p_e_prime >= 1.0)
    throw std::invalid_argument("depth_equivalent: rates must lie in (0, 1)");
  DepthBudget out;
  out.N = N;
  out.p_e = p_e;
  out.p_e_prime = p_e_prime;
  out.success = std::pow(1.0 - p_e, static_cast<double>(N));
  out.N_prime = static_cast<std::int64_t>(std::llround(
      static_cast<double>(N) * std::log1p(-p_e) / std::log1p(-p_e_prime)));
  return out;
}

}  // namespace dbqa
