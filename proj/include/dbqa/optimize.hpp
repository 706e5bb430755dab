#pragma once

#include <functional>
#include <random>

#include "dbqa/qcore.hpp"

namespace dbqa {

using ScalarFn = std::function<double(double)>;
using VectorFn = std::function<double(const VecR&)>;

// Minimize a smooth 1-D function on [lo, hi]: coarse grid scan followed by
// golden-section refinement around the best grid point. Ties prefer the
// smaller argument.
struct ScalarMinResult {
  double x = 0.0;
  double value = 0.0;
  int n_fval = 0;
};
ScalarMinResult minimize_scalar(const ScalarFn& f, double lo, double hi,
                                int grid_points = 32, double x_tol = 1e-6);

enum class OptimizerEngine { Powell, CmaEs };

struct VectorMinResult {
  VecR x;
  double value = 0.0;
  int n_fval = 0;
};

// Powell-style coordinate descent: repeated 1-D line minimizations along
// coordinate directions. Deterministic.
VectorMinResult minimize_powell(const VectorFn& f, VecR x0, double span,
                                int budget, double x_tol = 1e-6);

// Small (mu/mu_w, lambda) CMA-ES with standard default weights.
VectorMinResult minimize_cmaes(const VectorFn& f, VecR x0, double sigma0,
                               int budget, std::mt19937_64& rng);

}  // namespace dbqa
