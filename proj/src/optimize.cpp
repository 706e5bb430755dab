#include "dbqa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dbqa {

ScalarMinResult minimize_scalar(const ScalarFn& f, double lo, double hi,
                                int grid_points, double x_tol) {
  if (!(hi > lo)) throw std::invalid_argument("minimize_scalar: empty interval");
  ScalarMinResult res;
  double best_x = lo, best_v = f(lo);
  res.n_fval = 1;
  for (int i = 1; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * i / (grid_points - 1);
    const double v = f(x);
    ++res.n_fval;
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  const double step = (hi - lo) / (grid_points - 1);
  double a = std::max(lo, best_x - step), b = std::min(hi, best_x + step);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  res.n_fval += 2;
  while (b - a > x_tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    ++res.n_fval;
  }
  const double xm = 0.5 * (a + b);
  const double fm = f(xm);
  ++res.n_fval;
  if (fm < best_v || (fm == best_v && xm < best_x)) {
    best_v = fm;
    best_x = xm;
  }
  res.x = best_x;
  res.value = best_v;
  return res;
}

VectorMinResult minimize_powell(const VectorFn& f, VecR x0, double span,
                                int budget, double x_tol) {
  VectorMinResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  res.n_fval = 1;
  const int n = static_cast<int>(res.x.size());
  double radius = span;
  while (res.n_fval < budget) {
    const double before = res.value;
    for (int i = 0; i < n && res.n_fval < budget; ++i) {
      const int remaining = budget - res.n_fval;
      const int pts = std::clamp(remaining, 3, 7);
      VecR x = res.x;
      auto line = [&](double t) {
        x[i] = res.x[i] + t;
        return f(x);
      };
      ScalarMinResult lr = minimize_scalar(line, -radius, radius, pts, std::max(x_tol, radius * 1e-3));
      res.n_fval += lr.n_fval;
      if (lr.value < res.value) {
        res.value = lr.value;
        res.x[i] += lr.x;
      }
    }
    if (before - res.value < 1e-12) {
      radius *= 0.5;
      if (radius < x_tol) break;
    }
  }
  return res;
}

VectorMinResult minimize_cmaes(const VectorFn& f, VecR x0, double sigma0,
                               int budget, std::mt19937_64& rng) {
  const int n = static_cast<int>(x0.size());
  const int lambda = 4 + static_cast<int>(3 * std::log(n));
  const int mu = lambda / 2;
  VecR weights(mu);
  for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  weights /= weights.sum();
  const double mueff = 1.0 / weights.squaredNorm();
  const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
  const double cs = (mueff + 2.0) / (n + mueff + 5.0);
  const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
  const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) /
                                            ((n + 2.0) * (n + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(double(n)) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  VecR mean = x0;
  double sigma = sigma0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  VecR pc = VecR::Zero(n), ps = VecR::Zero(n);
  std::normal_distribution<double> normal(0.0, 1.0);

  VectorMinResult res;
  res.x = x0;
  res.value = f(x0);
  res.n_fval = 1;

  int eig_age = 0;
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  VecR D = VecR::Ones(n);

  while (res.n_fval + lambda <= budget) {
    if (eig_age++ % std::max(1, n / 2) == 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
      B = es.eigenvectors();
      D = es.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
    }
    std::vector<VecR> zs(lambda), xs(lambda);
    std::vector<std::pair<double, int>> ranked(lambda);
    for (int k = 0; k < lambda; ++k) {
      VecR z(n);
      for (int i = 0; i < n; ++i) z[i] = normal(rng);
      zs[k] = z;
      xs[k] = mean + sigma * (B * (D.asDiagonal() * z));
      ranked[k] = {f(xs[k]), k};
      ++res.n_fval;
    }
    std::sort(ranked.begin(), ranked.end());
    if (ranked[0].first < res.value) {
      res.value = ranked[0].first;
      res.x = xs[ranked[0].second];
    }
    VecR old_mean = mean;
    mean.setZero();
    VecR zw = VecR::Zero(n);
    for (int i = 0; i < mu; ++i) {
      mean += weights[i] * xs[ranked[i].second];
      zw += weights[i] * zs[ranked[i].second];
    }
    ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (B * zw);
    const bool hsig = ps.norm() / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * eig_age)) / chi_n <
                      1.4 + 2.0 / (n + 1.0);
    pc = (1.0 - cc) * pc;
    if (hsig)
      pc += std::sqrt(cc * (2.0 - cc) * mueff) * (mean - old_mean) / sigma;
    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      VecR y = (xs[ranked[i].second] - old_mean) / sigma;
      rank_mu += weights[i] * y * y.transpose();
    }
    C = (1.0 - c1 - cmu) * C + c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * C) +
        cmu * rank_mu;
    sigma *= std::exp((cs / damps) * (ps.norm() / chi_n - 1.0));
    if (!std::isfinite(sigma) || sigma < 1e-12) break;
  }
  return res;
}

}  // namespace dbqa
