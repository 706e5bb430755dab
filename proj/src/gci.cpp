#include "dbqa/gci.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dbqa {
namespace {

struct Factor {
  bool on_a;   // exponent generator: true -> a, false -> b
  double c;    // factor is exp(i c G)
};

// Product formulas for V(a, b), leftmost factor first.
std::vector<Factor> variant_factors(GciVariant variant) {
  const double phi = kGciPhi;
  switch (variant) {
    case GciVariant::GC:
      return {{true, 1.0}, {false, 1.0}, {true, -1.0}, {false, -1.0}};
    case GciVariant::RGC:
      return {{false, 1.0}, {true, -1.0}, {false, -1.0}};
    case GciVariant::HOPF:
      return {{true, phi},      {false, phi}, {true, -1.0},
              {false, -(phi + 1.0)}, {true, 1.0 - phi}, {false, 1.0}};
    case GciVariant::RHOPF:
      return {{false, phi},
              {true, -1.0},
              {false, -(phi + 1.0)},
              {true, 1.0 - phi},
              {false, 1.0}};
  }
  throw std::logic_error("variant_factors: unknown variant");
}

VecC diag_phases(const VecR& d, double exponent_coef) {
  // exp(i c D) applied entrywise
  VecC out(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    out(i) = std::polar(1.0, exponent_coef * d(i));
  return out;
}

std::vector<Primitive> adjoint_sequence(const std::vector<Primitive>& seq) {
  std::vector<Primitive> out;
  out.reserve(seq.size());
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    Primitive p = *it;
    switch (p.kind) {
      case PrimKind::H0Evolution:
      case PrimKind::DiagonalEvolution:
        p.t = -p.t;
        break;
      case PrimKind::WarmStart:
        p.kind = PrimKind::WarmStartInverse;
        break;
      case PrimKind::WarmStartInverse:
        p.kind = PrimKind::WarmStart;
        break;
    }
    out.push_back(std::move(p));
  }
  return out;
}

double spec_max_abs(const IsingDiagonalSpec& d) {
  double m = 0.0;
  if (d.alpha.size() > 0) m = std::max(m, d.alpha.cwiseAbs().maxCoeff());
  if (d.beta.size() > 0) m = std::max(m, d.beta.cwiseAbs().maxCoeff());
  return m;
}

// Merge neighbors and cancel Q Q^dag pairs until a fixed point.
void simplify(std::vector<Primitive>& seq) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Primitive> out;
    out.reserve(seq.size());
    for (auto& p : seq) {
      if (!out.empty()) {
        Primitive& last = out.back();
        const bool qq = (last.kind == PrimKind::WarmStart &&
                         p.kind == PrimKind::WarmStartInverse) ||
                        (last.kind == PrimKind::WarmStartInverse &&
                         p.kind == PrimKind::WarmStart);
        if (qq) {
          out.pop_back();
          changed = true;
          continue;
        }
        if (last.kind == PrimKind::H0Evolution && p.kind == PrimKind::H0Evolution) {
          last.t += p.t;
          changed = true;
          if (std::abs(last.t) < 1e-14) out.pop_back();
          continue;
        }
        if (last.kind == PrimKind::DiagonalEvolution &&
            p.kind == PrimKind::DiagonalEvolution) {
          IsingDiagonalSpec merged = IsingDiagonalSpec::zero(
              static_cast<int>(last.d.alpha.size()));
          merged.alpha = last.t * last.d.alpha + p.t * p.d.alpha;
          merged.beta = last.t * last.d.beta + p.t * p.d.beta;
          last.d = std::move(merged);
          last.t = 1.0;
          changed = true;
          if (spec_max_abs(last.d) < 1e-14) out.pop_back();
          continue;
        }
      }
      out.push_back(p);
    }
    seq.swap(out);
  }
}

}  // namespace

void GciPlan::validate() const {
  if (k() > 3) throw std::invalid_argument("GciPlan: at most 3 steps supported");
  if (warm.rows() != warm.cols() ||
      warm.rows() != static_cast<Eigen::Index>(dim_of(n_qubits)))
    throw std::invalid_argument("GciPlan: warm-start dimension mismatch");
  for (const auto& st : steps) {
    if (st.r < 0.0) throw std::invalid_argument("GciPlan: r must be >= 0");
    if (st.d.alpha.size() != n_qubits)
      throw std::invalid_argument("GciPlan: diagonal spec size mismatch");
  }
}

MatC gc_unitary(GciVariant variant, const MatC& a, const MatC& b) {
  if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
    throw std::invalid_argument("gc_unitary: dimension mismatch");
  const HermitianEigen ea = hermitian_eigs(a);
  const HermitianEigen eb = hermitian_eigs(b);
  MatC v = MatC::Identity(a.rows(), a.cols());
  for (const Factor& f : variant_factors(variant)) {
    // exp(i c G) = expm_from_eigs(eigs(G), -c)
    v = v * expm_from_eigs(f.on_a ? ea : eb, -f.c);
  }
  return v;
}

MatC gci_rotation(GciVariant variant, const MatC& a_k, const VecR& d_diag,
                  double r) {
  const HermitianEigen ea = hermitian_eigs(a_k);
  MatC v = MatC::Identity(a_k.rows(), a_k.cols());
  for (const Factor& f : variant_factors(variant)) {
    if (f.on_a) {
      // exp(i c r A_k)
      v = v * expm_from_eigs(ea, -f.c * r);
    } else {
      // exp(i c (-r D)) = columnwise phases
      const VecC ph = diag_phases(d_diag, -f.c * r);
      for (Eigen::Index j = 0; j < v.cols(); ++j) v.col(j) *= ph(j);
    }
  }
  return v;
}

DenseOperator gci_step(GciVariant variant, const DenseOperator& a_k,
                       const IsingDiagonalSpec& d, double r) {
  if (!a_k.hermitian) throw std::invalid_argument("gci_step: a_k not Hermitian");
  if (r == 0.0) return a_k;
  const MatC v = gci_rotation(variant, a_k.matrix, ising_diagonal_entries(d), r);
  return DenseOperator(a_k.n_qubits, v.adjoint() * a_k.matrix * v, true);
}

DenseOperator gci_step(const GciPlan& plan, int step_index,
                       const DenseOperator& a_k) {
  if (step_index < 0 || step_index >= plan.k())
    throw std::invalid_argument("gci_step: step index out of range");
  const GciStepParams& st = plan.steps[static_cast<std::size_t>(step_index)];
  return gci_step(st.variant, a_k, st.d, st.r);
}

PrimitiveSequence unfold(const GciPlan& plan) {
  plan.validate();
  // seq_u holds the expansion of U_j = V_0 ... V_{j-1} as we go.
  std::vector<Primitive> seq_u;
  std::vector<Primitive> full;
  full.push_back(Primitive::q());
  for (const GciStepParams& st : plan.steps) {
    std::vector<Primitive> seq_v;
    const std::vector<Primitive> u_dag = adjoint_sequence(seq_u);
    for (const Factor& f : variant_factors(st.variant)) {
      if (f.on_a) {
        // exp(i c r A_j) = U_j^dag Q^dag exp(i c r H0) Q U_j,
        // and exp(i c r H0) = H0Evolution(-c r).
        seq_v.insert(seq_v.end(), u_dag.begin(), u_dag.end());
        seq_v.push_back(Primitive::q_dag());
        seq_v.push_back(Primitive::h0(-f.c * st.r));
        seq_v.push_back(Primitive::q());
        seq_v.insert(seq_v.end(), seq_u.begin(), seq_u.end());
      } else {
        // exp(i c (-r D)) = DiagonalEvolution(d, c r)
        seq_v.push_back(Primitive::diag(st.d, f.c * st.r));
      }
    }
    full.insert(full.end(), seq_v.begin(), seq_v.end());
    seq_u.insert(seq_u.end(), seq_v.begin(), seq_v.end());
  }
  simplify(full);
  // A trailing diagonal evolution only contributes a global phase on |0...0>
  // ... on any computational basis state; mark it omissible for execution.
  if (!full.empty() && full.back().kind == PrimKind::DiagonalEvolution)
    full.back().omissible = true;
  PrimitiveSequence out;
  out.n_qubits = plan.n_qubits;
  out.factors = std::move(full);
  return out;
}

QueryCounts count_queries(const GciPlan& plan) {
  const PrimitiveSequence seq = unfold(plan);
  QueryCounts c;
  for (const Primitive& p : seq.factors) {
    switch (p.kind) {
      case PrimKind::H0Evolution:
        ++c.h0_queries;
        break;
      case PrimKind::DiagonalEvolution:
        ++c.d_evolutions;
        break;
      case PrimKind::WarmStart:
      case PrimKind::WarmStartInverse:
        ++c.warmstart_calls;
        break;
    }
  }
  return c;
}

MatC sequence_unitary(const PrimitiveSequence& seq, const HermitianEigen& h0_eigs,
                      const MatC& q, bool omit_flagged) {
  const Eigen::Index dim = q.rows();
  MatC u = MatC::Identity(dim, dim);
  for (const Primitive& p : seq.factors) {
    if (omit_flagged && p.omissible) continue;
    switch (p.kind) {
      case PrimKind::H0Evolution:
        u = u * expm_from_eigs(h0_eigs, p.t);
        break;
      case PrimKind::DiagonalEvolution: {
        const VecR d = ising_diagonal_entries(p.d);
        const VecC ph = diag_phases(d, -p.t);
        for (Eigen::Index j = 0; j < u.cols(); ++j) u.col(j) *= ph(j);
        break;
      }
      case PrimKind::WarmStart:
        u = u * q;
        break;
      case PrimKind::WarmStartInverse:
        u = u * q.adjoint();
        break;
    }
  }
  return u;
}

MatC plan_unitary(const GciPlan& plan, const MatC& h0) {
  plan.validate();
  MatC a = plan.warm.adjoint() * h0 * plan.warm;
  MatC u = plan.warm;
  for (const GciStepParams& st : plan.steps) {
    const MatC v = gci_rotation(st.variant, a, ising_diagonal_entries(st.d), st.r);
    u = u * v;
    a = (v.adjoint() * a * v).eval();
  }
  return u;
}

OptimizeGciResult optimize_gci_step(const DenseOperator& a_k, GciVariant variant,
                                    CostKind cost, int budget,
                                    OptimizerEngine engine, double r_max,
                                    std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("optimize_gci_step: budget >= 1");
  const int L = a_k.n_qubits;
  DbiState shim(a_k);  // reuse the single-Z diagonal projection
  const IsingDiagonalSpec guess = default_d_guess(shim);

  if (offdiag_hs_norm(a_k.matrix) < 1e-12) {
    OptimizeGciResult res;
    res.r = 0.0;
    res.d = guess;
    res.cost = dbr_cost(cost, a_k.matrix);
    res.n_fval = 0;
    return res;
  }

  const HermitianEigen ea = hermitian_eigs(a_k.matrix);
  const std::vector<Factor> factors = variant_factors(variant);
  int n_fval = 0;

  // phi = V(r A_k, -r D) |0>, applying factors right to left.
  auto state_of = [&](double r, const VecR& d_diag) -> VecC {
    VecC v = VecC::Zero(a_k.matrix.rows());
    v(0) = 1.0;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      if (it->on_a) {
        VecC w = ea.vectors.adjoint() * v;
        for (Eigen::Index i = 0; i < w.size(); ++i)
          w(i) *= std::polar(1.0, it->c * r * ea.values(i));
        v = ea.vectors * w;
      } else {
        for (Eigen::Index i = 0; i < v.size(); ++i)
          v(i) *= std::polar(1.0, -it->c * r * d_diag(i));
      }
    }
    return v;
  };

  auto eval = [&](double r, const VecR& d_diag) -> double {
    ++n_fval;
    if (cost == CostKind::OffdiagHs) {
      const MatC v = gci_rotation(variant, a_k.matrix, d_diag, r);
      return offdiag_hs_norm(v.adjoint() * a_k.matrix * v);
    }
    const VecC phi = state_of(r, d_diag);
    const VecC aphi = a_k.matrix * phi;
    const double mean = phi.dot(aphi).real();
    if (cost == CostKind::Energy) return mean;
    return std::sqrt(std::max(0.0, aphi.squaredNorm() - mean * mean));
  };

  const double cost_at_zero = dbr_cost(cost, a_k.matrix);
  const VecR guess_diag = ising_diagonal_entries(guess);

  // Seed r with a line search at the initial diagonal guess.
  ScalarMinResult r_seed = minimize_scalar(
      [&](double r) { return eval(r, guess_diag); }, 0.0, r_max, 16, 1e-4);

  VecR x0(2 * L + 1);
  x0(0) = r_seed.x;
  x0.segment(1, L) = guess.alpha;
  x0.tail(L) = guess.beta;

  auto objective = [&](const VecR& x) -> double {
    const double r = std::clamp(x(0), 0.0, r_max);
    double penalty = 0.0;
    if (x(0) < 0.0) penalty = 1e3 * x(0) * x(0);
    if (x(0) > r_max) penalty = 1e3 * (x(0) - r_max) * (x(0) - r_max);
    IsingDiagonalSpec spec = IsingDiagonalSpec::zero(L);
    spec.alpha = x.segment(1, L);
    spec.beta = x.tail(L);
    return eval(r, ising_diagonal_entries(spec)) + penalty;
  };

  VecR best_x = x0;
  double best_val = r_seed.value;
  if (budget > n_fval) {
    VectorMinResult res;
    if (engine == OptimizerEngine::Powell) {
      res = minimize_powell(objective, x0, 0.4, budget - n_fval, 1e-5);
    } else {
      std::mt19937_64 rng(seed);
      res = minimize_cmaes(objective, x0, 0.2, budget - n_fval, rng);
    }
    if (res.value < best_val) {
      best_x = res.x;
      best_val = res.value;
    }
  }

  OptimizeGciResult out;
  out.n_fval = n_fval;
  if (best_val >= cost_at_zero) {
    out.r = 0.0;
    out.d = guess;
    out.cost = cost_at_zero;
    return out;
  }
  out.r = std::clamp(best_x(0), 0.0, r_max);
  out.d = IsingDiagonalSpec::zero(L);
  out.d.alpha = best_x.segment(1, L);
  out.d.beta = best_x.tail(L);
  out.cost = best_val;
  return out;
}

}  // namespace dbqa
