#include "dbqa/compile.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dbqa {
namespace {

using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using V4 = Eigen::Vector4cd;

constexpr double kPruneTol = 1e-12;
const double kSqrtHalf = std::sqrt(0.5);

M2 pauli_x() { return (M2() << 0, 1, 1, 0).finished(); }
M2 pauli_y() { return (M2() << 0, cxd(0, -1), cxd(0, 1), 0).finished(); }
M2 pauli_z() { return (M2() << 1, 0, 0, -1).finished(); }
M2 hadamard() {
  return (M2() << kSqrtHalf, kSqrtHalf, kSqrtHalf, -kSqrtHalf).finished();
}

// kron with qubit 0 (=g0) as the low bit of the 4x4 index
M4 kron2(const M2& g0, const M2& g1) {
  M4 out;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int i0 = 0; i0 < 2; ++i0)
      for (int j1 = 0; j1 < 2; ++j1)
        for (int j0 = 0; j0 < 2; ++j0)
          out(i0 + 2 * i1, j0 + 2 * j1) = g1(i1, j1) * g0(i0, j0);
  return out;
}

M4 cnot_mat(int ctrl, int tgt) {
  M4 out = M4::Zero();
  for (int i = 0; i < 4; ++i) {
    int b[2] = {i & 1, (i >> 1) & 1};
    if (b[ctrl]) b[tgt] ^= 1;
    out(b[0] + 2 * b[1], i) = 1.0;
  }
  return out;
}

// g = phase * Rz(t1) Ry(t2) Rz(t3)
struct Zyz {
  double t1, t2, t3;
};
Zyz zyz(const M2& g_in) {
  M2 g = g_in;
  const cxd det = g.determinant();
  g /= std::sqrt(det);
  Zyz out{};
  out.t2 = 2.0 * std::atan2(std::abs(g(1, 0)), std::abs(g(0, 0)));
  const double a00 = std::abs(g(0, 0));
  const double a10 = std::abs(g(1, 0));
  if (a00 > 1e-12 && a10 > 1e-12) {
    out.t1 = -std::arg(g(0, 0)) + std::arg(g(1, 0));
    out.t3 = -std::arg(g(0, 0)) - std::arg(g(1, 0));
  } else if (a00 > 1e-12) {
    out.t1 = -2.0 * std::arg(g(0, 0));
    out.t3 = 0.0;
  } else {
    out.t1 = 2.0 * std::arg(g(1, 0));
    out.t3 = 0.0;
  }
  return out;
}

struct KakResult {
  double a, b, c;
  M2 a1, a0, b1, b0;  // U ~ (a1 x a0) Ucan (b1 x b0) up to phase
};

M4 magic_basis() {
  M4 m;
  m << 1, 0, 0, cxd(0, 1),
       0, cxd(0, 1), 1, 0,
       0, cxd(0, 1), -1, 0,
       1, 0, 0, cxd(0, -1);
  return m * kSqrtHalf;
}

// Split a local 4x4 product into its two single-qubit factors.
void factor_local(const M4& m, M2* g1, M2* g0) {
  M4 r;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i0 = 0; i0 < 2; ++i0)
        for (int j0 = 0; j0 < 2; ++j0)
          r(2 * i1 + j1, 2 * i0 + j0) = m(i0 + 2 * i1, j0 + 2 * j1);
  Eigen::JacobiSVD<M4> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(1) > 1e-8)
    throw std::runtime_error("factor_local: operator is not a local product");
  M2 f1, f0;
  f1 << svd.matrixU()(0, 0), svd.matrixU()(1, 0), svd.matrixU()(2, 0),
      svd.matrixU()(3, 0);
  const V4 v = svd.matrixV().col(0).conjugate();
  f0 << v(0), v(1), v(2), v(3);
  auto polar = [](const M2& g) -> M2 {
    Eigen::JacobiSVD<M2> s(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return s.matrixU() * s.matrixV().adjoint();
  };
  *g1 = polar(f1);
  *g0 = polar(f0);
}

KakResult kak(const M4& u_in) {
  const M4 m = magic_basis();
  const cxd det = u_in.determinant();
  const cxd alpha = std::pow(det, 0.25);
  const M4 u = u_in / alpha;
  const M4 v = m.adjoint() * u * m;
  const M4 w = v.transpose() * v;
  const Eigen::Matrix4d wr = w.real();
  const Eigen::Matrix4d wi = w.imag();

  const double lambdas[] = {0.0, 0.618, 1.31, 2.71, 0.1234, 3.91, 0.777};
  Eigen::Matrix4d p;
  Eigen::Vector4d theta;
  Eigen::Matrix4d o1;
  bool ok = false;
  for (double lam : lambdas) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(wr + lam * wi);
    p = es.eigenvectors();
    for (int j = 0; j < 4; ++j) {
      const cxd d = (p.col(j).cast<cxd>().transpose() * w * p.col(j).cast<cxd>())(0);
      theta(j) = 0.5 * std::arg(d);
    }
    M4 o1c = v * p.cast<cxd>();
    for (int j = 0; j < 4; ++j) o1c.col(j) *= std::polar(1.0, -theta(j));
    if (o1c.imag().cwiseAbs().maxCoeff() > 1e-8) continue;
    o1 = o1c.real();
    // reconstruction check
    M4 rec = M4::Zero();
    for (int j = 0; j < 4; ++j)
      rec += std::polar(1.0, theta(j)) * (o1.col(j).cast<cxd>() *
                                          p.col(j).cast<cxd>().transpose());
    if ((rec - v).cwiseAbs().maxCoeff() < 1e-8) {
      ok = true;
      break;
    }
  }
  if (!ok) throw std::runtime_error("kak: joint diagonalization failed");

  if (p.determinant() < 0) {
    p.col(0) *= -1;
    o1.col(0) *= -1;
  }
  if (o1.determinant() < 0) {
    o1.col(0) *= -1;
    theta(0) += std::numbers::pi;
  }

  // theta_j = -(a sxx + b syy + c szz)_j + g
  const M4 xx = kron2(pauli_x(), pauli_x());
  const M4 yy = kron2(pauli_y(), pauli_y());
  const M4 zz = kron2(pauli_z(), pauli_z());
  Eigen::Matrix4d sys;
  const M4 dx = m.adjoint() * xx * m;
  const M4 dy = m.adjoint() * yy * m;
  const M4 dz = m.adjoint() * zz * m;
  for (int j = 0; j < 4; ++j) {
    sys(j, 0) = -dx(j, j).real();
    sys(j, 1) = -dy(j, j).real();
    sys(j, 2) = -dz(j, j).real();
    sys(j, 3) = 1.0;
  }
  const Eigen::Vector4d sol = sys.partialPivLu().solve(theta);

  KakResult out;
  out.a = sol(0);
  out.b = sol(1);
  out.c = sol(2);
  factor_local(m * o1.cast<cxd>() * m.adjoint(), &out.a1, &out.a0);
  factor_local(m * p.transpose().cast<cxd>() * m.adjoint(), &out.b1, &out.b0);
  return out;
}

// Builder mapping the block's internal qubits {0 -> q1, 1 -> q2}.
struct BlockEmitter {
  CircuitIR& ir;
  int q1, q2;

  int map(int q) const { return q == 0 ? q1 : q2; }
  void rot(GateKind kind, int q, double t) const {
    if (std::abs(t) < kPruneTol) return;
    ir.push({kind, map(q), -1, t});
  }
  void cn(int c, int t) const { ir.push(Gate::cnot(map(c), map(t))); }
  void local(const M2& g, int q) const {
    const Zyz z = zyz(g);
    rot(GateKind::RZ, q, z.t3);
    rot(GateKind::RY, q, z.t2);
    rot(GateKind::RZ, q, z.t1);
  }
};

// Fixed locals of the canonical template (Cliffords found once by a
// numerical factorization of CNOT(0,1) H_1 CNOT(1,0)).
void emit_ucan(const BlockEmitter& em, double a, double b, double c) {
  const M2 s_gate = (M2() << 1, 0, 0, cxd(0, 1)).finished();
  const M2 n1 = (M2() << -1, 0, 0, cxd(0, -1)).finished();
  const M2 n0 = (M2() << -1, 0, 0, cxd(0, 1)).finished();
  // time order = rightmost matrix factor first
  em.local(n0, 0);
  em.local(n1, 1);
  em.cn(1, 0);
  em.local(s_gate, 0);
  em.local(hadamard(), 1);
  em.rot(GateKind::RZ, 1, -2.0 * b);
  em.cn(0, 1);
  em.local(hadamard(), 1);
  em.rot(GateKind::RZ, 0, 2.0 * c);
  em.rot(GateKind::RX, 1, 2.0 * a);
  em.cn(1, 0);
}

M4 expm_bond(const M4& h, double t) {
  Eigen::SelfAdjointEigenSolver<M4> es(h);
  M4 out = M4::Zero();
  for (int j = 0; j < 4; ++j)
    out += std::polar(1.0, -t * es.eigenvalues()(j)) *
           (es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint());
  return out;
}

M2 pauli_of(char op) {
  switch (op) {
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
  }
  throw std::logic_error("pauli_of: bad label");
}

}  // namespace

CircuitIR compile_two_qubit_block(const MatC& u, int q1, int q2, int n_qubits) {
  if (u.rows() != 4 || u.cols() != 4)
    throw std::invalid_argument("compile_two_qubit_block: need a 4x4 matrix");
  if (!is_unitary(u, 1e-10))
    throw std::invalid_argument("compile_two_qubit_block: input not unitary");
  CircuitIR ir(n_qubits);
  const cxd ph = u(0, 0);
  if (std::abs(std::abs(ph) - 1.0) < 1e-10 &&
      (u - ph * MatC::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10)
    return ir;  // identity up to phase

  const KakResult k = kak(M4(u));
  BlockEmitter em{ir, q1, q2};
  if (std::max({std::abs(k.a), std::abs(k.b), std::abs(k.c)}) < 1e-12) {
    em.local(k.a0 * k.b0, 0);
    em.local(k.a1 * k.b1, 1);
    return ir;
  }
  em.local(k.b0, 0);
  em.local(k.b1, 1);
  emit_ucan(em, k.a, k.b, k.c);
  em.local(k.a0, 0);
  em.local(k.a1, 1);
  return ir;
}

CircuitIR trotterize(const PauliSum& h, const TrotterPlan& plan) {
  if (plan.M < 1) throw std::invalid_argument("trotterize: M must be >= 1");
  if (plan.order != 1 && plan.order != 2)
    throw std::invalid_argument("trotterize: order must be 1 or 2");
  const int L = h.n_qubits;

  std::map<std::pair<int, int>, M4> bonds;
  std::vector<std::pair<int, M2>> single_terms;
  for (const PauliTerm& term : h.terms) {
    std::vector<int> support;
    for (int q = 0; q < L; ++q)
      if (term.ops[static_cast<std::size_t>(q)] != 'I') support.push_back(q);
    if (support.empty()) continue;  // constant: global phase only
    if (support.size() > 2)
      throw std::invalid_argument("trotterize: term is not 2-local: " + term.ops);
    if (support.size() == 1) {
      single_terms.emplace_back(
          support[0],
          M2(term.coefficient *
             pauli_of(term.ops[static_cast<std::size_t>(support[0])])));
      continue;
    }
    const int i = support[0], j = support[1];
    auto& mat = bonds.try_emplace({i, j}, M4::Zero()).first->second;
    // bond matrix convention: lower qubit index = low bit
    mat += term.coefficient *
           kron2(pauli_of(term.ops[static_cast<std::size_t>(i)]),
                 pauli_of(term.ops[static_cast<std::size_t>(j)]));
  }
  for (const auto& [q, mat] : single_terms) {
    bool attached = false;
    for (auto& [key, bond] : bonds) {
      if (key.first == q || key.second == q) {
        bond += (key.first == q) ? kron2(mat, M2::Identity())
                                 : kron2(M2::Identity(), mat);
        attached = true;
        break;
      }
    }
    if (!attached)
      throw std::invalid_argument("trotterize: single-qubit term on isolated qubit");
  }

  CircuitIR ir(L);
  auto emit_bond = [&](const std::pair<int, int>& key, const M4& mat, double t) {
    ir.append(compile_two_qubit_block(MatC(expm_bond(mat, t)), key.first,
                                      key.second, L));
  };

  if (plan.order == 1) {
    for (int m = 0; m < plan.M; ++m)
      for (const auto& [key, mat] : bonds) emit_bond(key, mat, plan.t / plan.M);
    return ir;
  }

  // order 2: split the nearest-neighbor ring into even- and odd-start bonds
  if (L % 2 != 0)
    throw std::invalid_argument("trotterize: order 2 requires even L");
  std::vector<std::pair<int, int>> even_set, odd_set;
  for (const auto& [key, mat] : bonds) {
    (void)mat;
    int start;
    if (key.second == key.first + 1)
      start = key.first;
    else if (key.first == 0 && key.second == L - 1)
      start = L - 1;
    else
      throw std::invalid_argument(
          "trotterize: order 2 requires a nearest-neighbor ring");
    (start % 2 == 0 ? even_set : odd_set).push_back(key);
  }
  const double dt = plan.t / plan.M;
  for (int m = 0; m < plan.M; ++m) {
    for (const auto& key : even_set) emit_bond(key, bonds.at(key), dt / 2.0);
    for (const auto& key : odd_set) emit_bond(key, bonds.at(key), dt);
    for (const auto& key : even_set) emit_bond(key, bonds.at(key), dt / 2.0);
  }
  return ir;
}

CircuitIR compile_diagonal_ising(const IsingDiagonalSpec& spec, double t) {
  const int L = spec.n_qubits();
  CircuitIR ir(L);
  for (int q = 0; q < L; ++q) {
    const double angle = 2.0 * t * spec.alpha(q);
    if (std::abs(angle) >= kPruneTol) ir.push(Gate::rz(q, angle));
  }
  for (int q = 0; q < L; ++q) {
    if (L < 2) break;
    const int partner = (q + 1) % L;
    if (partner == q) break;
    const double angle = 2.0 * t * spec.beta(q);
    if (std::abs(angle) < kPruneTol) continue;
    ir.push(Gate::cnot(q, partner));
    ir.push(Gate::rz(partner, angle));
    ir.push(Gate::cnot(q, partner));
  }
  return ir;
}

CircuitIR compile_tfim_bond(double B_a, double t, int q1, int q2, int n_qubits) {
  CircuitIR ir(n_qubits);
  const M2 h2 = pauli_x() + B_a * pauli_z();
  Eigen::SelfAdjointEigenSolver<M2> es(h2);
  M2 u = M2::Zero();
  for (int j = 0; j < 2; ++j)
    u += std::polar(1.0, -t * es.eigenvalues()(j)) *
         (es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint());
  const cxd ph = u(0, 0);
  if (std::abs(std::abs(ph) - 1.0) < 1e-12 &&
      (u - ph * M2::Identity()).cwiseAbs().maxCoeff() < 1e-12)
    return ir;  // t = 0 (up to phase)
  ir.push(Gate::cnot(q1, q2));
  const Zyz z = zyz(u);
  if (std::abs(z.t3) >= kPruneTol) ir.push(Gate::rz(q1, z.t3));
  if (std::abs(z.t2) >= kPruneTol) ir.push(Gate::ry(q1, z.t2));
  if (std::abs(z.t1) >= kPruneTol) ir.push(Gate::rz(q1, z.t1));
  ir.push(Gate::cnot(q1, q2));
  return ir;
}

std::string emit_qasm(const CircuitIR& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.n_qubits << "];\n";
  char buf[128];
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::CZ:
        out << "cz q[" << g.q1 << "],q[" << g.q2 << "];\n";
        break;
      case GateKind::CNOT:
        out << "cx q[" << g.q1 << "],q[" << g.q2 << "];\n";
        break;
      case GateKind::RX:
      case GateKind::RY:
      case GateKind::RZ: {
        const char* name = g.kind == GateKind::RX   ? "rx"
                           : g.kind == GateKind::RY ? "ry"
                                                    : "rz";
        std::snprintf(buf, sizeof(buf), "%s(%.17g) q[%d];\n", name, g.angle,
                      g.q1);
        out << buf;
        break;
      }
      case GateKind::X:
        out << "x q[" << g.q1 << "];\n";
        break;
      case GateKind::RBS:
        throw std::invalid_argument("emit_qasm: lower RBS gates first");
    }
  }
  return out.str();
}

CircuitIR parse_qasm(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CircuitIR ir(0);
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("OPENQASM", 0) == 0 ||
        line.rfind("include", 0) == 0)
      continue;
    int a, b;
    double t;
    if (std::sscanf(line.c_str(), "qreg q[%d];", &a) == 1) {
      ir.n_qubits = a;
    } else if (std::sscanf(line.c_str(), "cz q[%d],q[%d];", &a, &b) == 2) {
      ir.push(Gate::cz(a, b));
    } else if (std::sscanf(line.c_str(), "cx q[%d],q[%d];", &a, &b) == 2) {
      ir.push(Gate::cnot(a, b));
    } else if (std::sscanf(line.c_str(), "rx(%lf) q[%d];", &t, &a) == 2) {
      ir.push(Gate::rx(a, t));
    } else if (std::sscanf(line.c_str(), "ry(%lf) q[%d];", &t, &a) == 2) {
      ir.push(Gate::ry(a, t));
    } else if (std::sscanf(line.c_str(), "rz(%lf) q[%d];", &t, &a) == 2) {
      ir.push(Gate::rz(a, t));
    } else if (std::sscanf(line.c_str(), "x q[%d];", &a) == 1) {
      ir.push(Gate::x(a));
    } else {
      throw std::invalid_argument("parse_qasm: unrecognized statement at line " +
                                  std::to_string(lineno) + ": " + line);
    }
  }
  return ir;
}

}  // namespace dbqa
