// Foundational numerical kernels: Gauss-Legendre quadrature, collocation
// node sets, Lagrange basis evaluation, Gram matrices of Lagrange bases,
// and dense least-squares solves with rank diagnostics.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace daecol::numkit {

/// Quadrature rule on the open unit interval (0,1).
struct QuadratureRule {
  int order = 0;                // number of points
  std::vector<double> nodes;    // strictly increasing, in (0,1)
  std::vector<double> weights;  // positive, sum to 1
};

/// Gauss-Legendre rule with `order` points mapped to (0,1).
///
/// Nodes are computed by Newton iteration on the Legendre polynomial with
/// the classical cosine initial guesses; tolerance 1e-15, at most 100
/// iterations per root. Accurate to near machine precision for order <= 64.
inline QuadratureRule gauss_legendre_rule(int order) {
  if (order < 1 || order > 64) {
    throw std::invalid_argument("gauss_legendre_rule: order must be in [1,64], got " +
                                std::to_string(order));
  }
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  const double n = static_cast<double>(order);
  const int half = (order + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    // root of P_n on [-1,1], counted from the right
    double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15) break;
    }
    // map [-1,1] -> (0,1); weight picks up the factor 1/2
    rule.nodes[i - 1] = 0.5 - 0.5 * z;
    rule.nodes[order - i] = 0.5 + 0.5 * z;
    const double w = 1.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i - 1] = w;
    rule.weights[order - i] = w;
  }
  return rule;
}

/// Evaluate integral of f over [0,1] with the given rule.
template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double s = 0.0;
  for (int q = 0; q < rule.order; ++q) s += rule.weights[q] * f(rule.nodes[q]);
  return s;
}

enum class NodeFamily { UniformInterior, Gauss };

inline const char* to_string(NodeFamily f) {
  return f == NodeFamily::UniformInterior ? "uniform" : "gauss";
}

/// M strictly increasing abscissae in the open unit interval.
struct NodeSet {
  int count = 0;
  std::vector<double> taus;
  NodeFamily family = NodeFamily::UniformInterior;
};

/// UniformInterior places tau_i = i/(M+1); Gauss uses the Gauss-Legendre
/// nodes on (0,1).
inline NodeSet make_nodes(int count, NodeFamily family) {
  if (count < 1) throw std::invalid_argument("make_nodes: count must be >= 1");
  NodeSet ns;
  ns.count = count;
  ns.family = family;
  if (family == NodeFamily::UniformInterior) {
    ns.taus.resize(count);
    for (int i = 1; i <= count; ++i) ns.taus[i - 1] = static_cast<double>(i) / (count + 1);
  } else {
    ns.taus = gauss_legendre_rule(count).nodes;
  }
  return ns;
}

/// Values of the M Lagrange basis polynomials l_1..l_M at tau.
inline std::vector<double> lagrange_eval(const NodeSet& nodes, double tau) {
  const int M = nodes.count;
  std::vector<double> l(M, 1.0);
  for (int i = 0; i < M; ++i) {
    for (int s = 0; s < M; ++s) {
      if (s == i) continue;
      l[i] *= (tau - nodes.taus[s]) / (nodes.taus[i] - nodes.taus[s]);
    }
  }
  return l;
}

/// Derivatives l_i'(tau). Uses the product-rule expansion, which stays
/// finite at the interpolation nodes themselves.
inline std::vector<double> lagrange_deriv(const NodeSet& nodes, double tau) {
  const int M = nodes.count;
  std::vector<double> dl(M, 0.0);
  for (int i = 0; i < M; ++i) {
    double sum = 0.0;
    for (int q = 0; q < M; ++q) {
      if (q == i) continue;
      double prod = 1.0 / (nodes.taus[i] - nodes.taus[q]);
      for (int s = 0; s < M; ++s) {
        if (s == i || s == q) continue;
        prod *= (tau - nodes.taus[s]) / (nodes.taus[i] - nodes.taus[s]);
      }
      sum += prod;
    }
    dl[i] = sum;
  }
  return dl;
}

/// Gram matrix Lambda_{ik} = \int_0^1 l_i l_k dtau of the Lagrange basis,
/// together with the upper-triangular Cholesky factor C of M*Lambda
/// (C^T C = M*Lambda). For Gauss nodes Lambda is diagonal with the Gauss
/// weights on the diagonal.
struct GramMatrix {
  int size = 0;
  Eigen::MatrixXd lambda;
  Eigen::MatrixXd cholesky;  // upper triangular C, C^T C = size * lambda
};

inline GramMatrix lagrange_gram(const NodeSet& nodes) {
  const int M = nodes.count;
  GramMatrix gram;
  gram.size = M;
  // quadrature of order M integrates the degree-(2M-2) products exactly
  const QuadratureRule rule = gauss_legendre_rule(M);
  Eigen::MatrixXd L(M, M);
  for (int q = 0; q < M; ++q) {
    const std::vector<double> l = lagrange_eval(nodes, rule.nodes[q]);
    for (int i = 0; i < M; ++i) L(q, i) = l[i];
  }
  gram.lambda = Eigen::MatrixXd::Zero(M, M);
  for (int q = 0; q < M; ++q) {
    gram.lambda.noalias() += rule.weights[q] * L.row(q).transpose() * L.row(q);
  }
  gram.lambda = 0.5 * (gram.lambda + gram.lambda.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(static_cast<double>(M) * gram.lambda);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("lagrange_gram: Cholesky factorization failed (non-SPD Gram matrix)");
  }
  gram.cholesky = llt.matrixU();
  return gram;
}

/// Result of an overdetermined least-squares solve.
struct LlsSolution {
  Eigen::VectorXd solution;
  double residual_norm = 0.0;
  int rank = 0;
  bool rank_deficient = false;
};

constexpr double kRankThreshold = 1e-13;  // relative to sigma_max

/// Minimum-norm least-squares solution of an R x C system, R >= C >= 1.
///
/// Column-pivoted Householder QR by default; if pivoting reveals numerical
/// rank below C (threshold 1e-13 relative), falls back to an SVD solve and
/// flags the deficiency.
inline LlsSolution solve_lls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() < A.cols() || A.cols() < 1) {
    throw std::invalid_argument("solve_lls: need rows >= cols >= 1");
  }
  if (b.size() != A.rows()) throw std::invalid_argument("solve_lls: rhs size mismatch");
  LlsSolution out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(kRankThreshold);
  out.rank = static_cast<int>(qr.rank());
  if (out.rank < A.cols()) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankThreshold);
    out.solution = svd.solve(b);
    out.rank = static_cast<int>(svd.rank());
    out.rank_deficient = out.rank < A.cols();
  } else {
    out.solution = qr.solve(b);
  }
  out.residual_norm = (A * out.solution - b).norm();
  return out;
}

/// Smallest and largest singular values of an R x C matrix, R >= C.
inline std::pair<double, double> min_max_singular_values(const Eigen::MatrixXd& A) {
  if (A.rows() < A.cols() || A.cols() < 1) {
    throw std::invalid_argument("min_max_singular_values: need rows >= cols >= 1");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  return {s(s.size() - 1), s(0)};
}

}  // namespace daecol::numkit
