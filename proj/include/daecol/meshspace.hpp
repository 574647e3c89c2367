// Meshes, the mixed-continuity piecewise-polynomial ansatz space, solution
// representation/evaluation, and the two interpolation operators used by the
// solver and its analysis (reference interpolant onto the ansatz space, and
// per-subinterval restriction onto a Lagrange polynomial).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numkit.hpp"

namespace daecol::meshspace {

/// Partition a = t_0 < t_1 < ... < t_n = b of a compact interval.
struct Partition {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> nodes;  // n+1 strictly increasing values
  double h_max = 0.0;
  double h_min = 0.0;
  double ratio = 1.0;  // h_max / h_min >= 1

  int n() const { return static_cast<int>(nodes.size()) - 1; }

  /// Step length of subinterval j (0-based, j in [0, n)).
  double h(int j) const { return nodes[j + 1] - nodes[j]; }

  /// 0-based index of the subinterval containing t. Subintervals are
  /// half-open [t_j, t_{j+1}) except the last, which is closed at b.
  int locate(double t) const {
    if (t < a || t > b) {
      throw std::invalid_argument("Partition::locate: t=" + std::to_string(t) +
                                  " outside [" + std::to_string(a) + "," + std::to_string(b) + "]");
    }
    if (t >= nodes[n()]) return n() - 1;  // closed at b
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    return static_cast<int>(it - nodes.begin()) - 1;
  }
};

/// Build a partition from an explicit strictly increasing node list.
inline Partition make_partition(std::vector<double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("make_partition: need at least 2 nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw std::invalid_argument("make_partition: nodes must be strictly increasing");
    }
  }
  Partition p;
  p.a = nodes.front();
  p.b = nodes.back();
  p.nodes = std::move(nodes);
  p.h_max = 0.0;
  p.h_min = p.b - p.a;
  for (int j = 0; j < p.n(); ++j) {
    p.h_max = std::max(p.h_max, p.h(j));
    p.h_min = std::min(p.h_min, p.h(j));
  }
  p.ratio = p.h_max / p.h_min;
  return p;
}

/// Equidistant partition of [a,b] into n subintervals (ratio exactly 1).
inline Partition uniform_partition(double a, double b, int n) {
  if (!(a < b)) throw std::invalid_argument("uniform_partition: need a < b");
  if (n < 1) throw std::invalid_argument("uniform_partition: need n >= 1");
  std::vector<double> nodes(n + 1);
  const double h = (b - a) / n;
  for (int j = 0; j <= n; ++j) nodes[j] = a + j * h;
  nodes[0] = a;
  nodes[n] = b;
  Partition p = make_partition(std::move(nodes));
  p.ratio = 1.0;
  return p;
}

namespace detail {

/// Legendre values P_0(s)..P_n(s) via the three-term recurrence.
inline void legendre_upto(int n, double s, double* out) {
  out[0] = 1.0;
  if (n >= 1) out[1] = s;
  for (int i = 1; i < n; ++i) {
    out[i + 1] = ((2.0 * i + 1.0) * s * out[i] - i * out[i - 1]) / (i + 1.0);
  }
}

}  // namespace detail

/// Reference-interval shape function values at local coordinate tau in [0,1].
///
/// Differentiated components use a C0 spectral-element basis of degree N:
/// index 0 is the left nodal function (1-tau), indices 1..N-1 are interior
/// bubble functions built from integrated Legendre polynomials (they vanish
/// at both endpoints), index N is the right nodal function (tau).
/// Algebraic components use shifted Legendre polynomials of degree 0..N-1.
struct ShapeValues {
  Eigen::VectorXd diff_value;  // size N+1
  Eigen::VectorXd diff_dtau;   // size N+1, d/dtau on the reference interval
  Eigen::VectorXd alg_value;   // size N
};

inline ShapeValues shape_values(int N, double tau) {
  ShapeValues sv;
  sv.diff_value.resize(N + 1);
  sv.diff_dtau.resize(N + 1);
  sv.alg_value.resize(N);
  const double s = 2.0 * tau - 1.0;
  std::vector<double> P(N + 2);
  detail::legendre_upto(N + 1, s, P.data());

  sv.diff_value(0) = 1.0 - tau;
  sv.diff_dtau(0) = -1.0;
  sv.diff_value(N) = tau;
  sv.diff_dtau(N) = 1.0;
  for (int i = 1; i <= N - 1; ++i) {
    // bubble_i(tau) = (P_{i+1}(s) - P_{i-1}(s)) / (2(2i+1)); bubble_i' = P_i(s)
    sv.diff_value(i) = (P[i + 1] - P[i - 1]) / (2.0 * (2.0 * i + 1.0));
    sv.diff_dtau(i) = P[i];
  }
  for (int d = 0; d < N; ++d) sv.alg_value(d) = P[d];
  return sv;
}

/// The mixed-continuity ansatz space on a partition: differentiated
/// components are piecewise degree <= N and globally continuous, algebraic
/// components are piecewise degree <= N-1 and may jump at interior nodes.
/// Dimension is n*N*m + k.
struct AnsatzSpace {
  Partition partition;
  int N = 1;                         // degree of the differentiated components
  int m = 1;                         // system size
  int k = 1;                         // number of differentiated components
  std::vector<int> diff_components;  // sorted 0-based component indices, size k
  std::vector<int> alg_components;   // complement, size m-k

  int dim() const { return partition.n() * N * m + k; }

  // canonical coefficient layout, subinterval j in [0, n):
  //   v_j block        offset j*m*N      width k    (values of diff comps at t_j)
  //   interior block   offset j*m*N + k  width m*N-k:
  //       k*(N-1) bubble coefficients (per diff comp, bubbles 1..N-1), then
  //       (m-k)*N shifted-Legendre coefficients (per alg comp, degrees 0..N-1)
  //   v_n block        offset n*m*N      width k
  int v_offset(int j) const { return j * m * N; }
  int bubble_offset(int j, int dpos) const { return j * m * N + k + dpos * (N - 1); }
  int alg_offset(int j, int apos) const { return j * m * N + k + k * (N - 1) + apos * N; }
};

inline AnsatzSpace make_space(Partition partition, int N, int m, std::vector<int> diff_components) {
  if (N < 1) throw std::invalid_argument("make_space: need N >= 1");
  if (m < 1) throw std::invalid_argument("make_space: need m >= 1");
  AnsatzSpace sp;
  sp.partition = std::move(partition);
  sp.N = N;
  sp.m = m;
  sp.k = static_cast<int>(diff_components.size());
  if (sp.k > m) throw std::invalid_argument("make_space: more differentiated components than m");
  std::sort(diff_components.begin(), diff_components.end());
  for (std::size_t i = 0; i < diff_components.size(); ++i) {
    if (diff_components[i] < 0 || diff_components[i] >= m) {
      throw std::invalid_argument("make_space: component index out of range");
    }
    if (i > 0 && diff_components[i] == diff_components[i - 1]) {
      throw std::invalid_argument("make_space: duplicate component index");
    }
  }
  sp.diff_components = std::move(diff_components);
  for (int c = 0; c < m; ++c) {
    if (!std::binary_search(sp.diff_components.begin(), sp.diff_components.end(), c)) {
      sp.alg_components.push_back(c);
    }
  }
  return sp;
}

/// An element of the ansatz space: coefficient vector in the canonical basis.
struct PwPolySolution {
  AnsatzSpace space;
  Eigen::VectorXd coeffs;

  /// All m component values on subinterval j at local coordinate tau.
  /// tau may be 1.0, which samples the closed right endpoint of j.
  Eigen::VectorXd eval_local(int j, double tau) const {
    const ShapeValues sv = shape_values(space.N, tau);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(space.m);
    for (int d = 0; d < space.k; ++d) {
      double val = coeffs(space.v_offset(j) + d) * sv.diff_value(0) +
                   coeffs(space.v_offset(j + 1) + d) * sv.diff_value(space.N);
      for (int i = 1; i <= space.N - 1; ++i) {
        val += coeffs(space.bubble_offset(j, d) + i - 1) * sv.diff_value(i);
      }
      out(space.diff_components[d]) = val;
    }
    for (std::size_t q = 0; q < space.alg_components.size(); ++q) {
      double val = 0.0;
      for (int deg = 0; deg < space.N; ++deg) {
        val += coeffs(space.alg_offset(j, static_cast<int>(q)) + deg) * sv.alg_value(deg);
      }
      out(space.alg_components[q]) = val;
    }
    return out;
  }

  /// First derivatives of the k differentiated components on subinterval j.
  Eigen::VectorXd eval_Dx_prime_local(int j, double tau) const {
    const ShapeValues sv = shape_values(space.N, tau);
    const double hj = space.partition.h(j);
    Eigen::VectorXd out(space.k);
    for (int d = 0; d < space.k; ++d) {
      double val = coeffs(space.v_offset(j) + d) * sv.diff_dtau(0) +
                   coeffs(space.v_offset(j + 1) + d) * sv.diff_dtau(space.N);
      for (int i = 1; i <= space.N - 1; ++i) {
        val += coeffs(space.bubble_offset(j, d) + i - 1) * sv.diff_dtau(i);
      }
      out(d) = val / hj;
    }
    return out;
  }

  /// Component values at t, right-continuous at interior mesh nodes.
  Eigen::VectorXd eval(double t) const {
    const int j = space.partition.locate(t);
    const double tau = (t - space.partition.nodes[j]) / space.partition.h(j);
    return eval_local(j, tau);
  }

  /// Derivatives of the differentiated components at t.
  Eigen::VectorXd eval_Dx_prime(double t) const {
    const int j = space.partition.locate(t);
    const double tau = (t - space.partition.nodes[j]) / space.partition.h(j);
    return eval_Dx_prime_local(j, tau);
  }
};

/// Interpolant of a reference function onto the ansatz space.
///
/// Each component is matched at the N interior Gauss nodes of every
/// subinterval; differentiated components additionally carry global
/// continuity and are anchored by their values at t_0 (supplied by f_D, a
/// k-vector ordered like diff_components). The construction runs left to
/// right: on each subinterval the left endpoint value is inherited, and the
/// N remaining degrees of freedom (N-1 bubbles plus the right endpoint
/// value) are determined by the N interior conditions.
inline PwPolySolution interpolate_reference(const AnsatzSpace& space,
                                            const std::function<Eigen::VectorXd(double)>& f,
                                            const std::function<Eigen::VectorXd(double)>& f_D) {
  const int N = space.N;
  const int n = space.partition.n();
  // Interpolation nodes biased into the right half of each subinterval.  The
  // left endpoint value of each differentiated component is inherited from
  // the previous subinterval, so any error in it propagates with the factor
  // prod_i (1-tau_i)/tau_i (the left cardinal polynomial evaluated at 1).
  // Right-biased nodes make that factor < 1 for every degree, keeping the
  // sweep contractive and the interpolant accurate to order N in C^1.
  numkit::NodeSet taus = numkit::make_nodes(N, numkit::NodeFamily::Gauss);
  for (double& tau : taus.taus) tau = 0.5 * (1.0 + tau);

  // interior-condition matrices are mesh independent; factor them once
  Eigen::MatrixXd diff_mat(N, N);  // unknowns: [bubble_1..bubble_{N-1}, v_right]
  Eigen::MatrixXd alg_mat(N, N);   // unknowns: Legendre coefficients 0..N-1
  for (int i = 0; i < N; ++i) {
    const ShapeValues sv = shape_values(N, taus.taus[i]);
    for (int b = 1; b <= N - 1; ++b) diff_mat(i, b - 1) = sv.diff_value(b);
    diff_mat(i, N - 1) = sv.diff_value(N);
    for (int d = 0; d < N; ++d) alg_mat(i, d) = sv.alg_value(d);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> diff_lu(diff_mat);
  const Eigen::PartialPivLU<Eigen::MatrixXd> alg_lu(alg_mat);

  PwPolySolution sol;
  sol.space = space;
  sol.coeffs = Eigen::VectorXd::Zero(space.dim());

  const Eigen::VectorXd anchor = f_D(space.partition.a);
  if (anchor.size() != space.k) {
    throw std::invalid_argument("interpolate_reference: f_D must return a k-vector");
  }
  for (int d = 0; d < space.k; ++d) sol.coeffs(space.v_offset(0) + d) = anchor(d);

  std::vector<Eigen::VectorXd> fvals(N);
  for (int j = 0; j < n; ++j) {
    const double t0 = space.partition.nodes[j];
    const double hj = space.partition.h(j);
    for (int i = 0; i < N; ++i) {
      fvals[i] = f(t0 + taus.taus[i] * hj);
      if (fvals[i].size() != space.m) {
        throw std::invalid_argument("interpolate_reference: f must return an m-vector");
      }
    }
    for (int d = 0; d < space.k; ++d) {
      const int comp = space.diff_components[d];
      const double v_left = sol.coeffs(space.v_offset(j) + d);
      Eigen::VectorXd rhs(N);
      for (int i = 0; i < N; ++i) rhs(i) = fvals[i](comp) - v_left * (1.0 - taus.taus[i]);
      const Eigen::VectorXd u = diff_lu.solve(rhs);
      for (int b = 1; b <= N - 1; ++b) sol.coeffs(space.bubble_offset(j, d) + b - 1) = u(b - 1);
      sol.coeffs(space.v_offset(j + 1) + d) = u(N - 1);
    }
    for (std::size_t q = 0; q < space.alg_components.size(); ++q) {
      const int comp = space.alg_components[q];
      Eigen::VectorXd rhs(N);
      for (int i = 0; i < N; ++i) rhs(i) = fvals[i](comp);
      const Eigen::VectorXd u = alg_lu.solve(rhs);
      for (int deg = 0; deg < N; ++deg) {
        sol.coeffs(space.alg_offset(j, static_cast<int>(q)) + deg) = u(deg);
      }
    }
  }
  return sol;
}

/// Degree <= M-1 Lagrange interpolant of a scalar function on one
/// subinterval, through the M mapped abscissae of a node set.
struct LagrangeInterpolant {
  numkit::NodeSet nodes;
  double t_left = 0.0;
  double t_right = 1.0;
  Eigen::VectorXd values;  // function values at the mapped nodes

  double eval(double t) const {
    const double tau = (t - t_left) / (t_right - t_left);
    const std::vector<double> l = numkit::lagrange_eval(nodes, tau);
    double s = 0.0;
    for (int i = 0; i < nodes.count; ++i) s += values(i) * l[i];
    return s;
  }
};

inline LagrangeInterpolant restrict_interpolate(const numkit::NodeSet& nodes,
                                                const std::function<double(double)>& w,
                                                double t_left, double t_right) {
  if (!(t_left < t_right)) {
    throw std::invalid_argument("restrict_interpolate: need t_left < t_right");
  }
  LagrangeInterpolant li;
  li.nodes = nodes;
  li.t_left = t_left;
  li.t_right = t_right;
  li.values.resize(nodes.count);
  for (int i = 0; i < nodes.count; ++i) {
    li.values(i) = w(t_left + nodes.taus[i] * (t_right - t_left));
  }
  return li;
}

}  // namespace daecol::meshspace
