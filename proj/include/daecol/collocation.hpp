// Collocation schemes and solvers: assembly of the weighted overdetermined
// collocation system (whose Euclidean residual norm realizes the
// least-squares functional), the standard square-collocation baseline, the
// continuous least-squares variant, and a structured QR solver for the
// almost-block-diagonal system shape.

#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "meshspace.hpp"
#include "numkit.hpp"
#include "problems.hpp"

namespace daecol::collocation {

enum class Method { LeastSquares, Standard, ContinuousLS };
enum class Weighting { Gram, Diagonal };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::LeastSquares: return "lsq";
    case Method::Standard: return "standard";
    case Method::ContinuousLS: return "continuous";
  }
  return "?";
}

inline const char* to_string(Weighting w) {
  return w == Weighting::Gram ? "gram" : "diagonal";
}

/// Per-subinterval collocation recipe.
///
/// LeastSquares needs M >= N+1 (overdetermined); Standard needs M = N
/// (square, plus initial conditions); ContinuousLS ignores the collocation
/// nodes and samples at quad_order >= N+2 Gauss points instead.
struct CollocationScheme {
  int N = 3;
  int M = 4;
  numkit::NodeSet nodes;
  numkit::GramMatrix gram;
  Method method = Method::LeastSquares;
  int quad_order = 0;      // ContinuousLS sampling order M_q
  double bc_weight = 1.0;  // weight of the boundary-condition rows
};

inline CollocationScheme make_scheme(int N, int M, numkit::NodeFamily family, Method method,
                                     int quad_order = 0, double bc_weight = 1.0) {
  if (N < 1) throw std::invalid_argument("make_scheme: need N >= 1");
  CollocationScheme s;
  s.N = N;
  s.M = M;
  s.method = method;
  s.bc_weight = bc_weight;
  switch (method) {
    case Method::LeastSquares:
      if (M < N + 1) {
        throw std::invalid_argument("make_scheme: least-squares collocation needs M >= N+1");
      }
      break;
    case Method::Standard:
      if (M != N) throw std::invalid_argument("make_scheme: standard collocation needs M = N");
      break;
    case Method::ContinuousLS:
      if (quad_order == 0) quad_order = std::max(2 * N + 3, M);
      if (quad_order < N + 2) {
        throw std::invalid_argument("make_scheme: continuous least squares needs M_q >= N+2");
      }
      s.quad_order = quad_order;
      break;
  }
  s.nodes = numkit::make_nodes(M, family);
  s.gram = numkit::lagrange_gram(s.nodes);
  return s;
}

/// All collocation abscissae t_ji = t_{j-1} + tau_i h_j as an n x M array.
inline Eigen::MatrixXd collocation_points(const meshspace::Partition& partition,
                                          const numkit::NodeSet& nodes) {
  Eigen::MatrixXd pts(partition.n(), nodes.count);
  for (int j = 0; j < partition.n(); ++j) {
    for (int i = 0; i < nodes.count; ++i) {
      pts(j, i) = partition.nodes[j] + nodes.taus[i] * partition.h(j);
    }
  }
  return pts;
}

/// The assembled system in almost-block-diagonal form: one row block per
/// subinterval over the contiguous columns [v_j | interior_j | v_{j+1}],
/// plus boundary rows over [v_0 | v_n] only (the kernel condition on
/// G_a/G_b guarantees boundary conditions touch no algebraic component).
struct DiscreteLSSystem {
  int n_sub = 0;
  int m = 0;
  int k = 0;
  int N = 0;
  int pts = 0;        // sample points per subinterval (M, or M_q for ContinuousLS)
  int l = 0;          // boundary rows
  int block_rows = 0; // pts * m
  int block_cols = 0; // m*N + k
  std::vector<Eigen::MatrixXd> blocks;     // n_sub of block_rows x block_cols
  std::vector<Eigen::VectorXd> block_rhs;  // n_sub of block_rows
  Eigen::MatrixXd bc_rows;                 // l x 2k over [v_0 | v_n]
  Eigen::VectorXd bc_rhs;                  // l

  int rows() const { return n_sub * block_rows + l; }
  int cols() const { return n_sub * m * N + k; }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows(), cols());
    for (int j = 0; j < n_sub; ++j) {
      A.block(j * block_rows, j * m * N, block_rows, block_cols) = blocks[j];
    }
    for (int r = 0; r < l; ++r) {
      A.block(n_sub * block_rows + r, 0, 1, k) = bc_rows.row(r).head(k);
      A.block(n_sub * block_rows + r, n_sub * m * N, 1, k) = bc_rows.row(r).tail(k);
    }
    return A;
  }

  Eigen::VectorXd to_dense_rhs() const {
    Eigen::VectorXd b(rows());
    for (int j = 0; j < n_sub; ++j) b.segment(j * block_rows, block_rows) = block_rhs[j];
    b.tail(l) = bc_rhs;
    return b;
  }
};

namespace detail {

/// Raw (unweighted) residual rows of one subinterval: for each sample point
/// tau_i, the m equations A(t)(D basis)' + B(t) basis evaluated against g(t),
/// stacked point-major. Columns follow the block layout [v_j | interior | v_{j+1}].
inline void raw_block(const problems::LinearDAEProblem& p, const meshspace::AnsatzSpace& space,
                      int j, const std::vector<double>& taus, Eigen::MatrixXd& block,
                      Eigen::VectorXd& rhs) {
  const int N = space.N, m = space.m, k = space.k;
  const int bc = m * N + k;
  const int pts = static_cast<int>(taus.size());
  const double t0 = space.partition.nodes[j];
  const double hj = space.partition.h(j);
  block.setZero(pts * m, bc);
  rhs.resize(pts * m);
  for (int i = 0; i < pts; ++i) {
    const double tau = taus[i];
    const double t = t0 + tau * hj;
    const meshspace::ShapeValues sv = meshspace::shape_values(N, tau);
    const Eigen::MatrixXd A = p.A(t);
    const Eigen::MatrixXd B = p.B(t);
    const Eigen::VectorXd g = p.g(t);
    for (int r = 0; r < m; ++r) {
      auto row = block.row(i * m + r);
      for (int d = 0; d < k; ++d) {
        const int comp = space.diff_components[d];
        const double a_rd = A(r, d);
        const double b_rc = B(r, comp);
        // left endpoint value, bubbles, right endpoint value
        row(d) += a_rd * sv.diff_dtau(0) / hj + b_rc * sv.diff_value(0);
        for (int q = 1; q <= N - 1; ++q) {
          row(k + d * (N - 1) + q - 1) += a_rd * sv.diff_dtau(q) / hj + b_rc * sv.diff_value(q);
        }
        row(m * N + d) += a_rd * sv.diff_dtau(N) / hj + b_rc * sv.diff_value(N);
      }
      for (std::size_t q = 0; q < space.alg_components.size(); ++q) {
        const double b_rc = B(r, space.alg_components[q]);
        const int off = k + k * (N - 1) + static_cast<int>(q) * N;
        for (int deg = 0; deg < N; ++deg) row(off + deg) += b_rc * sv.alg_value(deg);
      }
      rhs(i * m + r) = g(r);
    }
  }
}

inline void check_compatible(const problems::LinearDAEProblem& p,
                             const meshspace::AnsatzSpace& space) {
  if (p.m != space.m || p.k != space.k || p.diff_components != space.diff_components) {
    throw std::invalid_argument("collocation: problem and ansatz space disagree on components");
  }
}

}  // namespace detail

/// Assemble the weighted overdetermined system for LeastSquares or
/// ContinuousLS. With Gram weighting, each subinterval's raw rows are scaled
/// by sqrt(h_j/M) and left-multiplied by (C kron I_m) where C^T C = M*Lambda,
/// so the Euclidean norm of the block equals the L2 norm of the interpolated
/// residual on that subinterval. Diagonal weighting keeps only the
/// sqrt(h_j/M) scale. ContinuousLS samples at quad_order Gauss points with
/// row scale sqrt(h_j * w_q). Boundary rows are appended with scheme.bc_weight.
inline DiscreteLSSystem assemble(const problems::LinearDAEProblem& p,
                                 const meshspace::AnsatzSpace& space,
                                 const CollocationScheme& scheme,
                                 Weighting weighting = Weighting::Gram) {
  detail::check_compatible(p, space);
  if (scheme.method == Method::Standard) {
    throw std::invalid_argument("assemble: use assemble_standard for the square method");
  }
  if (scheme.N != space.N) throw std::invalid_argument("assemble: scheme/space degree mismatch");

  const bool continuous = scheme.method == Method::ContinuousLS;
  std::vector<double> taus;
  std::vector<double> qweights;
  if (continuous) {
    const auto rule = numkit::gauss_legendre_rule(scheme.quad_order);
    taus = rule.nodes;
    qweights = rule.weights;
  } else {
    taus = scheme.nodes.taus;
  }
  const int pts = static_cast<int>(taus.size());
  const int n = space.partition.n(), m = space.m, k = space.k;

  DiscreteLSSystem sys;
  sys.n_sub = n;
  sys.m = m;
  sys.k = k;
  sys.N = space.N;
  sys.pts = pts;
  sys.l = p.l;
  sys.block_rows = pts * m;
  sys.block_cols = m * space.N + k;
  sys.blocks.resize(n);
  sys.block_rhs.resize(n);

  Eigen::MatrixXd raw;
  Eigen::VectorXd raw_rhs;
  for (int j = 0; j < n; ++j) {
    detail::raw_block(p, space, j, taus, raw, raw_rhs);
    const double hj = space.partition.h(j);
    if (continuous) {
      // quadrature rows: scale each point's m rows by sqrt(h_j w_q)
      for (int i = 0; i < pts; ++i) {
        const double s = std::sqrt(hj * qweights[i]);
        raw.middleRows(i * m, m) *= s;
        raw_rhs.segment(i * m, m) *= s;
      }
      sys.blocks[j] = std::move(raw);
      sys.block_rhs[j] = std::move(raw_rhs);
      raw.resize(0, 0);
    } else {
      const double s = std::sqrt(hj / pts);
      if (weighting == Weighting::Diagonal) {
        sys.blocks[j] = s * raw;
        sys.block_rhs[j] = s * raw_rhs;
      } else {
        // (C kron I_m): weighted point-row i' accumulates C(i',i) * raw rows
        const Eigen::MatrixXd& C = scheme.gram.cholesky;
        Eigen::MatrixXd wb = Eigen::MatrixXd::Zero(pts * m, sys.block_cols);
        Eigen::VectorXd wr = Eigen::VectorXd::Zero(pts * m);
        for (int ip = 0; ip < pts; ++ip) {
          for (int i = ip; i < pts; ++i) {  // C is upper triangular
            wb.middleRows(ip * m, m) += (s * C(ip, i)) * raw.middleRows(i * m, m);
            wr.segment(ip * m, m) += (s * C(ip, i)) * raw_rhs.segment(i * m, m);
          }
        }
        sys.blocks[j] = std::move(wb);
        sys.block_rhs[j] = std::move(wr);
      }
    }
  }

  sys.bc_rows.resize(p.l, 2 * k);
  sys.bc_rhs.resize(p.l);
  for (int r = 0; r < p.l; ++r) {
    for (int d = 0; d < k; ++d) {
      sys.bc_rows(r, d) = scheme.bc_weight * p.G_a(r, space.diff_components[d]);
      sys.bc_rows(r, k + d) = scheme.bc_weight * p.G_b(r, space.diff_components[d]);
    }
    sys.bc_rhs(r) = scheme.bc_weight * p.d(r);
  }
  return sys;
}

/// Assemble the square standard-collocation system: unweighted residual rows
/// at the M = N collocation points plus k rows pinning the differentiated
/// components at t_0 to the supplied consistent initial values.
inline DiscreteLSSystem assemble_standard(const problems::LinearDAEProblem& p,
                                          const meshspace::AnsatzSpace& space,
                                          const CollocationScheme& scheme,
                                          const Eigen::VectorXd& ics) {
  detail::check_compatible(p, space);
  if (scheme.method != Method::Standard) {
    throw std::invalid_argument("assemble_standard: scheme method must be Standard");
  }
  if (scheme.N != space.N) {
    throw std::invalid_argument("assemble_standard: scheme/space degree mismatch");
  }
  if (ics.size() != space.k) {
    throw std::invalid_argument("assemble_standard: need exactly k initial values");
  }
  const int n = space.partition.n(), m = space.m, k = space.k;
  DiscreteLSSystem sys;
  sys.n_sub = n;
  sys.m = m;
  sys.k = k;
  sys.N = space.N;
  sys.pts = scheme.M;
  sys.l = k;
  sys.block_rows = scheme.M * m;
  sys.block_cols = m * space.N + k;
  sys.blocks.resize(n);
  sys.block_rhs.resize(n);
  for (int j = 0; j < n; ++j) {
    detail::raw_block(p, space, j, scheme.nodes.taus, sys.blocks[j], sys.block_rhs[j]);
  }
  // initial conditions occupy the v_0 columns
  sys.bc_rows = Eigen::MatrixXd::Zero(k, 2 * k);
  sys.bc_rows.leftCols(k) = Eigen::MatrixXd::Identity(k, k);
  sys.bc_rhs = ics;
  if (sys.rows() != sys.cols()) {
    throw std::logic_error("assemble_standard: system is not square");
  }
  return sys;
}

namespace detail {

struct StructuredSolveResult {
  Eigen::VectorXd x;
  double residual_sq = 0.0;
  bool rank_deficient = false;
};

/// Sequential Householder QR over the almost-block-diagonal profile.
///
/// Boundary rows start as a carry over the coupling columns [v_0 | v_n].
/// Step j triangularizes carry + block j over the active columns
/// [v_j | interior_j | v_{j+1} | v_n]; the leading m*N columns never recur,
/// so their R rows are stored for back-substitution, rows landing in the
/// trailing coupling columns become the next carry, and fully reduced
/// rows contribute their right-hand side to the residual. Linear in n.
inline StructuredSolveResult solve_structured(const DiscreteLSSystem& sys) {
  const int n = sys.n_sub, m = sys.m, k = sys.k, N = sys.N;
  const int mN = m * N;
  const int bc = sys.block_cols;  // mN + k

  // carry rows: coefficients over [v_j | v_n] plus rhs in the last column
  Eigen::MatrixXd carry(sys.l, 2 * k + 1);
  if (sys.l > 0) {
    carry.leftCols(2 * k) = sys.bc_rows;
    carry.col(2 * k) = sys.bc_rhs;
  }

  std::vector<Eigen::MatrixXd> stored(n);  // R rows incl. rhs column
  double residual_sq = 0.0;

  for (int j = 0; j < n; ++j) {
    const bool last = (j == n - 1);
    const int ca = last ? (mN + k) : (mN + 2 * k);  // active coefficient columns
    const int vn_off = last ? mN : (mN + k);
    const int cr = static_cast<int>(carry.rows());
    const int br = sys.block_rows;
    const int rows = cr + br;

    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(rows, ca + 1);
    if (cr > 0) {
      S.block(0, 0, cr, k) = carry.leftCols(k);
      S.block(0, vn_off, cr, k) = carry.middleCols(k, k);
      S.block(0, ca, cr, 1) = carry.rightCols(1);
    }
    S.block(cr, 0, br, bc) = sys.blocks[j];
    S.col(ca).segment(cr, br) = sys.block_rhs[j];

    // QR of [A | b]: the trailing reflection compresses the dropped rows'
    // right-hand side into the single entry R(ca, ca)
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(S);
    const Eigen::MatrixXd R =
        qr.matrixQR().topRows(std::min(rows, ca + 1)).triangularView<Eigen::Upper>();

    const int reduced = std::min(rows, ca);
    const int keep = last ? reduced : std::min(reduced, mN);
    stored[j] = R.topRows(keep);

    if (!last) {
      const int carry_rows = std::max(0, reduced - mN);
      Eigen::MatrixXd next = Eigen::MatrixXd::Zero(carry_rows, 2 * k + 1);
      for (int r = 0; r < carry_rows; ++r) {
        next.block(r, 0, 1, 2 * k) = R.block(mN + r, mN, 1, 2 * k);
        next(r, 2 * k) = R(mN + r, ca);
      }
      carry = std::move(next);
    }
    if (rows > ca) residual_sq += R(ca, ca) * R(ca, ca);
  }

  // rank check against the largest stored diagonal
  double max_diag = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < stored[j].rows(); ++r) {
      max_diag = std::max(max_diag, std::abs(stored[j](r, r)));
    }
  }

  StructuredSolveResult out;
  out.x = Eigen::VectorXd::Zero(sys.cols());
  const int vn_base = n * mN;
  for (int j = n - 1; j >= 0; --j) {
    const bool last = (j == n - 1);
    const int ca = last ? (mN + k) : (mN + 2 * k);
    const auto gcol = [&](int c) { return (!last && c >= mN + k) ? vn_base + (c - mN - k) : j * mN + c; };
    const Eigen::MatrixXd& R = stored[j];
    for (int r = static_cast<int>(R.rows()) - 1; r >= 0; --r) {
      double acc = R(r, ca);
      for (int c = r + 1; c < ca; ++c) acc -= R(r, c) * out.x(gcol(c));
      const double diag = R(r, r);
      if (std::abs(diag) <= 1e-13 * max_diag) out.rank_deficient = true;
      out.x(gcol(r)) = (diag == 0.0) ? 0.0 : acc / diag;
    }
  }
  out.residual_sq = residual_sq;
  return out;
}

}  // namespace detail

/// Solver outcome with the achieved functional value and diagnostics.
struct SolveReport {
  meshspace::PwPolySolution solution;
  double psi_value = 0.0;      // achieved least-squares functional
  double residual_norm = 0.0;  // Euclidean residual of the weighted system
  double sigma_min = 0.0;      // 0 when not computed (structured path)
  double sigma_max = 0.0;
  double assembly_s = 0.0;
  double solve_s = 0.0;
  int rank = -1;  // -1 when not computed
  bool rank_deficient = false;
  bool below_theory_M = false;  // M < N + mu: outside the proven regime
};

constexpr int kDenseColumnLimit = 2000;

/// Assemble and solve one collocation instance. LeastSquares/ContinuousLS
/// minimize the weighted residual (dense column-pivoted QR below
/// 2000 columns, structured sweep above); Standard solves the square system
/// with a pivoted LU. Singular values are computed on the dense path only,
/// and skipped (reported as 0) when want_sigma is false or the system is
/// large. For Standard, ics supplies the k initial values; when omitted they
/// are taken from the exact solution.
inline SolveReport solve(const problems::LinearDAEProblem& p, const meshspace::AnsatzSpace& space,
                         const CollocationScheme& scheme, Weighting weighting = Weighting::Gram,
                         bool want_sigma = true, const Eigen::VectorXd* ics = nullptr) {
  using clock = std::chrono::steady_clock;
  SolveReport rep;
  rep.below_theory_M = scheme.method != Method::Standard && scheme.M < scheme.N + p.mu;

  const auto t_a0 = clock::now();
  DiscreteLSSystem sys;
  if (scheme.method == Method::Standard) {
    Eigen::VectorXd iv;
    if (ics != nullptr) {
      iv = *ics;
    } else if (p.exact) {
      iv = p.exact_diff_values(p.a);
    } else {
      throw std::invalid_argument("solve: standard method needs initial values");
    }
    sys = assemble_standard(p, space, scheme, iv);
  } else {
    sys = assemble(p, space, scheme, weighting);
  }
  rep.assembly_s = std::chrono::duration<double>(clock::now() - t_a0).count();

  const auto t_s0 = clock::now();
  Eigen::VectorXd coeffs;
  const bool dense = sys.cols() < kDenseColumnLimit;
  if (scheme.method == Method::Standard && dense) {
    const Eigen::MatrixXd A = sys.to_dense();
    const Eigen::VectorXd b = sys.to_dense_rhs();
    // plain pivoted LU: near-singular systems yield huge (but finite)
    // solutions rather than a regularized rank-truncated one
    coeffs = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(b);
    rep.residual_norm = (A * coeffs - b).norm();
    if (!coeffs.allFinite()) rep.rank_deficient = true;
    if (want_sigma) {
      const auto [smin, smax] = numkit::min_max_singular_values(A);
      rep.sigma_min = smin;
      rep.sigma_max = smax;
      if (smin <= 1e-13 * smax) rep.rank_deficient = true;
    }
  } else if (dense) {
    const Eigen::MatrixXd A = sys.to_dense();
    const Eigen::VectorXd b = sys.to_dense_rhs();
    const numkit::LlsSolution lls = numkit::solve_lls(A, b);
    coeffs = lls.solution;
    rep.residual_norm = lls.residual_norm;
    rep.rank = lls.rank;
    rep.rank_deficient = lls.rank_deficient;
    if (want_sigma) {
      const auto [smin, smax] = numkit::min_max_singular_values(A);
      rep.sigma_min = smin;
      rep.sigma_max = smax;
    }
  } else {
    const detail::StructuredSolveResult st = detail::solve_structured(sys);
    coeffs = st.x;
    rep.residual_norm = std::sqrt(st.residual_sq);
    rep.rank_deficient = st.rank_deficient;
  }
  rep.solve_s = std::chrono::duration<double>(clock::now() - t_s0).count();

  rep.psi_value = rep.residual_norm * rep.residual_norm;
  rep.solution.space = space;
  rep.solution.coeffs = std::move(coeffs);
  return rep;
}

/// Ansatz space matching a problem's component split on a partition.
inline meshspace::AnsatzSpace make_space_for(const problems::LinearDAEProblem& p,
                                             meshspace::Partition partition, int N) {
  return meshspace::make_space(std::move(partition), N, p.m, p.diff_components);
}

}  // namespace daecol::collocation
