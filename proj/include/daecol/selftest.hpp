#pragma once

// Self-contained property checks over all library modules. Each check
// verifies one invariant the implementation is designed around and reports
// a measured quantity against its tolerance, so a regression anywhere in
// the numerics surfaces here by name.

#include <daecol/analysis.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace daecol::selftest {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline CheckResult make(const std::string& name, double measured, double tol,
                        const std::string& what) {
  CheckResult r;
  r.name = name;
  r.passed = measured <= tol;
  r.detail = what + " " + sci(measured) + " (tol " + sci(tol) + ")";
  return r;
}

inline meshspace::PwPolySolution random_element(const meshspace::AnsatzSpace& space,
                                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  meshspace::PwPolySolution z;
  z.space = space;
  z.coeffs.resize(space.dim());
  for (int i = 0; i < space.dim(); ++i) z.coeffs(i) = dist(rng);
  return z;
}

// ---- quadrature / interpolation kernel ----

inline CheckResult quadrature_exactness() {
  double worst = 0.0;
  for (int q = 1; q <= 20; ++q) {
    const auto rule = numkit::gauss_legendre_rule(q);
    for (int p = 0; p <= 2 * q - 1; ++p) {
      const double val = numkit::integrate(rule, [p](double t) { return std::pow(t, p); });
      worst = std::max(worst, std::abs(val - 1.0 / (p + 1)));
    }
  }
  return make("quadrature_exactness", worst, 1e-12,
              "max deviation integrating monomials of degree <= 2q-1:");
}

inline CheckResult lagrange_cardinality() {
  double worst = 0.0;
  for (int M : {2, 4, 7}) {
    for (auto family : {numkit::NodeFamily::UniformInterior, numkit::NodeFamily::Gauss}) {
      const auto nodes = numkit::make_nodes(M, family);
      for (int j = 0; j < M; ++j) {
        const auto vals = numkit::lagrange_eval(nodes, nodes.taus[j]);
        for (int i = 0; i < M; ++i) {
          worst = std::max(worst, std::abs(vals[i] - (i == j ? 1.0 : 0.0)));
        }
      }
      for (int s = 0; s <= 40; ++s) {
        const auto vals = numkit::lagrange_eval(nodes, s / 40.0);
        double sum = 0.0;
        for (double v : vals) sum += v;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  return make("lagrange_cardinality", worst, 1e-11,
              "cardinal-value and partition-of-unity deviation:");
}

inline CheckResult gram_vs_quadrature() {
  double worst = 0.0;
  for (int M : {2, 3, 5, 7}) {
    for (auto family : {numkit::NodeFamily::UniformInterior, numkit::NodeFamily::Gauss}) {
      const auto nodes = numkit::make_nodes(M, family);
      const auto gram = numkit::lagrange_gram(nodes);
      const auto rule = numkit::gauss_legendre_rule(M + 2);  // independent order
      for (int i = 0; i < M; ++i) {
        for (int kk = 0; kk < M; ++kk) {
          const double ref = numkit::integrate(rule, [&](double tau) {
            const auto vals = numkit::lagrange_eval(nodes, tau);
            return vals[i] * vals[kk];
          });
          worst = std::max(worst, std::abs(gram.lambda(i, kk) - ref));
        }
      }
      // the stored factor satisfies C^T C = M * Lambda
      const Eigen::MatrixXd delta =
          gram.cholesky.transpose() * gram.cholesky - double(M) * gram.lambda;
      worst = std::max(worst, delta.cwiseAbs().maxCoeff());
    }
  }
  return make("gram_vs_quadrature", worst, 1e-12,
              "basis-product integral and factorization deviation:");
}

inline CheckResult gauss_diagonal_gram() {
  double worst = 0.0;
  for (int M : {2, 4, 7}) {
    const auto nodes = numkit::make_nodes(M, numkit::NodeFamily::Gauss);
    const auto gram = numkit::lagrange_gram(nodes);
    const auto rule = numkit::gauss_legendre_rule(M);
    for (int i = 0; i < M; ++i) {
      for (int kk = 0; kk < M; ++kk) {
        const double expect = (i == kk) ? rule.weights[i] : 0.0;
        worst = std::max(worst, std::abs(gram.lambda(i, kk) - expect));
      }
    }
  }
  return make("gauss_diagonal_gram", worst, 1e-12,
              "off-diagonal mass and weight mismatch at gauss nodes:");
}

inline CheckResult lls_optimality() {
  std::mt19937_64 rng(918273);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd A(12, 5);
  Eigen::VectorXd b(12);
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 5; ++c) A(r, c) = dist(rng);
    b(r) = dist(rng);
  }
  const auto sol = numkit::solve_lls(A, b);
  const double base = (A * sol.solution - b).squaredNorm();
  double worst = 0.0;  // how much any perturbation IMPROVES on the minimum
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd d(5);
    for (int c = 0; c < 5; ++c) d(c) = 1e-4 * dist(rng);
    const double alt = (A * (sol.solution + d) - b).squaredNorm();
    worst = std::max(worst, base - alt);
  }
  return make("lls_optimality", worst, 1e-14,
              "best residual improvement over the computed minimizer:");
}

// ---- ansatz space ----

inline CheckResult ansatz_dimension() {
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> pick_n(1, 9), pick_N(1, 5), pick_m(1, 5);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = pick_n(rng), N = pick_N(rng), m = pick_m(rng);
    std::uniform_int_distribution<int> pick_k(0, m);
    const int k = pick_k(rng);
    std::vector<int> comps(m);
    for (int c = 0; c < m; ++c) comps[c] = c;
    std::shuffle(comps.begin(), comps.end(), rng);
    comps.resize(k);
    const auto space = meshspace::make_space(meshspace::uniform_partition(0, 1, n), N, m, comps);
    if (space.dim() != n * N * m + k) return make("ansatz_dimension", 1.0, 0.0, "dimension mismatch:");
    // every coefficient index must be claimed exactly once by the layout
    std::vector<int> hits(space.dim(), 0);
    for (int j = 0; j <= n; ++j) {
      for (int d = 0; d < k; ++d) ++hits[space.v_offset(j) + d];
    }
    for (int j = 0; j < n; ++j) {
      for (int d = 0; d < k; ++d) {
        for (int q = 0; q < N - 1; ++q) ++hits[space.bubble_offset(j, d) + q];
      }
      for (int a = 0; a < m - k; ++a) {
        for (int q = 0; q < N; ++q) ++hits[space.alg_offset(j, a) + q];
      }
    }
    for (int i = 0; i < space.dim(); ++i) {
      worst = std::max(worst, std::abs(double(hits[i] - 1)));
    }
  }
  return make("ansatz_dimension", worst, 0.0, "coefficient-slot tiling defect:");
}

inline CheckResult continuity_of_diff_components() {
  std::mt19937_64 rng(31337);
  double worst = 0.0;
  const auto p = problems::build_index3_example();
  for (int N : {1, 2, 4}) {
    const auto space =
        collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 7), N);
    const auto x = random_element(space, rng);
    for (int j = 1; j < 7; ++j) {
      const Eigen::VectorXd left = x.eval_local(j - 1, 1.0);
      const Eigen::VectorXd right = x.eval_local(j, 0.0);
      for (int d : space.diff_components) {
        worst = std::max(worst, std::abs(left(d) - right(d)));
      }
    }
  }
  return make("continuity_of_diff_components", worst, 1e-12,
              "jump of differentiated components at interior nodes:");
}

inline CheckResult inverse_inequality_stability() {
  std::mt19937_64 rng(24601);
  const auto p = problems::build_index3_example();
  double worst_growth = 0.0;
  for (int N : {1, 3}) {
    double prior = 0.0;
    for (int n : {4, 8, 16}) {
      const auto space =
          collocation::make_space_for(p, meshspace::uniform_partition(0, 1, n), N);
      double cmax = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const auto z = random_element(space, rng);
        double sup = 0.0, l2_sq = 0.0;
        const auto rule = numkit::gauss_legendre_rule(N + 2);
        for (int j = 0; j < n; ++j) {
          const double hj = space.partition.h(j);
          for (int s = 0; s <= 50; ++s) {
            sup = std::max(sup, z.eval_local(j, s / 50.0).norm());
          }
          for (int q = 0; q < rule.order; ++q) {
            l2_sq += hj * rule.weights[q] * z.eval_local(j, rule.nodes[q]).squaredNorm();
          }
        }
        cmax = std::max(cmax, sup * std::sqrt(1.0 / n) / std::sqrt(l2_sq));
      }
      if (prior > 0.0) worst_growth = std::max(worst_growth, cmax / prior - 1.0);
      prior = std::max(prior, cmax);
    }
  }
  return make("inverse_inequality_stability", worst_growth, 0.05,
              "relative growth of sup-vs-L2 constant under refinement:");
}

inline CheckResult norm_equivalence_bounds() {
  std::mt19937_64 rng(112358);
  const auto p = problems::build_index3_example();
  double worst = 0.0;  // signed violation of either inequality, relative
  for (int N : {1, 2, 3}) {
    for (int n : {3, 6, 12}) {
      const auto space =
          collocation::make_space_for(p, meshspace::uniform_partition(0, 1, n), N);
      const double kappa = 1.0 / (2.0 * ((N + 1.0) * (N + 1.0) + double(N) * N));
      const auto rule = numkit::gauss_legendre_rule(N + 2);
      for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_element(space, rng);
        double sup_v = 0.0, sup_d = 0.0, h1_sq = 0.0;
        for (int j = 0; j < n; ++j) {
          const double hj = space.partition.h(j);
          for (int s = 0; s <= 100; ++s) {
            sup_v = std::max(sup_v, x.eval_local(j, s / 100.0).norm());
            sup_d = std::max(sup_d, x.eval_Dx_prime_local(j, s / 100.0).norm());
          }
          for (int q = 0; q < rule.order; ++q) {
            h1_sq += hj * rule.weights[q] * (x.eval_local(j, rule.nodes[q]).squaredNorm() +
                                             x.eval_Dx_prime_local(j, rule.nodes[q]).squaredNorm());
          }
        }
        const double c1_sq = (sup_v + sup_d) * (sup_v + sup_d);
        // upper: H1^2 <= (b-a) C1^2 with the exact interval-length constant
        worst = std::max(worst, h1_sq / c1_sq - 1.0);
        // lower: kappa h_min C1^2 <= H1^2
        worst = std::max(worst, (kappa * (1.0 / n) * c1_sq - h1_sq) / h1_sq);
      }
    }
  }
  return make("norm_equivalence_bounds", std::max(worst, 0.0), 1e-10,
              "violation of interval-length/inverse-inequality sandwich:");
}

inline CheckResult interpolation_remainder_bound() {
  const int M = 3;
  const int n = 10;
  const auto nodes = numkit::make_nodes(M, numkit::NodeFamily::Gauss);
  const auto part = meshspace::uniform_partition(0, 1, n);
  double measured = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto interp = meshspace::restrict_interpolate(
        nodes, [](double t) { return std::sin(t); }, part.nodes[j], part.nodes[j + 1]);
    for (int s = 0; s <= 100; ++s) {
      const double t = part.nodes[j] + (s / 100.0) * part.h(j);
      measured = std::max(measured, std::abs(interp.eval(t) - std::sin(t)));
    }
  }
  // remainder bound h^M/M! times the sup of the M-th derivative (= 1 here)
  const double bound = std::pow(0.1, M) / 6.0;
  return make("interpolation_remainder_bound", measured, bound,
              "max interpolation error of sin against its analytic bound:");
}

// ---- benchmark problems ----

inline CheckResult manufactured_residuals() {
  auto list = problems::all_registry_problems();
  list.push_back(problems::build_index3_example(-0.5));
  double worst_res = 0.0, worst_bc = 0.0;
  for (const auto& p : list) {
    for (int s = 0; s <= 50; ++s) {
      const double t = p.a + (p.b - p.a) * s / 50.0;
      const Eigen::VectorXd res =
          p.A(t) * p.exact->d_diff(t) + p.B(t) * p.exact->value(t) - p.g(t);
      worst_res = std::max(worst_res, res.cwiseAbs().maxCoeff());
    }
    if (p.l > 0) {
      const Eigen::VectorXd bc =
          p.G_a * p.exact->value(p.a) + p.G_b * p.exact->value(p.b) - p.d;
      worst_bc = std::max(worst_bc, bc.cwiseAbs().maxCoeff());
    }
  }
  auto r = make("manufactured_residuals", worst_res, 1e-10,
                "max operator residual on reference solutions:");
  if (worst_bc > 1e-12) {
    r.passed = false;
    r.detail += "; boundary residual " + sci(worst_bc) + " exceeds 1e-12";
  }
  return r;
}

inline CheckResult boundary_kernel_condition() {
  double worst = 0.0;
  for (const auto& p : problems::all_registry_problems()) {
    if (p.l == 0) continue;
    std::vector<char> is_diff(p.m, 0);
    for (int d : p.diff_components) is_diff[d] = 1;
    for (int c = 0; c < p.m; ++c) {
      if (is_diff[c]) continue;
      worst = std::max(worst, p.G_a.col(c).cwiseAbs().maxCoeff());
      worst = std::max(worst, p.G_b.col(c).cwiseAbs().maxCoeff());
    }
  }
  return make("boundary_kernel_condition", worst, 0.0,
              "boundary weight on algebraic components:");
}

// ---- discrete systems ----

inline CheckResult discrete_norm_fidelity() {
  std::mt19937_64 rng(8086);
  auto p = problems::build_index3_example();
  p.g = [](double) { return Eigen::VectorXd::Zero(3); };
  double worst = 0.0;
  for (auto family : {numkit::NodeFamily::UniformInterior, numkit::NodeFamily::Gauss}) {
    const int N = 2, M = 4;
    const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 4), N);
    const auto scheme = collocation::make_scheme(N, M, family, collocation::Method::LeastSquares);
    const auto sys = collocation::assemble(p, space, scheme);
    const auto x = random_element(space, rng);
    double route1_sq = 0.0;
    for (int j = 0; j < sys.n_sub; ++j) {
      route1_sq += (sys.blocks[j] * x.coeffs.segment(j * sys.m * sys.N, sys.block_cols))
                       .squaredNorm();
    }
    const auto rule = numkit::gauss_legendre_rule(M);
    double route2_sq = 0.0;
    for (int j = 0; j < sys.n_sub; ++j) {
      const double hj = space.partition.h(j);
      const double t0 = space.partition.nodes[j];
      std::vector<meshspace::LagrangeInterpolant> comp(p.m);
      for (int r = 0; r < p.m; ++r) {
        comp[r] = meshspace::restrict_interpolate(
            scheme.nodes,
            [&](double t) {
              const double tau = (t - t0) / hj;
              return (p.A(t) * x.eval_Dx_prime_local(j, tau) + p.B(t) * x.eval_local(j, tau))(r);
            },
            t0, space.partition.nodes[j + 1]);
      }
      for (int q = 0; q < rule.order; ++q) {
        const double t = t0 + rule.nodes[q] * hj;
        double sq = 0.0;
        for (int r = 0; r < p.m; ++r) sq += comp[r].eval(t) * comp[r].eval(t);
        route2_sq += hj * rule.weights[q] * sq;
      }
    }
    worst = std::max(worst, std::abs(std::sqrt(route1_sq) - std::sqrt(route2_sq)) /
                                std::max(1.0, std::sqrt(route2_sq)));
  }
  return make("discrete_norm_fidelity", worst, 1e-10,
              "relative gap between block norm and interpolated-residual norm:");
}

inline CheckResult full_rank_proven_regime() {
  const auto p = problems::build_index3_example();
  // smallest observed sigma_min / (threshold * sigma_max); > 1 means full rank
  double worst_ratio = std::numeric_limits<double>::infinity();
  std::string log;
  for (int n : {5, 10, 20}) {
    const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, n), 3);
    const auto rep = collocation::solve(
        p, space,
        collocation::make_scheme(3, 6, numkit::NodeFamily::Gauss,
                                 collocation::Method::LeastSquares));
    worst_ratio = std::min(worst_ratio, rep.sigma_min / (1e-13 * rep.sigma_max));
    // the minimal overdetermination M = N+1 is observed, not asserted
    const auto low = collocation::solve(
        p, space,
        collocation::make_scheme(3, 4, numkit::NodeFamily::Gauss,
                                 collocation::Method::LeastSquares));
    log += " n=" + std::to_string(n) + ": sigma_min=" + sci(rep.sigma_min) +
           " (M=N+1: " + sci(low.sigma_min) + ")";
  }
  CheckResult r;
  r.name = "full_rank_proven_regime";
  r.passed = worst_ratio > 1.0;
  r.detail = "smallest margin over rank threshold " + sci(worst_ratio) + ";" + log;
  return r;
}

inline CheckResult gauss_weighting_coincidence() {
  const auto p = problems::build_index3_example();
  const int N = 2, M = 4;
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 5), N);
  const auto a = collocation::assemble(
      p, space,
      collocation::make_scheme(N, M, numkit::NodeFamily::Gauss,
                               collocation::Method::LeastSquares),
      collocation::Weighting::Gram);
  const auto b = collocation::assemble(
      p, space,
      collocation::make_scheme(N, M, numkit::NodeFamily::Gauss,
                               collocation::Method::ContinuousLS, M));
  double worst = 0.0;
  for (int j = 0; j < a.n_sub; ++j) {
    worst = std::max(worst, (a.blocks[j] - b.blocks[j]).cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.block_rhs[j] - b.block_rhs[j]).cwiseAbs().maxCoeff());
  }
  return make("gauss_weighting_coincidence", worst, 1e-12,
              "entry gap between gauss-node weighting and continuous variant:");
}

inline CheckResult method_consistency_index1() {
  const auto p = problems::build_index1_demo();
  const int N = 2, n = 32;
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, n), N);
  const auto lsq = collocation::solve(
      p, space,
      collocation::make_scheme(N, 3, numkit::NodeFamily::Gauss,
                               collocation::Method::LeastSquares));
  const auto cls = collocation::solve(
      p, space,
      collocation::make_scheme(N, 3, numkit::NodeFamily::Gauss,
                               collocation::Method::ContinuousLS));
  const auto std_ = collocation::solve(
      p, space,
      collocation::make_scheme(N, 2, numkit::NodeFamily::Gauss, collocation::Method::Standard));
  const auto err = analysis::error_norms(lsq.solution, *p.exact);
  double dev = 0.0;
  for (int s = 0; s <= 200; ++s) {
    const double t = s / 200.0;
    dev = std::max(dev, (lsq.solution.eval(t) - cls.solution.eval(t)).cwiseAbs().maxCoeff());
    dev = std::max(dev, (lsq.solution.eval(t) - std_.solution.eval(t)).cwiseAbs().maxCoeff());
  }
  return make("method_consistency_index1", dev, 10.0 * err.max_err.maxCoeff(),
              "max pairwise method deviation vs 10x discretization error:");
}

inline CheckResult sigma_trend() {
  const auto p = problems::build_index3_example();
  std::vector<double> smin;
  for (int n : {5, 10, 20}) {
    const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, n), 3);
    const auto rep = collocation::solve(
        p, space,
        collocation::make_scheme(3, 6, numkit::NodeFamily::Gauss,
                                 collocation::Method::LeastSquares));
    smin.push_back(rep.sigma_min);
  }
  CheckResult r;
  r.name = "sigma_trend";
  r.passed = smin[2] < smin[1] && smin[1] < smin[0];
  r.detail = "sigma_min over n=5,10,20: " + sci(smin[0]) + ", " + sci(smin[1]) + ", " +
             sci(smin[2]) + " (diagnostic: shrinks with h)";
  return r;
}

// ---- analysis layer ----

inline CheckResult quadrature_resolution_stability() {
  const auto p = problems::build_index3_example();
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 10), 3);
  const auto rep = collocation::solve(
      p, space,
      collocation::make_scheme(3, 7, numkit::NodeFamily::UniformInterior,
                               collocation::Method::LeastSquares));
  const auto base = analysis::error_norms(rep.solution, *p.exact);
  const auto fine = analysis::error_norms(rep.solution, *p.exact, 20);
  double worst = std::abs(base.combined - fine.combined) / fine.combined;
  for (int c = 0; c < 3; ++c) {
    worst = std::max(worst, std::abs(base.l2_err(c) - fine.l2_err(c)) / fine.l2_err(c));
  }
  return make("quadrature_resolution_stability", worst, 1e-3,
              "relative norm change when doubling the quadrature order:");
}

inline CheckResult h1_norm_consistency() {
  std::mt19937_64 rng(64738);
  const auto p = problems::build_index3_example();
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 5), 3);
  const auto x = random_element(space, rng);
  problems::ExactSolution zero;
  zero.value = [](double) { return Eigen::VectorXd::Zero(3); };
  zero.d_diff = [](double) { return Eigen::VectorXd::Zero(2); };
  const int q = 11;
  const auto rep = analysis::error_norms(x, zero, q);
  const auto rule = numkit::gauss_legendre_rule(q);
  double worst = 0.0;
  for (int d = 0; d < 2; ++d) {
    const int comp = space.diff_components[d];
    double v_sq = 0.0, d_sq = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double hj = space.partition.h(j);
      for (int i = 0; i < rule.order; ++i) {
        const double val = x.eval_local(j, rule.nodes[i])(comp);
        const double der = x.eval_Dx_prime_local(j, rule.nodes[i])(d);
        v_sq += hj * rule.weights[i] * val * val;
        d_sq += hj * rule.weights[i] * der * der;
      }
    }
    worst = std::max(worst,
                     std::abs(rep.h1_err(d) - std::sqrt(v_sq + d_sq)) / std::sqrt(v_sq + d_sq));
  }
  return make("h1_norm_consistency", worst, 1e-12,
              "relative gap between reported and recomposed graph norm:");
}

inline CheckResult study_determinism() {
  const auto p = problems::build_index3_example();
  analysis::StudyParams params;
  params.N = 3;
  params.M = 4;
  params.n_list = {5, 10};
  auto a = analysis::run_study(p, params);
  auto b = analysis::run_study(p, params);
  for (auto* r : {&a, &b}) {
    for (auto& row : r->rows) {
      row.assembly_s = 0.0;
      row.solve_s = 0.0;
    }
  }
  const bool same =
      analysis::write_report(a, analysis::ReportFormat::Csv) ==
      analysis::write_report(b, analysis::ReportFormat::Csv);
  CheckResult r;
  r.name = "study_determinism";
  r.passed = same;
  r.detail = same ? "repeated studies serialize identically (timings excluded)"
                  : "repeated studies produced different reports";
  return r;
}

}  // namespace detail

inline std::vector<CheckResult> run_all() {
  using Fn = CheckResult (*)();
  const std::vector<std::pair<const char*, Fn>> checks = {
      {"quadrature_exactness", detail::quadrature_exactness},
      {"lagrange_cardinality", detail::lagrange_cardinality},
      {"gram_vs_quadrature", detail::gram_vs_quadrature},
      {"gauss_diagonal_gram", detail::gauss_diagonal_gram},
      {"lls_optimality", detail::lls_optimality},
      {"ansatz_dimension", detail::ansatz_dimension},
      {"continuity_of_diff_components", detail::continuity_of_diff_components},
      {"inverse_inequality_stability", detail::inverse_inequality_stability},
      {"norm_equivalence_bounds", detail::norm_equivalence_bounds},
      {"interpolation_remainder_bound", detail::interpolation_remainder_bound},
      {"manufactured_residuals", detail::manufactured_residuals},
      {"boundary_kernel_condition", detail::boundary_kernel_condition},
      {"discrete_norm_fidelity", detail::discrete_norm_fidelity},
      {"full_rank_proven_regime", detail::full_rank_proven_regime},
      {"gauss_weighting_coincidence", detail::gauss_weighting_coincidence},
      {"method_consistency_index1", detail::method_consistency_index1},
      {"sigma_trend", detail::sigma_trend},
      {"quadrature_resolution_stability", detail::quadrature_resolution_stability},
      {"h1_norm_consistency", detail::h1_norm_consistency},
      {"study_determinism", detail::study_determinism},
  };
  std::vector<CheckResult> results;
  results.reserve(checks.size());
  for (const auto& [name, fn] : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn();
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.name = name;  // registry name wins; keeps naming consistent on exceptions
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

inline std::string summarize(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : results) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " — " << r.detail << '\n';
    if (!r.passed) ++failed;
  }
  os << results.size() - failed << "/" << results.size() << " checks passed\n";
  return os.str();
}

}  // namespace daecol::selftest
