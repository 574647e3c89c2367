#pragma once

// Error measurement, convergence studies, and report serialization for
// piecewise-polynomial approximations of differential-algebraic systems.

#include <daecol/collocation.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace daecol::analysis {

// Componentwise and combined error measures of an approximate solution.
// The combined value aggregates algebraic components in L2 and
// differentiated components in H1 (value plus derivative of the
// differentiated part), matching the norm in which the underlying
// operator equation is well posed.
struct ErrorReport {
  Eigen::VectorXd max_err;  // per component, dense sampling
  Eigen::VectorXd l2_err;   // per component
  Eigen::VectorXd h1_err;   // per differentiated component (diff_components order)
  double combined = 0.0;
};

inline ErrorReport error_norms(const meshspace::PwPolySolution& x,
                               const problems::ExactSolution& exact, int quad_order = 0) {
  const auto& space = x.space;
  const int m = space.m;
  const int k = space.k;
  if (quad_order <= 0) quad_order = std::max(2 * space.N + 3, 10);
  const auto rule = numkit::gauss_legendre_rule(quad_order);

  ErrorReport rep;
  rep.max_err = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd l2_sq = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd d_sq = Eigen::VectorXd::Zero(k);

  for (int j = 0; j < space.partition.n(); ++j) {
    const double t0 = space.partition.nodes[j];
    const double hj = space.partition.h(j);
    for (int s = 0; s <= 100; ++s) {
      const double tau = s / 100.0;
      const Eigen::VectorXd e = (x.eval_local(j, tau) - exact.value(t0 + tau * hj)).cwiseAbs();
      rep.max_err = rep.max_err.cwiseMax(e);
    }
    for (int q = 0; q < rule.order; ++q) {
      const double tau = rule.nodes[q];
      const double t = t0 + tau * hj;
      const double w = hj * rule.weights[q];
      const Eigen::VectorXd e = x.eval_local(j, tau) - exact.value(t);
      l2_sq += w * e.cwiseAbs2();
      if (k > 0) {
        const Eigen::VectorXd ed = x.eval_Dx_prime_local(j, tau) - exact.d_diff(t);
        d_sq += w * ed.cwiseAbs2();
      }
    }
  }

  rep.l2_err = l2_sq.cwiseSqrt();
  rep.h1_err = Eigen::VectorXd::Zero(k);
  double comb_sq = 0.0;
  std::vector<char> is_diff(static_cast<std::size_t>(m), 0);
  for (int d = 0; d < k; ++d) {
    const int comp = space.diff_components[static_cast<std::size_t>(d)];
    is_diff[static_cast<std::size_t>(comp)] = 1;
    rep.h1_err(d) = std::sqrt(l2_sq(comp) + d_sq(d));
    comb_sq += l2_sq(comp) + d_sq(d);
  }
  for (int c = 0; c < m; ++c) {
    if (!is_diff[static_cast<std::size_t>(c)]) comb_sq += l2_sq(c);
  }
  rep.combined = std::sqrt(comb_sq);
  return rep;
}

// order_i = log2(e_{i-1} / e_i) for a sequence obtained by doubling n
inline std::vector<double> observed_order(const std::vector<double>& errors) {
  if (errors.size() < 2) {
    throw std::invalid_argument("observed_order: need at least two error values");
  }
  for (double e : errors) {
    if (!(e > 0.0)) throw std::invalid_argument("observed_order: errors must be positive");
  }
  std::vector<double> orders(errors.size() - 1);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders[i - 1] = std::log2(errors[i - 1] / errors[i]);
  }
  return orders;
}

struct StudyParams {
  int N = 3;
  int M = 4;
  numkit::NodeFamily family = numkit::NodeFamily::Gauss;
  collocation::Method method = collocation::Method::LeastSquares;
  collocation::Weighting weighting = collocation::Weighting::Gram;
  std::vector<int> n_list;
  int quad_order = 0;  // 0: pick from the ansatz degree
  bool want_sigma = true;
};

struct StudyRow {
  int n = 0;
  bool failed = false;
  std::string message;
  ErrorReport errors;
  double order_combined = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> order_max;  // per component, NaN where undefined
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double assembly_s = 0.0;
  double solve_s = 0.0;
  bool rank_deficient = false;
  bool below_theory_M = false;
};

struct StudyResult {
  std::string problem;
  collocation::Method method = collocation::Method::LeastSquares;
  collocation::Weighting weighting = collocation::Weighting::Gram;
  int N = 0;
  int M = 0;
  numkit::NodeFamily family = numkit::NodeFamily::Gauss;
  int m = 0;
  int k = 0;
  std::vector<int> diff_components;
  std::vector<StudyRow> rows;
};

namespace detail {

// worker count: DAECOL_THREADS if set and positive, hardware concurrency
// otherwise, never more than the number of jobs
inline int thread_count(int njobs) {
  int want = 0;
  if (const char* env = std::getenv("DAECOL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0') want = static_cast<int>(v);
  }
  if (want <= 0) want = static_cast<int>(std::thread::hardware_concurrency());
  if (want <= 0) want = 1;
  return std::max(1, std::min(want, njobs));
}

}  // namespace detail

// One solve per n in params.n_list; failures are recorded per row and do not
// abort the remaining rows. Rows may be computed concurrently; results are
// deterministic because each row depends only on its own inputs.
inline StudyResult run_study(const problems::LinearDAEProblem& p, const StudyParams& params) {
  for (std::size_t i = 1; i < params.n_list.size(); ++i) {
    if (params.n_list[i] <= params.n_list[i - 1]) {
      throw std::invalid_argument("run_study: n_list must be strictly increasing");
    }
  }
  if (!params.n_list.empty() && params.n_list.front() < 1) {
    throw std::invalid_argument("run_study: n must be at least 1");
  }
  if (!p.exact) {
    throw std::invalid_argument("run_study: problem carries no reference solution");
  }

  StudyResult res;
  res.problem = p.name;
  res.method = params.method;
  res.weighting = params.weighting;
  res.N = params.N;
  res.M = params.M;
  res.family = params.family;
  res.m = p.m;
  res.k = p.k;
  res.diff_components = p.diff_components;
  res.rows.resize(params.n_list.size());

  const auto run_row = [&](std::size_t idx) {
    StudyRow& row = res.rows[idx];
    row.n = params.n_list[idx];
    try {
      const auto scheme =
          collocation::make_scheme(params.N, params.M, params.family, params.method);
      const auto space =
          collocation::make_space_for(p, meshspace::uniform_partition(p.a, p.b, row.n), params.N);
      const auto rep =
          collocation::solve(p, space, scheme, params.weighting, params.want_sigma);
      row.errors = error_norms(rep.solution, *p.exact, params.quad_order);
      row.sigma_min = rep.sigma_min;
      row.sigma_max = rep.sigma_max;
      row.assembly_s = rep.assembly_s;
      row.solve_s = rep.solve_s;
      row.rank_deficient = rep.rank_deficient;
      row.below_theory_M = rep.below_theory_M;
    } catch (const std::exception& ex) {
      row.failed = true;
      row.message = ex.what();
    }
  };

  const int threads = detail::thread_count(static_cast<int>(res.rows.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < res.rows.size(); ++i) run_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < res.rows.size(); i = next.fetch_add(1)) {
          run_row(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    StudyRow& row = res.rows[i];
    row.order_max.assign(static_cast<std::size_t>(p.m),
                         std::numeric_limits<double>::quiet_NaN());
    if (i == 0 || row.failed || res.rows[i - 1].failed) continue;
    const StudyRow& prev = res.rows[i - 1];
    if (prev.errors.combined > 0.0 && row.errors.combined > 0.0) {
      row.order_combined = std::log2(prev.errors.combined / row.errors.combined);
    }
    for (int c = 0; c < p.m; ++c) {
      if (prev.errors.max_err(c) > 0.0 && row.errors.max_err(c) > 0.0) {
        row.order_max[static_cast<std::size_t>(c)] =
            std::log2(prev.errors.max_err(c) / row.errors.max_err(c));
      }
    }
  }
  return res;
}

enum class ReportFormat { Csv, Markdown };

namespace detail {

inline std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

inline std::string fmt_order(double v) {
  if (!std::isfinite(v)) return "--";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string write_report(const StudyResult& r, ReportFormat format) {
  std::ostringstream os;
  const int kdiff = static_cast<int>(r.diff_components.size());
  if (format == ReportFormat::Csv) {
    os << "problem,method,N,M,node_family,weighting,n";
    for (int c = 1; c <= r.m; ++c) os << ",err_max_" << c;
    for (int c = 1; c <= r.m; ++c) os << ",err_L2_" << c;
    for (int d : r.diff_components) os << ",err_H1_" << (d + 1);
    os << ",combined,order_combined,sigma_min,sigma_max,assembly_s,solve_s\n";
    for (const auto& row : r.rows) {
      os << detail::csv_quote(r.problem) << ',' << collocation::to_string(r.method) << ','
         << r.N << ',' << r.M << ',' << numkit::to_string(r.family) << ','
         << collocation::to_string(r.weighting) << ',' << row.n;
      if (row.failed) {
        // error and diagnostic fields stay empty for a failed row
        for (int i = 0; i < 2 * r.m + kdiff + 6; ++i) os << ',';
      } else {
        for (int c = 0; c < r.m; ++c) os << ',' << detail::fmt_sci(row.errors.max_err(c));
        for (int c = 0; c < r.m; ++c) os << ',' << detail::fmt_sci(row.errors.l2_err(c));
        for (int d = 0; d < kdiff; ++d) os << ',' << detail::fmt_sci(row.errors.h1_err(d));
        os << ',' << detail::fmt_sci(row.errors.combined) << ',';
        if (std::isfinite(row.order_combined)) os << detail::fmt_sci(row.order_combined);
        os << ',' << detail::fmt_sci(row.sigma_min) << ',' << detail::fmt_sci(row.sigma_max)
           << ',' << detail::fmt_sci(row.assembly_s) << ',' << detail::fmt_sci(row.solve_s);
      }
      os << '\n';
    }
    return os.str();
  }

  // markdown: one table with error | order pairs per component plus the
  // combined measure, in the layout of the benchmark tables
  os << "# " << r.problem << " — " << collocation::to_string(r.method) << ", N=" << r.N
     << ", M=" << r.M << ", nodes=" << numkit::to_string(r.family)
     << ", weighting=" << collocation::to_string(r.weighting) << "\n\n";
  os << "| n |";
  for (int c = 1; c <= r.m; ++c) os << " err_max_" << c << " | order |";
  os << " combined | order | sigma_min |\n";
  os << "|--:|";
  for (int c = 0; c < 2 * r.m + 3; ++c) os << " ---: |";
  os << '\n';
  std::vector<std::string> notes;
  for (const auto& row : r.rows) {
    os << "| " << row.n << " |";
    if (row.failed) {
      os << " failed |";
      for (int c = 0; c < 2 * r.m + 2; ++c) os << " -- |";
      notes.push_back("n=" + std::to_string(row.n) + ": " + row.message);
    } else {
      for (int c = 0; c < r.m; ++c) {
        os << ' ' << detail::fmt_short(row.errors.max_err(c)) << " | "
           << detail::fmt_order(row.order_max[static_cast<std::size_t>(c)]) << " |";
      }
      os << ' ' << detail::fmt_short(row.errors.combined) << " | "
         << detail::fmt_order(row.order_combined) << " | "
         << detail::fmt_short(row.sigma_min) << " |";
    }
    os << '\n';
  }
  for (const auto& note : notes) os << "\n- " << note;
  if (!notes.empty()) os << '\n';
  return os.str();
}

}  // namespace daecol::analysis
