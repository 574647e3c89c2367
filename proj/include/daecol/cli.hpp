#pragma once

// Command-line frontend: one-shot solves, convergence studies, side-by-side
// method comparison, and the property self-test, over the built-in problem
// registry.

#include <daecol/analysis.hpp>
#include <daecol/selftest.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace daecol::cli {

struct CliConfig {
  std::string problem = "index3";
  double eta = -2.0;
  int N = 3;
  int M = 0;  // 0: N+1 for least-squares variants, N for standard
  std::string nodes = "gauss";
  std::string method = "lsq";
  std::string weighting = "gram";
  int n = 10;
  int n0 = 10;
  int doublings = 3;
  std::string out;  // empty: stdout
  std::string format = "csv";
};

namespace detail {

// exit codes: 0 success, 1 validation/usage error, 2 numerical failure
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

inline int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream os(out_path);
  if (!os) {
    std::cerr << "error: cannot open output path: " << out_path << '\n';
    return kExitUsage;
  }
  os << text;
  os.flush();
  if (!os) {
    std::cerr << "error: failed writing output path: " << out_path << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

inline collocation::Method parse_method(const std::string& s) {
  if (s == "lsq") return collocation::Method::LeastSquares;
  if (s == "standard") return collocation::Method::Standard;
  if (s == "continuous") return collocation::Method::ContinuousLS;
  throw std::invalid_argument("unknown method: " + s);
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

struct ResolvedRun {
  problems::LinearDAEProblem problem;
  collocation::Method method = collocation::Method::LeastSquares;
  collocation::Weighting weighting = collocation::Weighting::Gram;
  numkit::NodeFamily family = numkit::NodeFamily::Gauss;
  int N = 3;
  int M = 4;
};

// flag validation happens here, before any assembly or factorization
inline ResolvedRun resolve(const CliConfig& cfg, bool eta_given, bool force_lsq = false) {
  auto id = problems::parse_problem_id(cfg.problem);
  if (eta_given) {
    if (id.name != problems::ProblemName::Index3Example) {
      throw std::invalid_argument("--eta applies only to the index3 problem");
    }
    id.eta = cfg.eta;
  }
  ResolvedRun r;
  r.problem = problems::build_problem(id);
  r.method = force_lsq ? collocation::Method::LeastSquares : parse_method(cfg.method);
  r.weighting = (cfg.weighting == "diagonal") ? collocation::Weighting::Diagonal
                                              : collocation::Weighting::Gram;
  r.family = (cfg.nodes == "uniform") ? numkit::NodeFamily::UniformInterior
                                      : numkit::NodeFamily::Gauss;
  if (cfg.N < 1 || cfg.N > 12) throw std::invalid_argument("--N must be between 1 and 12");
  r.N = cfg.N;
  r.M = (cfg.M != 0)
            ? cfg.M
            : (r.method == collocation::Method::Standard ? r.N : r.N + 1);
  if (r.M < 1 || r.M > 64) throw std::invalid_argument("--M must be between 1 and 64");
  collocation::make_scheme(r.N, r.M, r.family, r.method);  // rejects bad combinations
  return r;
}

inline std::vector<int> doubling_list(int n0, int doublings) {
  if (n0 < 1 || n0 > 1000000) throw std::invalid_argument("--n0 must be between 1 and 1000000");
  if (doublings < 0 || doublings > 10) {
    throw std::invalid_argument("--doublings must be between 0 and 10");
  }
  std::vector<int> n_list;
  n_list.reserve(static_cast<std::size_t>(doublings) + 1);
  for (int i = 0; i <= doublings; ++i) n_list.push_back(n0 << i);
  return n_list;
}

inline int run_solve(const CliConfig& cfg, bool eta_given) {
  const ResolvedRun r = resolve(cfg, eta_given);
  if (cfg.n < 1 || cfg.n > 1000000) {
    throw std::invalid_argument("--n must be between 1 and 1000000");
  }
  const auto scheme = collocation::make_scheme(r.N, r.M, r.family, r.method);
  const auto space = collocation::make_space_for(
      r.problem, meshspace::uniform_partition(r.problem.a, r.problem.b, cfg.n), r.N);
  const auto rep = collocation::solve(r.problem, space, scheme, r.weighting, true);

  std::ostringstream os;
  os << "problem = " << r.problem.name << '\n';
  os << "method = " << collocation::to_string(r.method) << "  N = " << r.N << "  M = " << r.M
     << "  nodes = " << numkit::to_string(r.family)
     << "  weighting = " << collocation::to_string(r.weighting) << '\n';
  int rows = 0;
  switch (r.method) {
    case collocation::Method::Standard:
      rows = space.dim();
      break;
    case collocation::Method::ContinuousLS:
      rows = cfg.n * scheme.quad_order * r.problem.m + r.problem.l;
      break;
    default:
      rows = cfg.n * r.M * r.problem.m + r.problem.l;
  }
  os << "n = " << cfg.n << "  unknowns = " << space.dim() << "  equations = " << rows << '\n';
  if (r.problem.exact) {
    const auto err = analysis::error_norms(rep.solution, *r.problem.exact);
    os << "max_err =";
    for (int c = 0; c < r.problem.m; ++c) os << ' ' << fmt(err.max_err(c));
    os << '\n' << "l2_err =";
    for (int c = 0; c < r.problem.m; ++c) os << ' ' << fmt(err.l2_err(c));
    os << '\n' << "h1_err =";
    for (int d = 0; d < r.problem.k; ++d) os << ' ' << fmt(err.h1_err(d));
    os << '\n' << "combined = " << fmt(err.combined) << '\n';
  }
  os << "residual_norm = " << fmt(rep.residual_norm) << "  psi = " << fmt(rep.psi_value) << '\n';
  os << "sigma_min = " << fmt(rep.sigma_min) << "  sigma_max = " << fmt(rep.sigma_max)
     << "  rank_deficient = " << (rep.rank_deficient ? "yes" : "no")
     << "  below_theory_M = " << (rep.below_theory_M ? "yes" : "no") << '\n';
  os << "assembly_s = " << fmt(rep.assembly_s) << "  solve_s = " << fmt(rep.solve_s) << '\n';

  const int rc = emit(os.str(), cfg.out);
  if (rc != kExitOk) return rc;
  if (rep.rank_deficient && r.method != collocation::Method::Standard) return kExitNumerical;
  return kExitOk;
}

inline int study_exit_code(const analysis::StudyResult& res, collocation::Method method) {
  for (const auto& row : res.rows) {
    if (row.failed) return kExitNumerical;
    if (row.rank_deficient && method != collocation::Method::Standard) return kExitNumerical;
  }
  return kExitOk;
}

inline int run_study(const CliConfig& cfg, bool eta_given) {
  const ResolvedRun r = resolve(cfg, eta_given);
  analysis::StudyParams params;
  params.N = r.N;
  params.M = r.M;
  params.family = r.family;
  params.method = r.method;
  params.weighting = r.weighting;
  params.n_list = doubling_list(cfg.n0, cfg.doublings);
  const auto res = analysis::run_study(r.problem, params);
  const auto format =
      (cfg.format == "md") ? analysis::ReportFormat::Markdown : analysis::ReportFormat::Csv;
  const int rc = emit(analysis::write_report(res, format), cfg.out);
  if (rc != kExitOk) return rc;
  return study_exit_code(res, r.method);
}

inline int run_compare(const CliConfig& cfg, bool eta_given) {
  const ResolvedRun r = resolve(cfg, eta_given, /*force_lsq=*/true);
  const auto n_list = doubling_list(cfg.n0, cfg.doublings);
  collocation::make_scheme(r.N, r.N, r.family, collocation::Method::Standard);

  analysis::StudyParams ls;
  ls.N = r.N;
  ls.M = r.M;
  ls.family = r.family;
  ls.method = collocation::Method::LeastSquares;
  ls.weighting = r.weighting;
  ls.n_list = n_list;
  analysis::StudyParams st = ls;
  st.M = r.N;
  st.method = collocation::Method::Standard;

  const auto res_ls = analysis::run_study(r.problem, ls);
  const auto res_st = analysis::run_study(r.problem, st);

  std::string text;
  if (cfg.format == "md") {
    text = analysis::write_report(res_ls, analysis::ReportFormat::Markdown) + "\n" +
           analysis::write_report(res_st, analysis::ReportFormat::Markdown);
  } else {
    const std::string a = analysis::write_report(res_ls, analysis::ReportFormat::Csv);
    const std::string b = analysis::write_report(res_st, analysis::ReportFormat::Csv);
    text = a + b.substr(b.find('\n') + 1);  // shared header
  }
  const int rc = emit(text, cfg.out);
  if (rc != kExitOk) return rc;
  // the standard half is expected to degenerate on higher-index problems;
  // only the least-squares half decides the exit code
  return study_exit_code(res_ls, collocation::Method::LeastSquares);
}

inline int run_selftest(const CliConfig& cfg) {
  const auto results = selftest::run_all();
  const int rc = emit(selftest::summarize(results), cfg.out);
  if (rc != kExitOk) return rc;
  for (const auto& r : results) {
    if (!r.passed) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv) {
  CLI::App app{"Overdetermined least-squares collocation for linear differential-algebraic "
               "equations"};
  app.require_subcommand(1);
  CliConfig cfg;

  const auto add_scheme_flags = [&](CLI::App* sub, bool with_method) {
    sub->add_option("--problem", cfg.problem,
                    "registry problem, optionally parameterized (e.g. index3?eta=-0.5)")
        ->capture_default_str();
    sub->add_option("--eta", cfg.eta, "index3 coupling parameter")->capture_default_str();
    sub->add_option("--N", cfg.N, "ansatz degree")->capture_default_str();
    sub->add_option("--M", cfg.M, "collocation points per subinterval (default N+1, or N "
                                  "for the standard method)");
    sub->add_option("--nodes", cfg.nodes, "collocation node family")
        ->check(CLI::IsMember({"uniform", "gauss"}))
        ->capture_default_str();
    if (with_method) {
      sub->add_option("--method", cfg.method, "collocation method")
          ->check(CLI::IsMember({"lsq", "standard", "continuous"}))
          ->capture_default_str();
    }
    sub->add_option("--weighting", cfg.weighting, "residual row weighting")
        ->check(CLI::IsMember({"gram", "diagonal"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "write output to this path instead of stdout");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one instance and report its errors");
  add_scheme_flags(solve, true);
  solve->add_option("--n", cfg.n, "number of subintervals")->capture_default_str();

  CLI::App* study = app.add_subcommand("study", "run a mesh-doubling convergence study");
  add_scheme_flags(study, true);
  study->add_option("--n0", cfg.n0, "coarsest subinterval count")->capture_default_str();
  study->add_option("--doublings", cfg.doublings, "number of mesh doublings after n0")
      ->capture_default_str();
  study->add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();

  CLI::App* compare =
      app.add_subcommand("compare", "least-squares vs standard collocation on the same grids");
  add_scheme_flags(compare, false);
  compare->add_option("--n0", cfg.n0, "coarsest subinterval count")->capture_default_str();
  compare->add_option("--doublings", cfg.doublings, "number of mesh doublings after n0")
      ->capture_default_str();
  compare->add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the numerical property checks and report per name");
  selftest_cmd->add_option("--out", cfg.out, "write output to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return detail::kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  const bool eta_given = active != selftest_cmd && active->count("--eta") > 0;

  try {
    if (active == solve) return detail::run_solve(cfg, eta_given);
    if (active == study) return detail::run_study(cfg, eta_given);
    if (active == compare) return detail::run_compare(cfg, eta_given);
    return detail::run_selftest(cfg);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return detail::kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return detail::kExitNumerical;
  }
}

}  // namespace daecol::cli
