#include <catch2/catch_amalgamated.hpp>

#include <daecol/analysis.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

using namespace daecol;

namespace {

problems::ExactSolution zero_oracle(int m, int k) {
  problems::ExactSolution z;
  z.value = [m](double) { return Eigen::VectorXd::Zero(m); };
  z.d_diff = [k](double) { return Eigen::VectorXd::Zero(k); };
  return z;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("error norms reproduce hand-computed values for simple errors", "[analysis][norms]") {
  const auto p = problems::build_index1_demo();  // component 0 differentiated, 1 algebraic
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 4), 2);

  SECTION("error (t, 0) carried by the differentiated component") {
    const auto x = meshspace::interpolate_reference(
        space, [](double t) { return Eigen::Vector2d(t, 0.0); },
        [](double t) { return Eigen::VectorXd::Constant(1, t); });
    const auto rep = analysis::error_norms(x, zero_oracle(2, 1));
    CHECK(rep.max_err(0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.max_err(1) <= 1e-12);
    CHECK(rep.l2_err(0) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
    CHECK(rep.l2_err(1) <= 1e-12);
    // value integral 1/3 plus derivative integral 1
    CHECK(rep.h1_err(0) == Catch::Approx(2.0 / std::sqrt(3.0)).margin(1e-12));
    CHECK(rep.combined == Catch::Approx(2.0 / std::sqrt(3.0)).margin(1e-12));
  }

  SECTION("error (0, t) carried by the algebraic component") {
    const auto x = meshspace::interpolate_reference(
        space, [](double t) { return Eigen::Vector2d(0.0, t); },
        [](double) { return Eigen::VectorXd::Zero(1); });
    const auto rep = analysis::error_norms(x, zero_oracle(2, 1));
    CHECK(rep.max_err(1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.l2_err(1) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
    CHECK(rep.h1_err(0) <= 1e-12);
    CHECK(rep.combined == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
  }
}

TEST_CASE("combined norm splits into value and derivative parts", "[analysis][norms]") {
  const auto p = problems::build_index3_example();
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 6), 3);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  meshspace::PwPolySolution x;
  x.space = space;
  x.coeffs.resize(space.dim());
  for (int i = 0; i < space.dim(); ++i) x.coeffs(i) = dist(rng);

  const int q = 12;
  const auto rep = analysis::error_norms(x, zero_oracle(3, 2), q);

  // independent accumulation with the same quadrature
  const auto rule = numkit::gauss_legendre_rule(q);
  Eigen::VectorXd l2_sq = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd d_sq = Eigen::VectorXd::Zero(2);
  for (int j = 0; j < space.partition.n(); ++j) {
    const double hj = space.partition.h(j);
    for (int i = 0; i < rule.order; ++i) {
      const double w = hj * rule.weights[i];
      l2_sq += w * x.eval_local(j, rule.nodes[i]).cwiseAbs2();
      d_sq += w * x.eval_Dx_prime_local(j, rule.nodes[i]).cwiseAbs2();
    }
  }
  for (int d = 0; d < 2; ++d) {
    const int comp = space.diff_components[d];
    const double expect = std::sqrt(l2_sq(comp) + d_sq(d));
    CHECK(rep.h1_err(d) == Catch::Approx(expect).epsilon(1e-12));
  }
  const double comb = std::sqrt(l2_sq(0) + l2_sq(1) + d_sq(0) + l2_sq(2) + d_sq(1));
  CHECK(rep.combined == Catch::Approx(comb).epsilon(1e-12));

  // aggregate dominates each constituent
  CHECK(rep.combined >= rep.l2_err(0) / std::sqrt(3.0));
  CHECK(rep.combined >= rep.h1_err(0) / std::sqrt(3.0));
  CHECK(rep.combined >= rep.h1_err(1) / std::sqrt(3.0));
  CHECK(rep.max_err.minCoeff() >= 0.0);
  CHECK(rep.l2_err.minCoeff() >= 0.0);
}

TEST_CASE("an exactly representable solution measures at machine precision",
          "[analysis][norms]") {
  const auto p = problems::build_poly_exact_demo(3);
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 4), 3);
  const auto scheme = collocation::make_scheme(3, 4, numkit::NodeFamily::Gauss,
                                               collocation::Method::LeastSquares);
  const auto rep = collocation::solve(p, space, scheme);
  const auto err = analysis::error_norms(rep.solution, *p.exact);
  CHECK(err.max_err.maxCoeff() <= 1e-10);
  CHECK(err.l2_err.maxCoeff() <= 1e-10);
  CHECK(err.h1_err.maxCoeff() <= 1e-10);
  CHECK(err.combined <= 1e-10);
}

TEST_CASE("observed orders are base-2 logarithms of successive ratios",
          "[analysis][orders]") {
  const auto trivial = analysis::observed_order({8.0, 4.0, 2.0});
  REQUIRE(trivial.size() == 2);
  CHECK(trivial[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(trivial[1] == Catch::Approx(1.0).margin(1e-14));

  const auto benchmark = analysis::observed_order({1.44e-4, 3.47e-5});
  CHECK(benchmark[0] == Catch::Approx(2.05).margin(0.01));

  const auto slow = analysis::observed_order({5.65e-1, 3.93e-1});
  CHECK(slow[0] == Catch::Approx(0.52).margin(0.01));

  CHECK_THROWS_AS(analysis::observed_order({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(analysis::observed_order({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(analysis::observed_order({1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("quadrature resolution does not move the reported norms", "[analysis][norms]") {
  const auto p = problems::build_index3_example();
  const auto space = collocation::make_space_for(p, meshspace::uniform_partition(0, 1, 10), 3);
  const auto scheme = collocation::make_scheme(3, 7, numkit::NodeFamily::UniformInterior,
                                               collocation::Method::LeastSquares);
  const auto rep = collocation::solve(p, space, scheme);
  const auto base = analysis::error_norms(rep.solution, *p.exact);
  const auto fine = analysis::error_norms(rep.solution, *p.exact, 20);
  CHECK(std::abs(base.combined - fine.combined) < 1e-3 * fine.combined);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(base.l2_err(c) - fine.l2_err(c)) < 1e-3 * fine.l2_err(c));
  }
  for (int d = 0; d < 2; ++d) {
    CHECK(std::abs(base.h1_err(d) - fine.h1_err(d)) < 1e-3 * fine.h1_err(d));
  }
}

TEST_CASE("convergence study reproduces the benchmark combined errors",
          "[analysis][study]") {
  const auto p = problems::build_index3_example();
  analysis::StudyParams params;
  params.N = 3;
  params.M = 7;
  params.family = numkit::NodeFamily::UniformInterior;
  params.n_list = {10, 20, 40};
  const auto res = analysis::run_study(p, params);

  REQUIRE(res.rows.size() == 3);
  CHECK(res.problem == "index3");
  CHECK(res.m == 3);
  CHECK(res.k == 2);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_FALSE(res.rows[i].failed);
    CHECK(res.rows[i].n == params.n_list[i]);
    CHECK_FALSE(res.rows[i].below_theory_M);  // M=7 >= N+3
  }
  // known convergence history: combined error 6.31e-4 at n=10, order near 2
  CHECK(res.rows[0].errors.combined <= 5.0 * 6.31e-4);
  CHECK(res.rows[0].errors.combined >= 6.31e-4 / 5.0);
  CHECK(std::isnan(res.rows[0].order_combined));
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(res.rows[i].errors.combined < res.rows[i - 1].errors.combined);
    CHECK(res.rows[i].order_combined >= 1.5);
    CHECK(res.rows[i].order_combined <= 2.6);
  }
  // componentwise orders at the n=20 -> n=40 transition
  CHECK(res.rows[2].order_max[0] >= 1.7);
  CHECK(res.rows[2].order_max[0] <= 2.4);
  CHECK(res.rows[2].order_max[1] >= 2.0);
  CHECK(res.rows[2].order_max[1] <= 3.2);
  CHECK(res.rows[2].order_max[2] >= 2.0);
  CHECK(res.rows[2].order_max[2] <= 3.2);
  CHECK(res.rows[0].sigma_min > 0.0);
  CHECK(res.rows[0].sigma_max > res.rows[0].sigma_min);

  // gauss nodes at the minimal overdetermination reproduce the second
  // benchmark column
  analysis::StudyParams gp;
  gp.N = 3;
  gp.M = 4;
  gp.family = numkit::NodeFamily::Gauss;
  gp.n_list = {10};
  const auto gres = analysis::run_study(p, gp);
  CHECK(gres.rows[0].errors.combined <= 5.0 * 6.46e-4);
  CHECK(gres.rows[0].errors.combined >= 6.46e-4 / 5.0);
  CHECK(gres.rows[0].below_theory_M);  // M=4 < N+3
}

TEST_CASE("study rows fail independently and keep their diagnostics",
          "[analysis][study]") {
  auto p = problems::build_index1_demo();
  const auto orig = p.exact->value;
  p.exact->value = [orig](double t) {
    if (std::abs(t - 1.0 / 3.0) < 1e-9) throw std::runtime_error("probe failure at one third");
    return orig(t);
  };
  analysis::StudyParams params;
  params.N = 2;
  params.M = 3;
  params.n_list = {2, 3};
  const auto res = analysis::run_study(p, params);
  REQUIRE(res.rows.size() == 2);
  CHECK_FALSE(res.rows[0].failed);
  CHECK(res.rows[0].errors.combined > 0.0);
  CHECK(res.rows[1].failed);
  CHECK(res.rows[1].message.find("one third") != std::string::npos);
  CHECK(std::isnan(res.rows[1].order_combined));

  // serialization keeps the failed row as an empty-field line
  const auto csv = analysis::write_report(res, analysis::ReportFormat::Csv);
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 3);
  const auto fields = split_csv_line(lines[2]);
  CHECK(fields.size() == 18u);
  CHECK(fields[6] == "3");
  CHECK(fields[7].empty());
  CHECK(fields[17].empty());

  const auto md = analysis::write_report(res, analysis::ReportFormat::Markdown);
  CHECK(md.find("failed") != std::string::npos);
  CHECK(md.find("one third") != std::string::npos);
}

TEST_CASE("study input validation", "[analysis][study]") {
  const auto p = problems::build_index1_demo();
  analysis::StudyParams params;
  params.N = 2;
  params.M = 3;
  params.n_list = {4, 4};
  CHECK_THROWS_AS(analysis::run_study(p, params), std::invalid_argument);
  params.n_list = {8, 4};
  CHECK_THROWS_AS(analysis::run_study(p, params), std::invalid_argument);
  params.n_list = {0, 4};
  CHECK_THROWS_AS(analysis::run_study(p, params), std::invalid_argument);

  auto blind = p;
  blind.exact.reset();
  params.n_list = {4};
  CHECK_THROWS_AS(analysis::run_study(blind, params), std::invalid_argument);
}

TEST_CASE("csv serialization follows the declared column contract", "[analysis][report]") {
  const auto p = problems::build_index1_demo();
  analysis::StudyParams params;
  params.N = 2;
  params.M = 3;
  params.n_list = {};
  const auto empty = analysis::run_study(p, params);
  const auto header_only = analysis::write_report(empty, analysis::ReportFormat::Csv);
  CHECK(header_only ==
        "problem,method,N,M,node_family,weighting,n,err_max_1,err_max_2,"
        "err_L2_1,err_L2_2,err_H1_1,combined,order_combined,sigma_min,sigma_max,"
        "assembly_s,solve_s\n");

  params.n_list = {4};
  const auto one = analysis::run_study(p, params);
  const auto csv = analysis::write_report(one, analysis::ReportFormat::Csv);
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  const auto fields = split_csv_line(lines[1]);
  REQUIRE(fields.size() == 18u);
  CHECK(fields[0] == "index1");
  CHECK(fields[1] == "lsq");
  CHECK(fields[2] == "2");
  CHECK(fields[3] == "3");
  CHECK(fields[4] == "gauss");
  CHECK(fields[5] == "gram");
  CHECK(fields[6] == "4");
  // scientific notation with six significant digits
  for (int i : {7, 8, 9, 10, 11, 12, 14, 15, 16, 17}) {
    INFO("field " << i << " = " << fields[i]);
    CHECK(fields[i].find('e') != std::string::npos);
    CHECK(fields[i].find('.') == 1u + (fields[i][0] == '-' ? 1u : 0u));
    CHECK(std::stod(fields[i]) == std::stod(fields[i]));  // parses
  }
  CHECK(fields[13].empty());  // no order on the first row
  CHECK(std::stod(fields[7]) == Catch::Approx(one.rows[0].errors.max_err(0)).epsilon(1e-5));
  CHECK(std::stod(fields[12]) == Catch::Approx(one.rows[0].errors.combined).epsilon(1e-5));

  // a second row carries the observed order
  params.n_list = {4, 8};
  const auto two = analysis::run_study(p, params);
  const auto csv2 = analysis::write_report(two, analysis::ReportFormat::Csv);
  const auto l2 = split_lines(csv2);
  REQUIRE(l2.size() == 3);
  const auto f2 = split_csv_line(l2[2]);
  CHECK_FALSE(f2[13].empty());
  CHECK(std::stod(f2[13]) == Catch::Approx(two.rows[1].order_combined).epsilon(1e-5));
}

TEST_CASE("csv quoting protects reserved characters", "[analysis][report]") {
  analysis::StudyResult res;
  res.problem = "weird,name\"x\"";
  res.m = 1;
  res.k = 0;
  analysis::StudyRow row;
  row.n = 7;
  row.failed = true;
  res.rows.push_back(row);
  const auto csv = analysis::write_report(res, analysis::ReportFormat::Csv);
  const auto lines = split_lines(csv);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].substr(0, 19) == "\"weird,name\"\"x\"\"\",l");
  const auto fields = split_csv_line(lines[1]);
  CHECK(fields[0] == "weird,name\"x\"");
}

TEST_CASE("markdown report mirrors the error-and-order table layout",
          "[analysis][report]") {
  const auto p = problems::build_index3_example();
  analysis::StudyParams params;
  params.N = 3;
  params.M = 4;
  params.n_list = {5, 10};
  const auto res = analysis::run_study(p, params);
  const auto md = analysis::write_report(res, analysis::ReportFormat::Markdown);
  CHECK(md.find("# index3") != std::string::npos);
  CHECK(md.find("| n |") != std::string::npos);
  CHECK(md.find("err_max_1") != std::string::npos);
  CHECK(md.find("combined | order") != std::string::npos);
  CHECK(md.find("| 5 |") != std::string::npos);
  CHECK(md.find("| 10 |") != std::string::npos);
  CHECK(md.find("--") != std::string::npos);  // undefined first-row order
  const auto lines = split_lines(md);
  REQUIRE(lines.size() >= 5);  // title, blank, header, separator, two rows
}

TEST_CASE("study output is deterministic across repeated runs", "[analysis][study]") {
  const auto p = problems::build_index3_example();
  analysis::StudyParams params;
  params.N = 3;
  params.M = 4;
  params.n_list = {5, 10};
  auto a = analysis::run_study(p, params);
  auto b = analysis::run_study(p, params);
  for (auto* r : {&a, &b}) {
    for (auto& row : r->rows) {
      row.assembly_s = 0.0;  // wall-clock timings are the only nondeterministic fields
      row.solve_s = 0.0;
    }
  }
  CHECK(analysis::write_report(a, analysis::ReportFormat::Csv) ==
        analysis::write_report(b, analysis::ReportFormat::Csv));
  CHECK(analysis::write_report(a, analysis::ReportFormat::Markdown) ==
        analysis::write_report(b, analysis::ReportFormat::Markdown));
}
