#include <catch2/catch_amalgamated.hpp>

#include <daecol/meshspace.hpp>
#include <daecol/problems.hpp>

#include <cmath>

using namespace daecol;

namespace {

// manufactured-solution consistency: the exact solution must satisfy the
// DAE (residual through the analytic derivative oracle, cross-checked by
// finite differences) and the boundary conditions, and the boundary
// matrices must not touch algebraic components
void check_problem_consistency(const problems::LinearDAEProblem& p) {
  REQUIRE(p.exact.has_value());
  REQUIRE(static_cast<int>(p.diff_components.size()) == p.k);

  for (int s = 0; s < 50; ++s) {
    const double t = p.a + (p.b - p.a) * s / 49.0;
    const Eigen::VectorXd res =
        p.A(t) * p.exact->d_diff(t) + p.B(t) * p.exact->value(t) - p.g(t);
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-10);
  }

  // derivative oracle vs central finite differences of the value oracle
  const double h = 1e-6;
  for (int s = 0; s < 20; ++s) {
    const double t = (p.a + 2 * h) + (p.b - p.a - 4 * h) * s / 19.0;
    const Eigen::VectorXd vp = p.exact->value(t + h);
    const Eigen::VectorXd vm = p.exact->value(t - h);
    const Eigen::VectorXd dd = p.exact->d_diff(t);
    for (int i = 0; i < p.k; ++i) {
      const int c = p.diff_components[i];
      CHECK(std::abs(dd(i) - (vp(c) - vm(c)) / (2 * h)) <= 1e-6);
    }
  }

  if (p.l > 0) {
    const Eigen::VectorXd bc_res =
        p.G_a * p.exact->value(p.a) + p.G_b * p.exact->value(p.b) - p.d;
    CHECK(bc_res.cwiseAbs().maxCoeff() <= 1e-12);
  }

  // boundary matrices must have zero columns on algebraic components
  for (int c = 0; c < p.m; ++c) {
    const bool is_diff =
        std::find(p.diff_components.begin(), p.diff_components.end(), c) !=
        p.diff_components.end();
    if (is_diff) continue;
    if (p.l > 0) {
      CHECK(p.G_a.col(c).cwiseAbs().maxCoeff() == 0.0);
      CHECK(p.G_b.col(c).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

}  // namespace

TEST_CASE("every registry problem is self-consistent", "[problems][invariant]") {
  for (const auto& p : problems::all_registry_problems()) {
    INFO("problem: " << p.name);
    check_problem_consistency(p);
  }
  // parametrized variants too
  check_problem_consistency(problems::build_index3_example(-0.5));
  check_problem_consistency(problems::build_poly_exact_demo(1));
  check_problem_consistency(problems::build_poly_exact_demo(2));
  check_problem_consistency(problems::build_poly_exact_demo(5));
}

TEST_CASE("index3 benchmark matches its documented anchor values", "[problems][index3]") {
  const auto p = problems::build_index3_example(-2.0);
  CHECK(p.m == 3);
  CHECK(p.k == 2);
  CHECK(p.diff_components == std::vector<int>{1, 2});
  CHECK(p.l == 0);  // injective operator: no side conditions admitted
  CHECK(p.mu == 3);
  CHECK(p.a == 0.0);
  CHECK(p.b == 1.0);

  // exact solution at t=0 is (0, 0, 1)
  const Eigen::VectorXd x0 = p.exact->value(0.0);
  CHECK(x0(0) == 0.0);
  CHECK(x0(1) == 0.0);
  CHECK(x0(2) == 1.0);

  // third right-hand side component: g3(t) = -2t e^-2t sin t + e^-t cos t
  const double expect_g3_1 = -2.0 * std::exp(-2.0) * std::sin(1.0) + std::exp(-1.0) * std::cos(1.0);
  CHECK(std::abs(p.g(1.0)(2) - expect_g3_1) < 1e-14);
  for (double t : {0.0, 0.37, 1.0}) {
    const double expect = -2.0 * t * std::exp(-2 * t) * std::sin(t) + std::exp(-t) * std::cos(t);
    CHECK(std::abs(p.g(t)(2) - expect) < 1e-14);
  }
}

TEST_CASE("mehr benchmark satisfies its row identity and anchors", "[problems][mehr]") {
  const auto p = problems::build_mehr_reduced();
  CHECK(p.m == 4);
  CHECK(p.k == 2);
  CHECK(p.diff_components == std::vector<int>{0, 1});
  CHECK(p.l == 2);
  CHECK(p.mu == 3);
  CHECK(p.a == 1.0);
  CHECK(p.b == 2.0);

  // row 2 minus t*(row 1) of the system equals component w of the solution:
  // g2(t) = t*g1(t) + w(t)
  for (int s = 0; s < 50; ++s) {
    const double t = 1.0 + s / 49.0;
    const Eigen::VectorXd g = p.g(t);
    const double w = p.exact->value(t)(0);
    CHECK(std::abs(g(2) - (t * g(1) + w)) <= 1e-12);
  }

  // w(1) = e^-1 + 2 sin 1
  CHECK(std::abs(p.exact->value(1.0)(0) - (std::exp(-1.0) + 2.0 * std::sin(1.0))) < 1e-14);
  CHECK(std::abs(p.d(0) - (std::exp(-1.0) + 2.0 * std::sin(1.0))) < 1e-14);
}

TEST_CASE("mixed-order reduction has the expected right-hand side", "[problems][mixed_order]") {
  const auto p = problems::build_mixed_order_intro();
  CHECK(p.m == 3);
  CHECK(p.k == 3);
  CHECK(p.mu == 1);
  CHECK(p.l == 3);

  // g1 = x1'' + x1 vanishes identically for x1 = cos t
  for (double t : {0.0, 0.3, 0.71, 1.0}) {
    CHECK(p.g(t)(0) == 0.0);
    CHECK(p.g(t)(1) == 0.0);
  }
  // g2(0) = x2'(0) + x1(0) + x2(0) = -1 + 1 + 1 = 1
  CHECK(std::abs(p.g(0.0)(2) - 1.0) < 1e-15);
}

TEST_CASE("index1 demo matches its closed forms", "[problems][index1]") {
  const auto p = problems::build_index1_demo();
  CHECK(p.m == 2);
  CHECK(p.k == 1);
  CHECK(p.mu == 1);
  CHECK(p.l == 1);
  // g = (0, sin t)
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(p.g(t)(0) == 0.0);
    CHECK(std::abs(p.g(t)(1) - std::sin(t)) < 1e-15);
  }
  CHECK(std::abs(p.d(0) - 1.0) < 1e-15);
}

TEST_CASE("poly demo solutions live exactly in the matching ansatz space",
          "[problems][poly]") {
  for (int N : {1, 2, 3, 4}) {
    const auto p = problems::build_poly_exact_demo(N);
    if (N == 3) {
      // x1 = t^3 - t, x2 = 2 t^2
      CHECK(std::abs(p.exact->value(0.5)(0) - (0.125 - 0.5)) < 1e-15);
      CHECK(std::abs(p.exact->value(0.5)(1) - 0.5) < 1e-15);
    }
    // interpolating the exact solution into the space reproduces it
    const auto space = meshspace::make_space(meshspace::uniform_partition(p.a, p.b, 3), N, p.m,
                                             p.diff_components);
    const auto f = [&p](double t) { return p.exact->value(t); };
    const auto f_D = [&p](double t) { return p.exact_diff_values(t); };
    const auto sol = meshspace::interpolate_reference(space, f, f_D);
    for (int s = 0; s <= 60; ++s) {
      const double t = s / 60.0;
      CHECK((sol.eval(t) - p.exact->value(t)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("registry strings parse into problem ids", "[problems][registry]") {
  auto id = problems::parse_problem_id("index3?eta=-2");
  CHECK(id.name == problems::ProblemName::Index3Example);
  CHECK(id.eta == -2.0);

  id = problems::parse_problem_id("index3");
  CHECK(id.eta == -2.0);

  id = problems::parse_problem_id("index3?eta=-0.5");
  CHECK(id.eta == -0.5);
  CHECK(problems::build_problem(id).name == "index3?eta=-0.500000");

  id = problems::parse_problem_id("poly?N=4");
  CHECK(id.name == problems::ProblemName::PolyExactDemo);
  CHECK(id.poly_N == 4);

  for (const char* s : {"mehr", "mehr_reduced", "mixed_order", "index1_demo", "poly"}) {
    CHECK_NOTHROW(problems::build_problem(problems::parse_problem_id(s)));
  }

  CHECK_THROWS_AS(problems::parse_problem_id("unknown"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("index3?beta=1"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("index3?eta=abc"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("index3?eta"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("poly?N=0"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("poly?N=2.5"), std::invalid_argument);
  CHECK_THROWS_AS(problems::parse_problem_id("mehr?eta=1"), std::invalid_argument);
}
