// Problem model for linear first-order DAEs in properly stated form
//
//     A(t) (Dx)'(t) + B(t) x(t) = g(t),   t in [a,b],
//     G_a x(a) + G_b x(b) = d,
//
// where D selects the k differentiated components, plus a registry of
// benchmark instances with manufactured exact solutions.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace daecol::problems {

/// Exact solution oracle: component values and the derivatives of the
/// differentiated components (ordered like diff_components).
struct ExactSolution {
  std::function<Eigen::VectorXd(double)> value;   // m-vector x(t)
  std::function<Eigen::VectorXd(double)> d_diff;  // k-vector (Dx)'(t)
};

struct LinearDAEProblem {
  std::string name;
  double a = 0.0;
  double b = 1.0;
  int m = 1;                         // system size
  int k = 1;                         // number of differentiated components
  std::vector<int> diff_components;  // sorted 0-based indices, size k
  std::function<Eigen::MatrixXd(double)> A;  // m x k leading coefficient
  std::function<Eigen::MatrixXd(double)> B;  // m x m
  std::function<Eigen::VectorXd(double)> g;  // m-vector right-hand side
  int l = 0;            // number of boundary condition rows
  Eigen::MatrixXd G_a;  // l x m
  Eigen::MatrixXd G_b;  // l x m
  Eigen::VectorXd d;    // l-vector
  int mu = 1;           // declared tractability index (metadata)
  std::optional<ExactSolution> exact;

  /// Values of the differentiated components of the exact solution at t.
  Eigen::VectorXd exact_diff_values(double t) const {
    if (!exact) throw std::logic_error("exact_diff_values: no exact solution attached");
    const Eigen::VectorXd full = exact->value(t);
    Eigen::VectorXd out(k);
    for (int i = 0; i < k; ++i) out(i) = full(diff_components[i]);
    return out;
  }
};

/// Index-3 benchmark on [0,1] (parameter eta, default -2):
///
///     x2' + x1                          = g1
///     t*eta*x2' + x3' + (eta+1)*x2      = g2
///     t*eta*x2 + x3                     = g3
///
/// The associated operator is injective with nonclosed range, so no
/// boundary or initial conditions are admitted (l = 0). The right-hand
/// side is manufactured for x1 = e^-t sin t, x2 = e^-2t sin t,
/// x3 = e^-t cos t.
inline LinearDAEProblem build_index3_example(double eta = -2.0) {
  LinearDAEProblem p;
  p.name = (eta == -2.0) ? "index3" : ("index3?eta=" + std::to_string(eta));
  p.a = 0.0;
  p.b = 1.0;
  p.m = 3;
  p.k = 2;
  p.diff_components = {1, 2};
  p.mu = 3;
  p.A = [eta](double t) {
    Eigen::MatrixXd A(3, 2);
    A << 1.0, 0.0, t * eta, 1.0, 0.0, 0.0;
    return A;
  };
  p.B = [eta](double t) {
    Eigen::MatrixXd B(3, 3);
    B << 1.0, 0.0, 0.0, 0.0, eta + 1.0, 0.0, 0.0, t * eta, 1.0;
    return B;
  };
  p.g = [eta](double t) {
    const double x1 = std::exp(-t) * std::sin(t);
    const double x2 = std::exp(-2 * t) * std::sin(t);
    const double x3 = std::exp(-t) * std::cos(t);
    const double x2p = std::exp(-2 * t) * (std::cos(t) - 2.0 * std::sin(t));
    const double x3p = -std::exp(-t) * (std::cos(t) + std::sin(t));
    Eigen::VectorXd g(3);
    g << x2p + x1, t * eta * x2p + x3p + (eta + 1.0) * x2, t * eta * x2 + x3;
    return g;
  };
  p.l = 0;
  p.G_a = Eigen::MatrixXd::Zero(0, 3);
  p.G_b = Eigen::MatrixXd::Zero(0, 3);
  p.d = Eigen::VectorXd::Zero(0);
  ExactSolution ex;
  ex.value = [](double t) {
    Eigen::VectorXd x(3);
    x << std::exp(-t) * std::sin(t), std::exp(-2 * t) * std::sin(t), std::exp(-t) * std::cos(t);
    return x;
  };
  ex.d_diff = [](double t) {
    Eigen::VectorXd dp(2);
    dp << std::exp(-2 * t) * (std::cos(t) - 2.0 * std::sin(t)),
        -std::exp(-t) * (std::cos(t) + std::sin(t));
    return dp;
  };
  p.exact = std::move(ex);
  return p;
}

/// First-order index-3 reformulation of a second-order two-equation system,
/// on [1,2], with variables (w, v, x1, x2), w and v differentiated:
///
///     w' - v                                   = 0
///     v' + x1 + t*x2                           = g1
///     t*v' + (1+t)*x1 + (t^2+t+1)*x2           = g2
///     w - x1 - (t+1)*x2                        = 0
///
/// Manufactured solution x1 = e^-t, x2 = sin t, hence
/// w = e^-t + (t+1) sin t and v = w' = -e^-t + (t+1) cos t + sin t.
/// Two initial conditions pin w(1) and v(1).
inline LinearDAEProblem build_mehr_reduced() {
  LinearDAEProblem p;
  p.name = "mehr";
  p.a = 1.0;
  p.b = 2.0;
  p.m = 4;
  p.k = 2;
  p.diff_components = {0, 1};
  p.mu = 3;
  p.A = [](double t) {
    Eigen::MatrixXd A(4, 2);
    A << 1.0, 0.0, 0.0, 1.0, 0.0, t, 0.0, 0.0;
    return A;
  };
  p.B = [](double t) {
    Eigen::MatrixXd B(4, 4);
    B << 0.0, -1.0, 0.0, 0.0,                       // w' - v
        0.0, 0.0, 1.0, t,                           // v' + x1 + t x2
        0.0, 0.0, 1.0 + t, t * t + t + 1.0,         // t v' + (1+t)x1 + (t^2+t+1)x2
        1.0, 0.0, -1.0, -(t + 1.0);                 // w - x1 - (t+1)x2
    return B;
  };
  p.g = [](double t) {
    // vp = v'(t) for the manufactured solution
    const double vp = std::exp(-t) - (t + 1.0) * std::sin(t) + 2.0 * std::cos(t);
    const double g1 = vp + std::exp(-t) + t * std::sin(t);
    const double g2 = t * vp + (1.0 + t) * std::exp(-t) + (t * t + t + 1.0) * std::sin(t);
    Eigen::VectorXd g(4);
    g << 0.0, g1, g2, 0.0;
    return g;
  };
  p.l = 2;
  p.G_a = Eigen::MatrixXd::Zero(2, 4);
  p.G_a(0, 0) = 1.0;
  p.G_a(1, 1) = 1.0;
  p.G_b = Eigen::MatrixXd::Zero(2, 4);
  p.d = Eigen::VectorXd(2);
  p.d << std::exp(-1.0) + 2.0 * std::sin(1.0), -std::exp(-1.0) + 2.0 * std::cos(1.0) + std::sin(1.0);
  ExactSolution ex;
  ex.value = [](double t) {
    Eigen::VectorXd x(4);
    x << std::exp(-t) + (t + 1.0) * std::sin(t),
        -std::exp(-t) + (t + 1.0) * std::cos(t) + std::sin(t), std::exp(-t), std::sin(t);
    return x;
  };
  ex.d_diff = [](double t) {
    Eigen::VectorXd dp(2);
    // w' = v, v' as above
    dp << -std::exp(-t) + (t + 1.0) * std::cos(t) + std::sin(t),
        std::exp(-t) - (t + 1.0) * std::sin(t) + 2.0 * std::cos(t);
    return dp;
  };
  p.exact = std::move(ex);
  return p;
}

/// First-order reduction of the mixed-order system { x1'' + x1 = g1,
/// x2' + x1 + x2 = g2 } with u = x1', all three components differentiated
/// (a regular index-1 ODE system; sanity benchmark):
///
///     x1' - u            = 0
///     u'  + x1           = g1
///     x2' + x1 + x2      = g2
///
/// Manufactured solution x1 = cos t, x2 = e^-t (so g1 = 0, g2 = cos t);
/// initial conditions on all three components.
inline LinearDAEProblem build_mixed_order_intro() {
  LinearDAEProblem p;
  p.name = "mixed_order";
  p.a = 0.0;
  p.b = 1.0;
  p.m = 3;
  p.k = 3;
  p.diff_components = {0, 1, 2};
  p.mu = 1;
  p.A = [](double) { return Eigen::MatrixXd::Identity(3, 3); };
  p.B = [](double) {
    Eigen::MatrixXd B(3, 3);
    B << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0;
    return B;
  };
  p.g = [](double t) {
    Eigen::VectorXd g(3);
    g << 0.0, 0.0, std::cos(t);
    return g;
  };
  p.l = 3;
  p.G_a = Eigen::MatrixXd::Identity(3, 3);
  p.G_b = Eigen::MatrixXd::Zero(3, 3);
  p.d = Eigen::VectorXd(3);
  p.d << 1.0, 0.0, 1.0;
  ExactSolution ex;
  ex.value = [](double t) {
    Eigen::VectorXd x(3);
    x << std::cos(t), -std::sin(t), std::exp(-t);
    return x;
  };
  ex.d_diff = [](double t) {
    Eigen::VectorXd dp(3);
    dp << -std::sin(t), -std::cos(t), -std::exp(-t);
    return dp;
  };
  p.exact = std::move(ex);
  return p;
}

/// Small index-1 system on [0,1]:
///
///     x1' + x1      = g1  (= 0)
///     x1  + x2      = g2  (= sin t)
///
/// Exact solution x1 = e^-t, x2 = sin t - e^-t; one initial condition
/// on x1.
inline LinearDAEProblem build_index1_demo() {
  LinearDAEProblem p;
  p.name = "index1";
  p.a = 0.0;
  p.b = 1.0;
  p.m = 2;
  p.k = 1;
  p.diff_components = {0};
  p.mu = 1;
  p.A = [](double) {
    Eigen::MatrixXd A(2, 1);
    A << 1.0, 0.0;
    return A;
  };
  p.B = [](double) {
    Eigen::MatrixXd B(2, 2);
    B << 1.0, 0.0, 1.0, 1.0;
    return B;
  };
  p.g = [](double t) {
    Eigen::VectorXd g(2);
    g << 0.0, std::sin(t);
    return g;
  };
  p.l = 1;
  p.G_a = Eigen::MatrixXd::Zero(1, 2);
  p.G_a(0, 0) = 1.0;
  p.G_b = Eigen::MatrixXd::Zero(1, 2);
  p.d = Eigen::VectorXd::Constant(1, 1.0);
  ExactSolution ex;
  ex.value = [](double t) {
    Eigen::VectorXd x(2);
    x << std::exp(-t), std::sin(t) - std::exp(-t);
    return x;
  };
  ex.d_diff = [](double t) { return Eigen::VectorXd::Constant(1, -std::exp(-t)); };
  p.exact = std::move(ex);
  return p;
}

/// Same structure as index1_demo but with a polynomial exact solution that
/// lies exactly in the degree-N ansatz space on any partition:
/// x1 = t^N - t (degree N), x2 = 2 t^(N-1) (degree N-1). For N = 1 that
/// pair degenerates, so x1 = 2t, x2 = 2 is used instead.
inline LinearDAEProblem build_poly_exact_demo(int N = 3) {
  if (N < 1) throw std::invalid_argument("build_poly_exact_demo: need N >= 1");
  LinearDAEProblem p;
  p.name = (N == 3) ? "poly" : ("poly?N=" + std::to_string(N));
  p.a = 0.0;
  p.b = 1.0;
  p.m = 2;
  p.k = 1;
  p.diff_components = {0};
  p.mu = 1;
  const auto x1 = [N](double t) { return N == 1 ? 2.0 * t : std::pow(t, N) - t; };
  const auto x1p = [N](double t) { return N == 1 ? 2.0 : N * std::pow(t, N - 1) - 1.0; };
  const auto x2 = [N](double t) { return N == 1 ? 2.0 : 2.0 * std::pow(t, N - 1); };
  p.A = [](double) {
    Eigen::MatrixXd A(2, 1);
    A << 1.0, 0.0;
    return A;
  };
  p.B = [](double) {
    Eigen::MatrixXd B(2, 2);
    B << 1.0, 0.0, 1.0, 1.0;
    return B;
  };
  p.g = [x1, x1p, x2](double t) {
    Eigen::VectorXd g(2);
    g << x1p(t) + x1(t), x1(t) + x2(t);
    return g;
  };
  p.l = 1;
  p.G_a = Eigen::MatrixXd::Zero(1, 2);
  p.G_a(0, 0) = 1.0;
  p.G_b = Eigen::MatrixXd::Zero(1, 2);
  p.d = Eigen::VectorXd::Constant(1, x1(0.0));
  ExactSolution ex;
  ex.value = [x1, x2](double t) {
    Eigen::VectorXd x(2);
    x << x1(t), x2(t);
    return x;
  };
  ex.d_diff = [x1p](double t) { return Eigen::VectorXd::Constant(1, x1p(t)); };
  p.exact = std::move(ex);
  return p;
}

enum class ProblemName { Index3Example, MehrReduced, MixedOrderIntro, Index1Demo, PolyExactDemo };

/// Parsed registry address, e.g. "index3?eta=-2" or "poly?N=4".
struct ProblemId {
  ProblemName name = ProblemName::Index3Example;
  double eta = -2.0;  // index3 only
  int poly_N = 3;     // poly only
};

/// Parse a registry string: a problem name, optionally followed by
/// '?key=value[&key=value...]'. Accepted names: index3, mehr, mixed_order,
/// index1, poly (long registry aliases index3_example, mehr_reduced,
/// mixed_order_intro, index1_demo, poly_exact_demo also resolve).
inline ProblemId parse_problem_id(const std::string& s) {
  ProblemId id;
  const auto qpos = s.find('?');
  const std::string base = s.substr(0, qpos);
  if (base == "index3" || base == "index3_example") {
    id.name = ProblemName::Index3Example;
  } else if (base == "mehr" || base == "mehr_reduced") {
    id.name = ProblemName::MehrReduced;
  } else if (base == "mixed_order" || base == "mixed_order_intro") {
    id.name = ProblemName::MixedOrderIntro;
  } else if (base == "index1" || base == "index1_demo") {
    id.name = ProblemName::Index1Demo;
  } else if (base == "poly" || base == "poly_exact_demo") {
    id.name = ProblemName::PolyExactDemo;
  } else {
    throw std::invalid_argument("parse_problem_id: unknown problem '" + base + "'");
  }
  if (qpos == std::string::npos) return id;

  std::string rest = s.substr(qpos + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string kv = rest.substr(0, amp);
    rest = (amp == std::string::npos) ? std::string() : rest.substr(amp + 1);
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("parse_problem_id: malformed parameter '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    std::size_t used = 0;
    double num = 0.0;
    try {
      num = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_problem_id: bad numeric value '" + val + "'");
    }
    if (used != val.size()) {
      throw std::invalid_argument("parse_problem_id: bad numeric value '" + val + "'");
    }
    if (key == "eta" && id.name == ProblemName::Index3Example) {
      id.eta = num;
    } else if (key == "N" && id.name == ProblemName::PolyExactDemo) {
      if (num < 1 || num != std::floor(num)) {
        throw std::invalid_argument("parse_problem_id: N must be a positive integer");
      }
      id.poly_N = static_cast<int>(num);
    } else {
      throw std::invalid_argument("parse_problem_id: parameter '" + key +
                                  "' not accepted by this problem");
    }
  }
  return id;
}

inline LinearDAEProblem build_problem(const ProblemId& id) {
  switch (id.name) {
    case ProblemName::Index3Example:
      return build_index3_example(id.eta);
    case ProblemName::MehrReduced:
      return build_mehr_reduced();
    case ProblemName::MixedOrderIntro:
      return build_mixed_order_intro();
    case ProblemName::Index1Demo:
      return build_index1_demo();
    case ProblemName::PolyExactDemo:
      return build_poly_exact_demo(id.poly_N);
  }
  throw std::logic_error("build_problem: unreachable");
}

/// All registry instances at their default parameters.
inline std::vector<LinearDAEProblem> all_registry_problems() {
  return {build_index3_example(), build_mehr_reduced(), build_mixed_order_intro(),
          build_index1_demo(), build_poly_exact_demo()};
}

}  // namespace daecol::problems
