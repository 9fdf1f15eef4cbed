// Built-in boundary value problems used by the convergence studies.
#pragma once

#include <numbers>
#include <string>

#include "wg/element.hpp"
#include "wg/exceptions.hpp"

namespace wg {

struct Problem {
  std::string name;
  ScalarField a;
  ScalarField c;
  ScalarField f;
  ScalarField g;      // Dirichlet data, the exact trace for the built-ins
  ScalarField exact;  // null if unknown
};

/// a = 2 - x(1-x), c = 1, u = 2^6 x^2(1-x)^2 y^2(1-y)^2.
inline Problem make_test1() {
  const auto X = [](double x) { return x * x * (1.0 - x) * (1.0 - x); };
  const auto dX = [](double x) { return 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x); };
  const auto ddX = [](double x) { return 12.0 * x * x - 12.0 * x + 2.0; };
  Problem prob;
  prob.name = "test1";
  prob.a = [](Point p) { return 2.0 - p.x * (1.0 - p.x); };
  prob.c = [](Point) { return 1.0; };
  prob.exact = [X](Point p) { return 64.0 * X(p.x) * X(p.y); };
  prob.g = prob.exact;
  prob.f = [X, dX, ddX](Point p) {
    const double a = 2.0 - p.x * (1.0 - p.x);
    const double ax = 2.0 * p.x - 1.0;
    const double u = 64.0 * X(p.x) * X(p.y);
    const double ux = 64.0 * dX(p.x) * X(p.y);
    const double uxx = 64.0 * ddX(p.x) * X(p.y);
    const double uyy = 64.0 * X(p.x) * ddX(p.y);
    return -(ax * ux + a * (uxx + uyy)) + u;
  };
  return prob;
}

/// a = 1, c = 0, u = 4 (x - x^3)(y - y^3).
inline Problem make_test2() {
  Problem prob;
  prob.name = "test2";
  prob.a = [](Point) { return 1.0; };
  prob.c = [](Point) { return 0.0; };
  prob.exact = [](Point p) {
    return 4.0 * (p.x - p.x * p.x * p.x) * (p.y - p.y * p.y * p.y);
  };
  prob.g = prob.exact;
  prob.f = [](Point p) {
    return 24.0 * p.x * (p.y - p.y * p.y * p.y) + 24.0 * p.y * (p.x - p.x * p.x * p.x);
  };
  return prob;
}

/// Poisson problem with u = sin(pi x) sin(pi y).
inline Problem make_test3() {
  constexpr double pi = std::numbers::pi;
  Problem prob;
  prob.name = "test3";
  prob.a = [](Point) { return 1.0; };
  prob.c = [](Point) { return 0.0; };
  prob.exact = [](Point p) { return std::sin(pi * p.x) * std::sin(pi * p.y); };
  prob.g = prob.exact;
  prob.f = [](Point p) { return 2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y); };
  return prob;
}

/// u = x + y with a = 1, c = 0; in the discrete space for every k, so all
/// errors vanish to solver tolerance.
inline Problem make_manufactured() {
  Problem prob;
  prob.name = "manufactured";
  prob.a = [](Point) { return 1.0; };
  prob.c = [](Point) { return 0.0; };
  prob.exact = [](Point p) { return p.x + p.y; };
  prob.g = prob.exact;
  prob.f = [](Point) { return 0.0; };
  return prob;
}

inline Problem problem_by_name(const std::string& name) {
  if (name == "test1") return make_test1();
  if (name == "test2") return make_test2();
  if (name == "test3") return make_test3();
  if (name == "manufactured") return make_manufactured();
  throw UsageError("unknown test case '" + name +
                   "' (expected test1, test2, test3 or manufactured)");
}

}  // namespace wg
