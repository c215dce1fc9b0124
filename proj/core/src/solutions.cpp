#include "felab/solutions.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace felab {

double FunctionField::derivative(MultiIndex alpha, Vec2 p) const {
  if (alpha.order() != 0)
    throw std::logic_error("FunctionField: derivatives are not available");
  return f_(p);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// k-th derivative of sin(pi * t).
double sin_pi_deriv(int k, double t) {
  const double arg = kPi * t;
  double base;
  switch (k % 4) {
    case 0: base = std::sin(arg); break;
    case 1: base = std::cos(arg); break;
    case 2: base = -std::sin(arg); break;
    default: base = -std::cos(arg); break;
  }
  return std::pow(kPi, k) * base;
}

// k-th derivative of sin^2(pi * t) = (1 - cos(2 pi t)) / 2.
double sin2_pi_deriv(int k, double t) {
  if (k == 0) {
    const double s = std::sin(kPi * t);
    return s * s;
  }
  const double arg = 2.0 * kPi * t;
  double base;
  switch (k % 4) {
    case 0: base = std::cos(arg); break;
    case 1: base = -std::sin(arg); break;
    case 2: base = -std::cos(arg); break;
    default: base = std::sin(arg); break;
  }
  return -0.5 * std::pow(2.0 * kPi, k) * base;
}

ManufacturedSolution make_sinsin() {
  ManufacturedSolution u;
  u.id = "sinsin";
  u.has_eigenvalue = true;
  u.eigenvalue = 2.0 * kPi * kPi;
  u.l2_norm = 0.5;
  u.kernel = [](MultiIndex a, Vec2 p) {
    return sin_pi_deriv(a.dx, p.x) * sin_pi_deriv(a.dy, p.y);
  };
  return u;
}

ManufacturedSolution make_sinsin2() {
  ManufacturedSolution u;
  u.id = "sinsin2";
  u.kernel = [](MultiIndex a, Vec2 p) {
    return sin2_pi_deriv(a.dx, p.x) * sin2_pi_deriv(a.dy, p.y);
  };
  return u;
}

ManufacturedSolution make_polyplus() {
  ManufacturedSolution u;
  u.id = "polyplus";
  Poly2 poly = Poly2::monomial(3, 1);  // x^3 y
  u.kernel = [poly](MultiIndex a, Vec2 p) {
    const double trig = sin_pi_deriv(a.dx, p.x) * sin_pi_deriv(a.dy, p.y);
    if (a.dx > Poly2::kMaxExp || a.dy > Poly2::kMaxExp) return trig;
    return poly.eval_deriv(a, p) + trig;
  };
  return u;
}

ManufacturedSolution make_cubic() {
  ManufacturedSolution u;
  u.id = "cubic";
  u.is_polynomial = true;
  u.poly_degree = 3;
  Poly2 poly = Poly2::monomial(3, 0) + Poly2::monomial(2, 1, -1.0);  // x^3 - x^2 y
  u.kernel = [poly](MultiIndex a, Vec2 p) {
    if (a.dx > Poly2::kMaxExp || a.dy > Poly2::kMaxExp) return 0.0;
    return poly.eval_deriv(a, p);
  };
  return u;
}

}  // namespace

const ManufacturedSolution& manufactured(const std::string& id) {
  static const std::map<std::string, ManufacturedSolution> catalog = [] {
    std::map<std::string, ManufacturedSolution> c;
    for (auto& u : {make_sinsin(), make_sinsin2(), make_polyplus(), make_cubic()})
      c.emplace(u.id, u);
    return c;
  }();
  auto it = catalog.find(id);
  if (it == catalog.end())
    throw std::invalid_argument("manufactured: unknown solution id '" + id + "'");
  return it->second;
}

std::vector<std::string> manufactured_ids() { return {"sinsin", "sinsin2", "polyplus", "cubic"}; }

}  // namespace felab
