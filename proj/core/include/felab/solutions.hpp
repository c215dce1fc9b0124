#pragma once

#include <functional>
#include <string>
#include <vector>

#include "felab/field.hpp"

namespace felab {

/// Wraps a plain callable as a value-only field (derivatives unsupported).
class FunctionField : public ScalarField {
 public:
  explicit FunctionField(std::function<double(Vec2)> f) : f_(std::move(f)) {}
  double derivative(MultiIndex alpha, Vec2 p) const override;

 private:
  std::function<double(Vec2)> f_;
};

/// Closed-form solution with exact derivatives (up to order 4, so the
/// Laplace and biharmonic right-hand sides are available analytically).
class ManufacturedSolution : public ScalarField {
 public:
  std::string id;
  bool is_polynomial = false;
  int poly_degree = -1;
  bool has_eigenvalue = false;
  double eigenvalue = 0.0;  // of -Delta u = lambda u with zero trace
  double l2_norm = 0.0;     // exact ||u||_0 when known, else 0

  double derivative(MultiIndex alpha, Vec2 p) const override { return kernel(alpha, p); }

  double f_laplace(Vec2 p) const {  // -Delta u
    return -(kernel({2, 0}, p) + kernel({0, 2}, p));
  }
  double f_biharmonic(Vec2 p) const {  // Delta^2 u
    return kernel({4, 0}, p) + 2.0 * kernel({2, 2}, p) + kernel({0, 4}, p);
  }

  std::function<double(MultiIndex, Vec2)> kernel;
};

/// Catalog ids: sinsin, sinsin2, polyplus, cubic.
const ManufacturedSolution& manufactured(const std::string& id);
std::vector<std::string> manufactured_ids();

}  // namespace felab
