#pragma once

#include "felab/polynomial.hpp"

namespace felab {

/// A smooth scalar function with exact derivatives, the "u" of every error
/// measurement. Implementations must provide derivatives of every order the
/// caller requests (manufactured solutions go up to order 3 in closed form).
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double derivative(MultiIndex alpha, Vec2 p) const = 0;
  double value(Vec2 p) const { return derivative({0, 0}, p); }
};

/// Polynomial field backed by Poly2 (exact derivatives of any order).
class PolynomialField : public ScalarField {
 public:
  explicit PolynomialField(Poly2 p) : poly_(std::move(p)) {}
  double derivative(MultiIndex alpha, Vec2 p) const override {
    return poly_.eval_deriv(alpha, p);
  }

 private:
  Poly2 poly_;
};

/// s * f for a fixed scalar s.
class ScaledField : public ScalarField {
 public:
  ScaledField(double s, const ScalarField& f) : s_(s), f_(f) {}
  double derivative(MultiIndex alpha, Vec2 p) const override {
    return s_ * f_.derivative(alpha, p);
  }

 private:
  double s_;
  const ScalarField& f_;
};

}  // namespace felab
