#pragma once

#include <array>

#include "felab/geometry.hpp"

namespace felab {

/// Derivative multi-index (dx, dy); order() is its length |alpha|.
struct MultiIndex {
  int dx = 0;
  int dy = 0;

  int order() const { return dx + dy; }
  bool operator==(const MultiIndex&) const = default;
};

/// Bivariate polynomial with exponents up to 4 in each variable, stored as a
/// dense coefficient grid. Large enough for every local space in the element
/// catalog (max: x^2 y^2 for the biquadratic) and its derivatives.
class Poly2 {
 public:
  static constexpr int kMaxExp = 4;

  Poly2() = default;

  static Poly2 monomial(int ex, int ey, double coeff = 1.0);

  double& coeff(int ex, int ey) { return c_[ex][ey]; }
  double coeff(int ex, int ey) const { return c_[ex][ey]; }

  double eval(Vec2 p) const;
  double eval_deriv(MultiIndex alpha, Vec2 p) const;

  /// Exact partial derivative as a new polynomial.
  Poly2 derivative(MultiIndex alpha) const;

  Poly2& operator+=(const Poly2& o);
  Poly2& operator*=(double s);
  friend Poly2 operator*(double s, Poly2 p) {
    p *= s;
    return p;
  }
  friend Poly2 operator+(Poly2 a, const Poly2& b) {
    a += b;
    return a;
  }

  /// Max total degree of the nonzero terms (-1 for the zero polynomial).
  int total_degree() const;

 private:
  std::array<std::array<double, kMaxExp + 1>, kMaxExp + 1> c_ = {};
};

}  // namespace felab
