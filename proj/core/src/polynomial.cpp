#include "felab/polynomial.hpp"

#include <cmath>

namespace felab {

Poly2 Poly2::monomial(int ex, int ey, double coeff) {
  Poly2 p;
  p.c_[ex][ey] = coeff;
  return p;
}

double Poly2::eval(Vec2 p) const {
  // Horner in x of Horner-in-y rows.
  double result = 0.0;
  for (int ex = kMaxExp; ex >= 0; --ex) {
    double row = 0.0;
    for (int ey = kMaxExp; ey >= 0; --ey) row = row * p.y + c_[ex][ey];
    result = result * p.x + row;
  }
  return result;
}

double Poly2::eval_deriv(MultiIndex alpha, Vec2 p) const {
  return derivative(alpha).eval(p);
}

Poly2 Poly2::derivative(MultiIndex alpha) const {
  Poly2 out = *this;
  for (int k = 0; k < alpha.dx; ++k) {
    Poly2 d;
    for (int ex = 1; ex <= kMaxExp; ++ex)
      for (int ey = 0; ey <= kMaxExp; ++ey) d.c_[ex - 1][ey] = ex * out.c_[ex][ey];
    out = d;
  }
  for (int k = 0; k < alpha.dy; ++k) {
    Poly2 d;
    for (int ex = 0; ex <= kMaxExp; ++ex)
      for (int ey = 1; ey <= kMaxExp; ++ey) d.c_[ex][ey - 1] = ey * out.c_[ex][ey];
    out = d;
  }
  return out;
}

Poly2& Poly2::operator+=(const Poly2& o) {
  for (int ex = 0; ex <= kMaxExp; ++ex)
    for (int ey = 0; ey <= kMaxExp; ++ey) c_[ex][ey] += o.c_[ex][ey];
  return *this;
}

Poly2& Poly2::operator*=(double s) {
  for (auto& row : c_)
    for (auto& v : row) v *= s;
  return *this;
}

int Poly2::total_degree() const {
  int deg = -1;
  for (int ex = 0; ex <= kMaxExp; ++ex)
    for (int ey = 0; ey <= kMaxExp; ++ey)
      if (c_[ex][ey] != 0.0 && ex + ey > deg) deg = ex + ey;
  return deg;
}

}  // namespace felab
