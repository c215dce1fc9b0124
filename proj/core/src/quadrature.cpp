#include "felab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace felab {

double QuadRule::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  points.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    points[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights) {
  gauss_legendre(n, points, weights);
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (points[i] + 1.0);
    weights[i] *= 0.5;
  }
}

namespace {

// Collapsed Gauss product on the triangle via (x, y) = (s(1-t), t): the
// Jacobian factor (1-t) keeps all weights positive and all points interior.
// A monomial of total degree d has degree <= d in s and <= d+1 in t.
QuadRule collapsed_simplex(int degree) {
  const int ns = (degree + 2) / 2;      // 2*ns - 1 >= degree
  const int nt = (degree + 3) / 2;      // 2*nt - 1 >= degree + 1
  std::vector<double> sp, sw, tp, tw;
  gauss_legendre_01(ns, sp, sw);
  gauss_legendre_01(nt, tp, tw);
  QuadRule rule;
  rule.exact_degree = degree;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) {
      rule.points.push_back({sp[i] * (1.0 - tp[j]), tp[j]});
      rule.weights.push_back(sw[i] * tw[j] * (1.0 - tp[j]));
    }
  return rule;
}

// Average a triangle rule over the six barycentric permutations; exactness
// and positivity are preserved, the result is fully symmetric.
QuadRule symmetrize_simplex(const QuadRule& rule) {
  QuadRule out;
  out.exact_degree = rule.exact_degree;
  const std::size_t n = rule.points.size();
  out.points.reserve(6 * n);
  out.weights.reserve(6 * n);
  for (std::size_t q = 0; q < n; ++q) {
    const double l1 = rule.points[q].x;
    const double l2 = rule.points[q].y;
    const double l0 = 1.0 - l1 - l2;
    const double bary[6][2] = {{l1, l2}, {l2, l1}, {l0, l2}, {l2, l0}, {l1, l0}, {l0, l1}};
    for (const auto& b : bary) {
      out.points.push_back({b[0], b[1]});
      out.weights.push_back(rule.weights[q] / 6.0);
    }
  }
  return out;
}

}  // namespace

QuadRule simplex_rule(int degree) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("simplex_rule: degree must be in [1, 10]");
  QuadRule rule;
  if (degree == 1) {
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    rule.exact_degree = 1;
    return rule;
  }
  if (degree == 2) {
    rule.points = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    rule.exact_degree = 2;
    return rule;
  }
  return symmetrize_simplex(collapsed_simplex(degree));
}

QuadRule box_rule(int degree) {
  if (degree < 1 || degree > 11)
    throw std::invalid_argument("box_rule: degree must be in [1, 11]");
  const int n = (degree + 2) / 2;  // 2n - 1 >= degree
  std::vector<double> p, w;
  gauss_legendre(n, p, w);
  QuadRule rule;
  rule.exact_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rule.points.push_back({p[i], p[j]});
      rule.weights.push_back(w[i] * w[j]);
    }
  return rule;
}

}  // namespace felab
