#pragma once

#include <vector>

#include "felab/geometry.hpp"

namespace felab {

/// Quadrature rule on a reference cell. Points live on the reference
/// triangle {x,y >= 0, x+y <= 1} or the reference square [-1,1]^2; weights
/// sum to the reference measure (1/2 resp. 4). All polynomials of total
/// degree <= exact_degree integrate exactly.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;

  double weight_sum() const;
};

/// Rule on the reference triangle, exact at least to `degree` (1..10).
/// Degree 1 is the centroid rule, degree 2 the edge-midpoint rule; higher
/// degrees are collapsed Gauss products averaged over the six triangle
/// symmetries, so every shipped rule is symmetric with positive weights.
QuadRule simplex_rule(int degree);

/// Tensor-product Gauss rule on [-1,1]^2, exact at least to `degree` (1..11).
QuadRule box_rule(int degree);

/// Gauss-Legendre points/weights on [-1,1], machine precision, n >= 1.
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

/// Gauss-Legendre rule mapped to [0,1] (weights sum to 1).
void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights);

}  // namespace felab
