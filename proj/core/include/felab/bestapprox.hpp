#pragma once

#include "felab/norms.hpp"
#include "felab/space.hpp"

namespace felab {

struct BestApproxResult {
  FEFunction minimizer;
  double distance = 0.0;       // broken-norm distance, evaluated by quadrature
  double distance_gram = 0.0;  // sqrt(max(0, ||u||^2 - c.b)) from the Gram identity
  NormSpec spec;
  double gram_condition = 0.0;  // diagonal-scaled Gram condition estimate
  int cg_iterations = 0;
};

/// Exact (p = 2) best approximation of u in the broken W^{j,2}(G) norm:
/// solves the Gram system over the DOFs supported on cells inside G.
/// `semi_norm_only` restricts the inner product to the top order j (used
/// for energy-norm checks); the default is the full norm, whose order-0
/// term keeps the Gram definite.
BestApproxResult best_approx(const FESpace& space, const ScalarField& u, int j, Region g = {},
                             bool semi_norm_only = false);

struct SurrogateResult {
  double at_minimizer = 0.0;    // (j,p) norm at the p=2 minimizer
  double at_interpolant = 0.0;  // (j,p) norm at the DOF interpolant
  double upper = 0.0;           // min of the two; the infimum lies at or below it

  BestApproxResult p2;
};

/// Two-sided proxies for the p = 1 / p = inf best-approximation error,
/// which is not minimized exactly.
SurrogateResult best_approx_surrogate(const FESpace& space, const ScalarField& u, int j, NormP p,
                                      Region g = {});

}  // namespace felab
