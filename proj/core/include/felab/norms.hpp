#pragma once

#include "felab/field.hpp"
#include "felab/space.hpp"

namespace felab {

enum class NormP { One, Two, Infinity };

NormP norm_p_from_string(const std::string& s);
std::string norm_p_name(NormP p);

/// Axis-aligned evaluation region; cells must lie inside it (1e-12 slack)
/// to contribute. Defaults to the whole domain.
struct Region {
  bool whole = true;
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  static Region box(double x0, double y0, double x1, double y1) {
    return {false, x0, y0, x1, y1};
  }
  bool contains_cell(const Mesh& m, int cell) const;
};

/// Which derived study column a norm spec describes.
enum class WeightedKind { None, UniformRatio, RegularSum, MixedSum };

/// Broken norm specification: derivative order j, Lebesgue exponent p,
/// semi-norm (top order only) or full norm (orders 0..j), region, and an
/// optional weighted variant (order r; secondary exponent q for the mixed
/// sum).
struct NormSpec {
  int j = 0;
  NormP p = NormP::Two;
  bool full = true;
  Region region;
  WeightedKind weighted = WeightedKind::None;
  int r = 0;
  NormP q = NormP::Two;

  static NormSpec semi(int j, NormP p, Region g = {}) { return {j, p, false, g}; }
  static NormSpec norm(int j, NormP p, Region g = {}) { return {j, p, true, g}; }
};

/// Broken norm of u - v_h over the cells inside spec.region. For p < inf
/// this is quadrature-exact up to the degree-10/11 rule; for p = inf it is
/// the max over a per-cell sample lattice (quadrature nodes + vertices +
/// edge midpoints) and therefore a lower estimate of the true sup.
/// Pass v_h = nullptr to measure u itself.
double broken_error(const FESpace& space, const ScalarField& u, const FEFunction* v_h,
                    const NormSpec& spec);

/// Full broken norm of order j, exponent q, restricted to one cell.
double cell_norm(const FESpace& space, const ScalarField& u, const FEFunction* v_h, int cell,
                 int j, NormP q);

/// Weighted per-element sum
///   ( sum_K h_K^{p((j-r) + n(1/p - 1/q))} ||u - v_h||_{j,q,K}^p )^(1/p),
/// n = 2. Requires p < inf; q in {1, 2, inf}. With q = p the exponent
/// reduces to p(j-r).
double weighted_error(const FESpace& space, const ScalarField& u, const FEFunction& v_h, int j,
                      int r, NormP p, NormP q, Region region = {});

/// E / h^(r-j).
double sharpness_ratio(double error, double h, int r, int j);

}  // namespace felab
