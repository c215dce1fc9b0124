#include "felab/bestapprox.hpp"

#include <cmath>
#include <stdexcept>

#include "felab/quadrature.hpp"
#include "felab/sparse.hpp"

namespace felab {

BestApproxResult best_approx(const FESpace& space, const ScalarField& u, int j, Region g,
                             bool semi_norm_only) {
  if (j < 0 || j > 3) throw std::invalid_argument("best_approx: j must be in [0, 3]");

  // Active set: free DOFs of cells lying inside G.
  std::vector<int> cells;
  for (int c = 0; c < space.mesh().num_cells(); ++c)
    if (g.contains_cell(space.mesh(), c)) cells.push_back(c);
  if (cells.empty()) throw std::invalid_argument("best_approx: region contains no cell");

  std::vector<int> compact(space.num_dofs(), -1);
  std::vector<int> active;
  for (int c : cells)
    for (int dof : space.cell_dofs(c))
      if (!space.constrained(dof) && compact[dof] < 0) {
        compact[dof] = static_cast<int>(active.size());
        active.push_back(dof);
      }
  const int n = static_cast<int>(active.size());

  std::vector<std::vector<int>> adjacency(n);
  for (int c : cells) {
    const auto& dofs = space.cell_dofs(c);
    for (int a : dofs)
      for (int b : dofs)
        if (compact[a] >= 0 && compact[b] >= 0) adjacency[compact[a]].push_back(compact[b]);
  }
  SparseSymmetricMatrix gram = SparseSymmetricMatrix::from_adjacency(n, adjacency);
  std::vector<double> rhs(n, 0.0);

  const QuadRule rule =
      space.mesh().kind() == CellKind::Triangle ? simplex_rule(10) : box_rule(11);
  const int l_lo = semi_norm_only ? j : 0;
  const int nb = space.dofs_per_cell();
  std::vector<double> deriv(nb);
  std::vector<double> local(nb * nb);
  std::vector<double> local_rhs(nb);
  double u_norm_sq = 0.0;

  for (int c : cells) {
    std::fill(local.begin(), local.end(), 0.0);
    std::fill(local_rhs.begin(), local_rhs.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * space.mesh().jacobian(c, rule.points[q]).det();
      const Vec2 x = space.mesh().map_point(c, rule.points[q]);
      for (int l = l_lo; l <= j; ++l) {
        for (const MultiIndex& a : multi_indices_of_order(l)) {
          for (int i = 0; i < nb; ++i) deriv[i] = space.shape_deriv(c, i, a, rule.points[q]);
          const double uv = u.derivative(a, x);
          u_norm_sq += w * uv * uv;
          for (int i = 0; i < nb; ++i) {
            local_rhs[i] += w * uv * deriv[i];
            for (int k = 0; k <= i; ++k) local[i * nb + k] += w * deriv[i] * deriv[k];
          }
        }
      }
    }
    const auto& dofs = space.cell_dofs(c);
    for (int i = 0; i < nb; ++i) {
      const int gi = compact[dofs[i]];
      if (gi < 0) continue;
      rhs[gi] += local_rhs[i];
      for (int k = 0; k <= i; ++k) {
        const int gk = compact[dofs[k]];
        if (gk < 0) continue;
        gram.add(gi, gk, local[i * nb + k]);
        if (gi != gk) gram.add(gk, gi, local[i * nb + k]);
      }
    }
  }

  // 1e-13 as the primary target; fine meshes can pin the attainable CG
  // residual slightly above it, in which case the ladder backs off.
  SolveReport solve = solve_spd_adaptive(gram, rhs, 1e-13, 1e-11, /*estimate_spectrum=*/true);

  BestApproxResult result;
  result.spec = semi_norm_only ? NormSpec::semi(j, NormP::Two, g) : NormSpec::norm(j, NormP::Two, g);
  result.minimizer = FEFunction::zero(space);
  for (int i = 0; i < n; ++i) result.minimizer.coeffs[active[i]] = solve.x[i];
  result.cg_iterations = solve.iterations;
  result.gram_condition = solve.ritz_min > 0.0 ? solve.ritz_max / solve.ritz_min : 0.0;

  double cb = 0.0;
  for (int i = 0; i < n; ++i) cb += solve.x[i] * rhs[i];
  result.distance_gram = std::sqrt(std::max(0.0, u_norm_sq - cb));
  // Direct evaluation is immune to the cancellation in the Gram identity
  // when u is (nearly) inside the space.
  result.distance = broken_error(space, u, &result.minimizer, result.spec);
  return result;
}

SurrogateResult best_approx_surrogate(const FESpace& space, const ScalarField& u, int j, NormP p,
                                      Region g) {
  if (p == NormP::Two)
    throw std::invalid_argument("best_approx_surrogate: use best_approx for p = 2");
  SurrogateResult out;
  out.p2 = best_approx(space, u, j, g);
  const FEFunction pi_u = interpolate(space, u);
  const NormSpec spec = NormSpec::norm(j, p, g);
  out.at_minimizer = broken_error(space, u, &out.p2.minimizer, spec);
  out.at_interpolant = broken_error(space, u, &pi_u, spec);
  out.upper = std::min(out.at_minimizer, out.at_interpolant);
  return out;
}

}  // namespace felab
