#include "felab/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "felab/quadrature.hpp"

namespace felab {

namespace {

int local_space_degree(Family f) {
  switch (f) {
    case Family::P1:
    case Family::CR:
      return 1;
    case Family::P2:
    case Family::ECR:
    case Family::Q1ROT:
    case Family::EQ1ROT:
    case Family::MORLEY:
      return 2;
    case Family::Q1:
      return 2;  // xy
    case Family::P3:
      return 3;
    case Family::Q2:
      return 4;  // x^2 y^2
  }
  return 4;
}

SparseSymmetricMatrix pattern_from_space(const FESpace& space) {
  std::vector<std::vector<int>> rows(space.num_dofs());
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const auto& dofs = space.cell_dofs(c);
    for (int a : dofs)
      for (int b : dofs) rows[a].push_back(b);
  }
  return SparseSymmetricMatrix::from_adjacency(space.num_dofs(), rows);
}

QuadRule cell_rule(const FESpace& space, int degree) {
  if (space.mesh().kind() == CellKind::Triangle) return simplex_rule(std::min(degree, 10));
  return box_rule(std::min(degree, 11));
}

// Derivative tuples (alpha, weight) entering the order-m energy form.
std::vector<std::pair<MultiIndex, double>> energy_terms(int m) {
  if (m == 1) return {{{1, 0}, 1.0}, {{0, 1}, 1.0}};
  return {{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, 1.0}};
}

}  // namespace

int assembly_quad_degree(const FESpace& space) {
  const int d = 2 * local_space_degree(space.family());
  // Bilinear geometry raises the integrand degree on quadrilaterals.
  return space.mesh().kind() == CellKind::Quadrilateral ? d + 2 : d;
}

SparseSymmetricMatrix assemble_bilinear(const FESpace& space, int m) {
  if (m != 1 && m != 2) throw std::invalid_argument("assemble_bilinear: m must be 1 or 2");
  if (m == 2 && space.family() != Family::MORLEY)
    throw std::invalid_argument("assemble_bilinear: order-2 form requires MORLEY");

  SparseSymmetricMatrix a = pattern_from_space(space);
  const QuadRule rule = cell_rule(space, assembly_quad_degree(space));
  const auto terms = energy_terms(m);
  const int nb = space.dofs_per_cell();
  std::vector<double> deriv(nb * terms.size());
  std::vector<double> local(nb * nb);

  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * space.mesh().jacobian(c, rule.points[q]).det();
      for (int i = 0; i < nb; ++i)
        for (std::size_t t = 0; t < terms.size(); ++t)
          deriv[i * terms.size() + t] = space.shape_deriv(c, i, terms[t].first, rule.points[q]);
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t t = 0; t < terms.size(); ++t)
            s += terms[t].second * deriv[i * terms.size() + t] * deriv[j * terms.size() + t];
          local[i * nb + j] += w * s;
        }
    }
    const auto& dofs = space.cell_dofs(c);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j <= i; ++j) {
        a.add(dofs[i], dofs[j], local[i * nb + j]);
        if (i != j) a.add(dofs[j], dofs[i], local[i * nb + j]);
      }
  }
  for (int g = 0; g < space.num_dofs(); ++g)
    if (space.constrained(g)) a.eliminate(g, 1.0);
  return a;
}

SparseSymmetricMatrix assemble_mass(const FESpace& space) {
  SparseSymmetricMatrix mm = pattern_from_space(space);
  const QuadRule rule = cell_rule(space, assembly_quad_degree(space));
  const int nb = space.dofs_per_cell();
  std::vector<double> value(nb);
  std::vector<double> local(nb * nb);

  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * space.mesh().jacobian(c, rule.points[q]).det();
      for (int i = 0; i < nb; ++i) value[i] = space.shape_deriv(c, i, {0, 0}, rule.points[q]);
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j <= i; ++j) local[i * nb + j] += w * value[i] * value[j];
    }
    const auto& dofs = space.cell_dofs(c);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j <= i; ++j) {
        mm.add(dofs[i], dofs[j], local[i * nb + j]);
        if (i != j) mm.add(dofs[j], dofs[i], local[i * nb + j]);
      }
  }
  for (int g = 0; g < space.num_dofs(); ++g)
    if (space.constrained(g)) mm.eliminate(g, 0.0);
  return mm;
}

std::vector<double> assemble_load(const FESpace& space, const ScalarField& f) {
  std::vector<double> b(space.num_dofs(), 0.0);
  // High-order rule: load integrands are generically non-polynomial and the
  // quadrature error must stay far below discretization-error floors.
  const QuadRule rule =
      space.mesh().kind() == CellKind::Triangle ? simplex_rule(10) : box_rule(11);
  const int nb = space.dofs_per_cell();
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * space.mesh().jacobian(c, rule.points[q]).det();
      const double fv = f.value(space.mesh().map_point(c, rule.points[q]));
      for (int i = 0; i < nb; ++i)
        b[dofs[i]] += w * fv * space.shape_deriv(c, i, {0, 0}, rule.points[q]);
    }
  }
  for (int g = 0; g < space.num_dofs(); ++g)
    if (space.constrained(g)) b[g] = 0.0;
  return b;
}

}  // namespace felab
