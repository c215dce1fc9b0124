#pragma once

#include <string>
#include <vector>

#include "felab/mesh.hpp"
#include "felab/polynomial.hpp"

namespace felab {

enum class Family { P1, P2, P3, Q1, Q2, CR, ECR, Q1ROT, EQ1ROT, MORLEY };

Family family_from_string(const std::string& name);
std::string family_name(Family f);

enum class DofKind {
  VertexValue,
  EdgePointValue,       // value at parameter t along the (oriented) edge
  EdgeMean,
  EdgeNormalDerivMean,  // mean of the normal derivative along the edge
  CellMean,
  CellPointValue,       // value at the mapped cell center (Q2 bubble)
};

/// One local degree of freedom: what it measures and which mesh entity
/// (local vertex/edge index) it attaches to.
struct DofDescriptor {
  DofKind kind;
  int entity = 0;      // local vertex or edge index; unused for cell dofs
  double param = 0.0;  // edge parameter for EdgePointValue
};

/// Nodal reference element: basis functions are polynomials on the
/// reference cell, dual to the DOF functionals. `order` is the claimed
/// approximation order r (the local space contains P_{r-1}), and `gamma`
/// lists the multi-indices of length r annihilated by every local function.
class ReferenceElement {
 public:
  Family family;
  CellKind cell_kind;
  int order = 0;             // r
  int continuity_order = 0;  // 1 = C0-conforming, 0 = face-mean coupling
  std::vector<DofDescriptor> dofs;
  std::vector<MultiIndex> gamma;
  std::vector<Poly2> span;   // raw spanning set of the local space
  std::vector<Poly2> basis;  // nodal basis (dual to dofs)

  int num_basis() const { return static_cast<int>(basis.size()); }
  int num_vertex_dofs() const;
  int num_edge_dofs() const;  // per edge
  int num_cell_dofs() const;

  /// Exact analytic derivative D^alpha of a basis function at a reference
  /// point; |alpha| <= 3.
  double eval_deriv(int basis_index, MultiIndex alpha, Vec2 ref_point) const;

  /// Apply the element's own DOF functionals (on the reference cell) to an
  /// arbitrary polynomial; used to verify unisolvence.
  double apply_reference_dof(int dof_index, const Poly2& p) const;
};

const ReferenceElement& reference_element(Family family);

/// All multi-indices with |alpha| = order.
std::vector<MultiIndex> multi_indices_of_order(int order);

/// Solve the dense system A x = b in place (n <= 16, partial pivoting).
void solve_dense(int n, std::vector<double>& a, std::vector<double>& b);

}  // namespace felab
