#pragma once

#include <memory>
#include <vector>

#include "felab/elements.hpp"
#include "felab/field.hpp"
#include "felab/mesh.hpp"

namespace felab {

/// Global finite element space on a mesh.
///
/// Degrees of freedom are defined by *global* functionals (vertex values,
/// point values / means / normal-derivative means along the canonically
/// oriented face, cell means), so shared DOFs agree between neighboring
/// cells without any orientation bookkeeping. Triangle families and the
/// nonconforming quadrilateral families carry their local spaces directly in
/// physical coordinates; Q1/Q2 are mapped (isoparametric) elements.
///
/// A space is immutable after construction and must outlive the FEFunctions
/// built on it.
class FESpace {
 public:
  /// essential_order: 0 = unconstrained, 1 = zero trace on the boundary,
  /// 2 = clamped (MORLEY only: boundary values and normal derivatives).
  FESpace(std::shared_ptr<const Mesh> mesh, Family family, int essential_order);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ReferenceElement& element() const { return *element_; }
  Family family() const { return element_->family; }
  int essential_order() const { return essential_order_; }

  int num_dofs() const { return num_dofs_; }
  int num_free_dofs() const;
  bool constrained(int dof) const { return constrained_[dof] != 0; }
  const std::vector<std::uint8_t>& constraint_mask() const { return constrained_; }

  int dofs_per_cell() const { return element_->num_basis(); }
  const std::vector<int>& cell_dofs(int cell) const { return cell_dofs_[cell]; }

  /// D^alpha (physical derivative) of local shape function i on `cell` at a
  /// reference point. Any order for the physical-polynomial families,
  /// order <= 3 for the mapped Q1/Q2.
  double shape_deriv(int cell, int i, MultiIndex alpha, Vec2 ref) const;

  /// True when local functions are stored as physical polynomials, enabling
  /// combine_local().
  bool has_local_polynomials() const { return physical_backend_; }
  /// Local restriction of a coefficient vector as a polynomial in the
  /// scaled cell frame X = (x - center) / scale.
  Poly2 combine_local(int cell, const std::vector<double>& coeffs) const;
  Vec2 local_center(int cell) const { return centers_[cell]; }
  double local_scale(int cell) const { return scales_[cell]; }

  /// Canonical unit normal of a face (right-handed rotation of the a->b
  /// direction); both adjacent cells see the same normal.
  Vec2 face_normal(int face) const;

  /// Evaluate the global DOF functional `local slot` of `cell` on u.
  double dof_value(int cell, int slot, const ScalarField& u) const;

 private:
  void build_numbering();
  void build_constraints();
  void build_local_bases();

  std::shared_ptr<const Mesh> mesh_;
  const ReferenceElement* element_;
  int essential_order_;
  int num_dofs_ = 0;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<std::uint8_t> constrained_;

  bool physical_backend_ = false;
  std::vector<std::vector<Poly2>> shape_polys_;  // per cell, physical backend
  std::vector<Vec2> centers_;
  std::vector<double> scales_;
};

/// Discrete function: one coefficient per global DOF of `space`.
struct FEFunction {
  const FESpace* space = nullptr;
  std::vector<double> coeffs;

  static FEFunction zero(const FESpace& s) { return {&s, std::vector<double>(s.num_dofs(), 0.0)}; }

  /// D^alpha of the function restricted to `cell`, |alpha| <= 3.
  double eval(int cell, Vec2 ref, MultiIndex alpha) const;
};

/// Cellwise DOF interpolant; constrained coefficients are reset to zero.
FEFunction interpolate(const FESpace& space, const ScalarField& u);

/// Max of |D^gamma v_h| over `trials` random coefficient vectors (entries in
/// [-1,1], deterministic), all cells, and 7 sample points per cell.
/// Requires |gamma| == element order r.
double check_vanishing(const FESpace& space, MultiIndex gamma, int trials);

}  // namespace felab
