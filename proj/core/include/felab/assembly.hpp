#pragma once

#include "felab/field.hpp"
#include "felab/space.hpp"
#include "felab/sparse.hpp"

namespace felab {

/// Broken energy form of order m:
///   m = 1: sum_K int_K grad(u) . grad(v)
///   m = 2: sum_K int_K (u_xx v_xx + 2 u_xy v_xy + u_yy v_yy)
/// The mixed second-derivative term carries the multinomial weight 2 so the
/// form is the weak operator of (-Delta)^m. Constrained DOFs are eliminated
/// with unit diagonal. m = 2 is accepted for MORLEY only.
SparseSymmetricMatrix assemble_bilinear(const FESpace& space, int m);

/// L2 mass form; constrained rows/columns are zeroed (diagonal 0) so that
/// generalized eigen iterations stay in the free subspace.
SparseSymmetricMatrix assemble_mass(const FESpace& space);

/// Load vector (f, phi_i); constrained entries zeroed.
std::vector<double> assemble_load(const FESpace& space, const ScalarField& f);

/// Quadrature degree used to assemble polynomial forms for this family
/// (at least twice the local polynomial degree).
int assembly_quad_degree(const FESpace& space);

}  // namespace felab
