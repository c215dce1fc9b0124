#pragma once

#include <vector>

namespace felab {

/// Symmetric sparse matrix in CSR form. Both triangles are stored; assembly
/// guarantees bitwise symmetry.
class SparseSymmetricMatrix {
 public:
  SparseSymmetricMatrix() = default;

  /// Build the sparsity pattern from per-row column lists (each list is
  /// sorted and deduplicated internally; the diagonal is always present).
  static SparseSymmetricMatrix from_adjacency(int n, const std::vector<std::vector<int>>& rows);

  int dimension() const { return n_; }
  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& columns() const { return cols_; }
  const std::vector<double>& values() const { return vals_; }

  double& entry(int row, int col);
  double get(int row, int col) const;
  void add(int row, int col, double v) { entry(row, col) += v; }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  double max_asymmetry() const;
  double sum() const;

  /// Zero row and column of `dof`, then put `diag` on the diagonal.
  void eliminate(int dof, double diag);

 private:
  int n_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> cols_;
  std::vector<double> vals_;
};

struct SolveReport {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
  /// Extreme Ritz values of the Jacobi-preconditioned operator, harvested
  /// from the CG recurrence (0 when not requested or not converged enough).
  double ritz_min = 0.0;
  double ritz_max = 0.0;
};

/// Jacobi-preconditioned conjugate gradients from x0 = 0, deterministic
/// iteration order, converged when the true residual satisfies
/// ||Ax - b|| <= rel_tol * ||b||. Throws after 10 * dimension iterations or
/// when the residual plateaus above the target (double-precision floor).
SolveReport solve_spd(const SparseSymmetricMatrix& a, const std::vector<double>& b,
                      double rel_tol = 1e-12, bool estimate_spectrum = false);

/// solve_spd with a deterministic fallback ladder: retries at 10x looser
/// tolerances (up to loosest_rel_tol) when the target sits below the
/// attainable residual floor of the operator.
SolveReport solve_spd_adaptive(const SparseSymmetricMatrix& a, const std::vector<double>& b,
                               double rel_tol, double loosest_rel_tol,
                               bool estimate_spectrum = false);

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> coeffs;  // ||x||_M = 1, largest-magnitude entry positive
  int outer_iterations = 0;
};

/// Smallest generalized eigenpair of A x = lambda M x by inverse power
/// iteration with CG inner solves; Rayleigh-quotient stopping test
/// |lambda_{k+1} - lambda_k| <= rel_tol * lambda_k. `inner_rel_tol` bounds
/// the inner solve_spd tolerance (fourth-order stiffness matrices hit the
/// double-precision residual floor above 1e-12).
EigenPair smallest_eigpair(const SparseSymmetricMatrix& a, const SparseSymmetricMatrix& m,
                           double rel_tol = 1e-10, double inner_rel_tol = 1e-12);

/// Extreme eigenvalues of a symmetric tridiagonal matrix (Sturm bisection).
void tridiagonal_extremes(const std::vector<double>& diag, const std::vector<double>& offdiag,
                          double& smallest, double& largest);

}  // namespace felab
