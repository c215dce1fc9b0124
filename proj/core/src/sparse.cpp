#include "felab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace felab {

SparseSymmetricMatrix SparseSymmetricMatrix::from_adjacency(
    int n, const std::vector<std::vector<int>>& rows) {
  SparseSymmetricMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(n + 1, 0);
  std::vector<std::vector<int>> sorted(rows);
  for (int r = 0; r < n; ++r) {
    sorted[r].push_back(r);
    std::sort(sorted[r].begin(), sorted[r].end());
    sorted[r].erase(std::unique(sorted[r].begin(), sorted[r].end()), sorted[r].end());
    m.row_offsets_[r + 1] = m.row_offsets_[r] + static_cast<int>(sorted[r].size());
  }
  m.cols_.reserve(m.row_offsets_[n]);
  for (int r = 0; r < n; ++r) m.cols_.insert(m.cols_.end(), sorted[r].begin(), sorted[r].end());
  m.vals_.assign(m.cols_.size(), 0.0);
  return m;
}

double& SparseSymmetricMatrix::entry(int row, int col) {
  const auto begin = cols_.begin() + row_offsets_[row];
  const auto end = cols_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col)
    throw std::runtime_error("SparseSymmetricMatrix: entry outside sparsity pattern");
  return vals_[it - cols_.begin()];
}

double SparseSymmetricMatrix::get(int row, int col) const {
  const auto begin = cols_.begin() + row_offsets_[row];
  const auto end = cols_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return vals_[it - cols_.begin()];
}

void SparseSymmetricMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    double s = 0.0;
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) s += vals_[k] * x[cols_[k]];
    y[r] = s;
  }
}

double SparseSymmetricMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < n_; ++r)
    for (int k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
      worst = std::max(worst, std::abs(vals_[k] - get(cols_[k], r)));
  return worst;
}

double SparseSymmetricMatrix::sum() const {
  double s = 0.0;
  for (double v : vals_) s += v;
  return s;
}

void SparseSymmetricMatrix::eliminate(int dof, double diag) {
  for (int k = row_offsets_[dof]; k < row_offsets_[dof + 1]; ++k) {
    const int c = cols_[k];
    vals_[k] = c == dof ? diag : 0.0;
    if (c != dof) entry(c, dof) = 0.0;
  }
}

namespace {

double dot_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SolveReport solve_spd(const SparseSymmetricMatrix& a, const std::vector<double>& b, double rel_tol,
                      bool estimate_spectrum) {
  const int n = a.dimension();
  if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_spd: size mismatch");
  SolveReport report;
  report.x.assign(n, 0.0);
  const double bnorm = std::sqrt(dot_product(b, b));
  if (bnorm == 0.0) return report;

  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.get(i, i);
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  std::vector<double> r = b, z(n), p(n), q(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot_product(r, z);
  const long max_iter = 10L * n + 100;
  const long stall_window = 500 + n / 10;
  std::vector<double> cg_alpha, cg_beta;
  double best_true = std::numeric_limits<double>::infinity();
  double best_recurrence = std::numeric_limits<double>::infinity();
  long last_improvement = 0;
  int stagnant_restarts = 0;

  for (long it = 1; it <= max_iter; ++it) {
    a.multiply(p, q);
    const double pq = dot_product(p, q);
    if (pq <= 0.0) throw std::runtime_error("solve_spd: matrix is not positive definite");
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) report.x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * q[i];
    cg_alpha.push_back(alpha);
    report.iterations = static_cast<int>(it);

    const double rec_norm = std::sqrt(dot_product(r, r));
    if (rec_norm < 0.999 * best_recurrence) {
      best_recurrence = rec_norm;
      last_improvement = it;
    }
    if (rec_norm <= rel_tol * bnorm) {
      // Recurrence residual met the target; confirm with the true residual.
      a.multiply(report.x, q);
      for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
      const double true_norm = std::sqrt(dot_product(r, r));
      if (true_norm <= rel_tol * bnorm) {
        report.relative_residual = true_norm / bnorm;
        break;
      }
      // Rounding floor: restarting from the true residual stops helping
      // once the target sits below the attainable accuracy.
      if (true_norm > 0.9 * best_true) {
        if (++stagnant_restarts >= 3)
          throw std::runtime_error(
              "solve_spd: requested tolerance below the attainable residual floor");
      } else {
        stagnant_restarts = 0;
      }
      best_true = std::min(best_true, true_norm);
    } else if (it - last_improvement > stall_window) {
      // The recurrence itself has plateaued above the target.
      throw std::runtime_error(
          "solve_spd: requested tolerance below the attainable residual floor");
    }
    if (it == max_iter)
      throw std::runtime_error("solve_spd: no convergence (assembly or conditioning defect)");

    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot_product(r, z);
    const double beta = rz_next / rz;
    cg_beta.push_back(beta);
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_next;
  }

  if (estimate_spectrum && !cg_alpha.empty()) {
    // Lanczos tridiagonal reconstructed from the CG scalars.
    const std::size_t m = cg_alpha.size();
    std::vector<double> diag(m), off(m > 1 ? m - 1 : 0);
    for (std::size_t k = 0; k < m; ++k) {
      diag[k] = 1.0 / cg_alpha[k];
      if (k > 0) diag[k] += cg_beta[k - 1] / cg_alpha[k - 1];
      if (k + 1 < m) off[k] = std::sqrt(std::max(cg_beta[k], 0.0)) / cg_alpha[k];
    }
    tridiagonal_extremes(diag, off, report.ritz_min, report.ritz_max);
  }
  return report;
}

SolveReport solve_spd_adaptive(const SparseSymmetricMatrix& a, const std::vector<double>& b,
                               double rel_tol, double loosest_rel_tol, bool estimate_spectrum) {
  double tol = rel_tol;
  while (true) {
    try {
      return solve_spd(a, b, tol, estimate_spectrum);
    } catch (const std::runtime_error&) {
      if (tol >= loosest_rel_tol) throw;
      tol = std::min(tol * 10.0, loosest_rel_tol);
    }
  }
}

void tridiagonal_extremes(const std::vector<double>& diag, const std::vector<double>& offdiag,
                          double& smallest, double& largest) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) {
    smallest = largest = 0.0;
    return;
  }
  // Gershgorin bounds, then bisection with Sturm counts.
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(offdiag[i - 1]);
    if (i < n - 1) radius += std::abs(offdiag[i]);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  const auto count_below = [&](double x) {
    int count = 0;
    double d = 1.0;
    for (int i = 0; i < n; ++i) {
      const double off2 = i > 0 ? offdiag[i - 1] * offdiag[i - 1] : 0.0;
      d = diag[i] - x - (d != 0.0 ? off2 / d : off2 / 1e-300);
      if (d < 0.0) ++count;
    }
    return count;
  };
  const auto kth_eigenvalue = [&](int k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(mid) >= k + 1)
        b = mid;
      else
        a = mid;
    }
    return 0.5 * (a + b);
  };
  smallest = kth_eigenvalue(0);
  largest = kth_eigenvalue(n - 1);
}

EigenPair smallest_eigpair(const SparseSymmetricMatrix& a, const SparseSymmetricMatrix& m,
                           double rel_tol, double inner_rel_tol) {
  const int n = a.dimension();
  if (m.dimension() != n) throw std::invalid_argument("smallest_eigpair: size mismatch");
  EigenPair pair;

  // Start from the all-ones vector restricted to rows with mass; directions
  // killed by M (constrained dofs) never enter the iteration.
  std::vector<double> x(n, 1.0), mx(n), ax(n);
  m.multiply(x, mx);
  for (int i = 0; i < n; ++i)
    if (mx[i] == 0.0 && m.get(i, i) == 0.0) x[i] = 0.0;
  m.multiply(x, mx);
  double mnorm = std::sqrt(dot_product(x, mx));
  if (mnorm <= 0.0) throw std::runtime_error("smallest_eigpair: mass matrix annihilates start vector");
  for (int i = 0; i < n; ++i) x[i] /= mnorm;

  double lambda_prev = 0.0;
  const double inner_tol = std::min(inner_rel_tol, rel_tol);
  for (int outer = 1; outer <= 500; ++outer) {
    pair.outer_iterations = outer;
    m.multiply(x, mx);
    SolveReport solve = solve_spd_adaptive(a, mx, inner_tol, inner_tol * 1e3);
    x = std::move(solve.x);
    m.multiply(x, mx);
    mnorm = std::sqrt(dot_product(x, mx));
    for (int i = 0; i < n; ++i) x[i] /= mnorm;

    a.multiply(x, ax);
    m.multiply(x, mx);
    const double lambda = dot_product(x, ax) / dot_product(x, mx);
    if (outer > 1 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
      pair.lambda = lambda;
      break;
    }
    lambda_prev = lambda;
    if (outer == 500) throw std::runtime_error("smallest_eigpair: no convergence in 500 iterations");
  }

  // Exact M-normalization and a deterministic sign.
  m.multiply(x, mx);
  const double s = std::sqrt(dot_product(x, mx));
  for (auto& v : x) v /= s;
  int arg = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(x[i]) > std::abs(x[arg])) arg = i;
  if (x[arg] < 0.0)
    for (auto& v : x) v = -v;
  pair.coeffs = std::move(x);
  return pair;
}

}  // namespace felab
