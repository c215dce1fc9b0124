#include "felab/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "felab/quadrature.hpp"

namespace felab {

NormP norm_p_from_string(const std::string& s) {
  if (s == "1") return NormP::One;
  if (s == "2") return NormP::Two;
  if (s == "inf" || s == "infinity") return NormP::Infinity;
  throw std::invalid_argument("norm exponent must be 1, 2, or inf");
}

std::string norm_p_name(NormP p) {
  switch (p) {
    case NormP::One: return "1";
    case NormP::Two: return "2";
    case NormP::Infinity: return "inf";
  }
  return "?";
}

bool Region::contains_cell(const Mesh& m, int cell) const {
  if (whole) return true;
  const double slack = 1e-12;
  for (int k = 0; k < m.vertices_per_cell(); ++k) {
    const Vec2 v = m.vertex(m.cell(cell)[k]);
    if (v.x < x0 - slack || v.x > x1 + slack || v.y < y0 - slack || v.y > y1 + slack) return false;
  }
  return true;
}

namespace {

/// Evaluates D^alpha (u - v_h) on one cell; caches the local polynomial of
/// v_h per derivative order when the space stores physical polynomials.
class CellError {
 public:
  CellError(const FESpace& space, const ScalarField& u, const FEFunction* v_h, int cell)
      : space_(space), u_(u), v_h_(v_h), cell_(cell) {
    if (v_h_ && space_.has_local_polynomials()) {
      local_ = space_.combine_local(cell, v_h_->coeffs);
      center_ = space_.local_center(cell);
      inv_scale_ = 1.0 / space_.local_scale(cell);
      poly_path_ = true;
    }
  }

  double deriv(MultiIndex alpha, Vec2 ref) const {
    const Vec2 x = space_.mesh().map_point(cell_, ref);
    double v = u_.derivative(alpha, x);
    if (!v_h_) return v;
    if (poly_path_) {
      const Vec2 big_x = inv_scale_ * (x - center_);
      return v - local_.eval_deriv(alpha, big_x) * std::pow(inv_scale_, alpha.order());
    }
    return v - v_h_->eval(cell_, ref, alpha);
  }

 private:
  const FESpace& space_;
  const ScalarField& u_;
  const FEFunction* v_h_;
  int cell_;
  Poly2 local_;
  Vec2 center_;
  double inv_scale_ = 1.0;
  bool poly_path_ = false;
};

const QuadRule& norm_rule(const Mesh& m) {
  static const QuadRule tri = simplex_rule(10);
  static const QuadRule quad = box_rule(11);
  return m.kind() == CellKind::Triangle ? tri : quad;
}

/// Sample lattice for sup-norm estimates: quadrature nodes plus vertices
/// and edge midpoints (reference coordinates).
const std::vector<Vec2>& sup_lattice(const Mesh& m) {
  static const std::vector<Vec2> tri = [] {
    std::vector<Vec2> pts = simplex_rule(10).points;
    const Vec2 extra[] = {{0, 0}, {1, 0}, {0, 1}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}};
    pts.insert(pts.end(), std::begin(extra), std::end(extra));
    return pts;
  }();
  static const std::vector<Vec2> quad = [] {
    std::vector<Vec2> pts = box_rule(11).points;
    const Vec2 extra[] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    pts.insert(pts.end(), std::begin(extra), std::end(extra));
    return pts;
  }();
  return m.kind() == CellKind::Triangle ? tri : quad;
}

double p_exponent(NormP p) {
  switch (p) {
    case NormP::One: return 1.0;
    case NormP::Two: return 2.0;
    case NormP::Infinity: return std::numeric_limits<double>::infinity();
  }
  return 2.0;
}

// sum_{|alpha|=l} int_K |D^alpha (u - v_h)|^p  (p < inf).
double cell_seminorm_power(const FESpace& space, const CellError& err, int cell, int l, double p) {
  const QuadRule& rule = norm_rule(space.mesh());
  const auto alphas = multi_indices_of_order(l);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * space.mesh().jacobian(cell, rule.points[q]).det();
    double point_sum = 0.0;
    for (const MultiIndex& a : alphas) {
      const double v = std::abs(err.deriv(a, rule.points[q]));
      point_sum += p == 2.0 ? v * v : (p == 1.0 ? v : std::pow(v, p));
    }
    acc += w * point_sum;
  }
  return acc;
}

// max over the lattice of max_{|alpha|=l} |D^alpha (u - v_h)|.
double cell_seminorm_sup(const FESpace& space, const CellError& err, int cell, int l) {
  const auto& lattice = sup_lattice(space.mesh());
  const auto alphas = multi_indices_of_order(l);
  double worst = 0.0;
  for (const Vec2& ref : lattice)
    for (const MultiIndex& a : alphas) worst = std::max(worst, std::abs(err.deriv(a, ref)));
  return worst;
}

}  // namespace

double broken_error(const FESpace& space, const ScalarField& u, const FEFunction* v_h,
                    const NormSpec& spec) {
  if (spec.j < 0 || spec.j > 3)
    throw std::invalid_argument("broken_error: derivative order j must be in [0, 3]");
  const int l_lo = spec.full ? 0 : spec.j;
  const double p = p_exponent(spec.p);
  if (spec.p == NormP::Infinity) {
    double worst = 0.0;
    for (int c = 0; c < space.mesh().num_cells(); ++c) {
      if (!spec.region.contains_cell(space.mesh(), c)) continue;
      const CellError err(space, u, v_h, c);
      for (int l = l_lo; l <= spec.j; ++l)
        worst = std::max(worst, cell_seminorm_sup(space, err, c, l));
    }
    return worst;
  }
  double acc = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    if (!spec.region.contains_cell(space.mesh(), c)) continue;
    const CellError err(space, u, v_h, c);
    for (int l = l_lo; l <= spec.j; ++l) acc += cell_seminorm_power(space, err, c, l, p);
  }
  return std::pow(acc, 1.0 / p);
}

double cell_norm(const FESpace& space, const ScalarField& u, const FEFunction* v_h, int cell,
                 int j, NormP q) {
  const CellError err(space, u, v_h, cell);
  if (q == NormP::Infinity) {
    double worst = 0.0;
    for (int l = 0; l <= j; ++l) worst = std::max(worst, cell_seminorm_sup(space, err, cell, l));
    return worst;
  }
  const double p = p_exponent(q);
  double acc = 0.0;
  for (int l = 0; l <= j; ++l) acc += cell_seminorm_power(space, err, cell, l, p);
  return std::pow(acc, 1.0 / p);
}

double weighted_error(const FESpace& space, const ScalarField& u, const FEFunction& v_h, int j,
                      int r, NormP p, NormP q, Region region) {
  if (p == NormP::Infinity)
    throw std::invalid_argument("weighted_error: p must be finite (1 <= p < inf)");
  const double pv = p_exponent(p);
  const double inv_q = q == NormP::Infinity ? 0.0 : 1.0 / p_exponent(q);
  const double exponent = pv * ((j - r) + 2.0 * (1.0 / pv - inv_q));
  double acc = 0.0;
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    if (!region.contains_cell(space.mesh(), c)) continue;
    const double h_k = space.mesh().cell_diameter(c);
    const double nk = cell_norm(space, u, &v_h, c, j, q);
    acc += std::pow(h_k, exponent) * std::pow(nk, pv);
  }
  return std::pow(acc, 1.0 / pv);
}

double sharpness_ratio(double error, double h, int r, int j) {
  if (h <= 0.0) throw std::invalid_argument("sharpness_ratio: h must be positive");
  return error / std::pow(h, r - j);
}

}  // namespace felab
