#include "felab/space.hpp"

#include <cmath>
#include <stdexcept>

#include "felab/quadrature.hpp"

namespace felab {

namespace {

// Where a global DOF lives and what it measures.
struct DofSite {
  DofKind kind;
  int vertex = -1;
  int face = -1;
  int cell = -1;
  double param = 0.0;
};

const Vec2 kTriSamples[7] = {{1.0 / 3, 1.0 / 3}, {0.2, 0.2}, {0.6, 0.2}, {0.2, 0.6},
                             {0.1, 0.1},         {0.7, 0.1}, {0.1, 0.7}};
const Vec2 kQuadSamples[7] = {{0, 0},      {0.6, 0.6},  {-0.6, 0.6}, {0.6, -0.6},
                              {-0.6, -0.6}, {0.3, -0.5}, {-0.5, 0.3}};

}  // namespace

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, Family family, int essential_order)
    : mesh_(std::move(mesh)), element_(&reference_element(family)), essential_order_(essential_order) {
  if (!mesh_) throw std::invalid_argument("FESpace: null mesh");
  if (element_->cell_kind != mesh_->kind())
    throw std::invalid_argument("FESpace: element family and mesh cell kind differ");
  if (essential_order_ < 0 || essential_order_ > 2)
    throw std::invalid_argument("FESpace: essential_order must be 0, 1, or 2");
  if (essential_order_ == 2 && family != Family::MORLEY)
    throw std::invalid_argument("FESpace: clamped constraints require MORLEY");
  build_numbering();
  build_constraints();
  build_local_bases();
}

void FESpace::build_numbering() {
  const int kv = element_->num_vertex_dofs();
  const int ke = element_->num_edge_dofs();
  const int kc = element_->num_cell_dofs();
  const int nv = mesh_->num_vertices();
  const int nf = mesh_->num_faces();
  const int nc = mesh_->num_cells();
  num_dofs_ = kv * nv + ke * nf + kc * nc;

  const int nverts = mesh_->vertices_per_cell();
  cell_dofs_.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    auto& dofs = cell_dofs_[c];
    dofs.reserve(element_->num_basis());
    if (kv == 1)
      for (int v = 0; v < nverts; ++v) dofs.push_back(mesh_->cell(c)[v]);
    for (int e = 0; e < nverts; ++e) {
      const int f = mesh_->cell_faces(c)[e];
      for (int q = 0; q < ke; ++q) dofs.push_back(kv * nv + f * ke + q);
    }
    for (int q = 0; q < kc; ++q) dofs.push_back(kv * nv + ke * nf + c * kc + q);
  }
}

namespace {

DofSite decode_dof(const ReferenceElement& el, const Mesh& mesh, int global) {
  const int kv = el.num_vertex_dofs();
  const int ke = el.num_edge_dofs();
  const int nv = mesh.num_vertices();
  const int nf = mesh.num_faces();
  DofSite site;
  if (kv == 1 && global < nv) {
    site.kind = DofKind::VertexValue;
    site.vertex = global;
    return site;
  }
  int rest = global - kv * nv;
  if (rest < ke * nf) {
    site.face = rest / ke;
    const int q = rest % ke;
    // The edge-dof kind is uniform within a family.
    for (const auto& d : el.dofs)
      if (d.kind == DofKind::EdgePointValue || d.kind == DofKind::EdgeMean ||
          d.kind == DofKind::EdgeNormalDerivMean) {
        site.kind = d.kind;
        break;
      }
    site.param = static_cast<double>(q + 1) / (ke + 1);
    return site;
  }
  rest -= ke * nf;
  const int kc = el.num_cell_dofs();
  site.cell = rest / kc;
  for (const auto& d : el.dofs)
    if (d.kind == DofKind::CellMean || d.kind == DofKind::CellPointValue) {
      site.kind = d.kind;
      break;
    }
  return site;
}

}  // namespace

void FESpace::build_constraints() {
  constrained_.assign(num_dofs_, 0);
  if (essential_order_ == 0) return;
  for (int g = 0; g < num_dofs_; ++g) {
    const DofSite site = decode_dof(*element_, *mesh_, g);
    switch (site.kind) {
      case DofKind::VertexValue:
        if (mesh_->vertex_on_boundary(site.vertex)) constrained_[g] = 1;
        break;
      case DofKind::EdgePointValue:
      case DofKind::EdgeMean:
        if (mesh_->face(site.face).boundary()) constrained_[g] = 1;
        break;
      case DofKind::EdgeNormalDerivMean:
        if (essential_order_ >= 2 && mesh_->face(site.face).boundary()) constrained_[g] = 1;
        break;
      case DofKind::CellMean:
      case DofKind::CellPointValue:
        break;
    }
  }
}

int FESpace::num_free_dofs() const {
  int n = 0;
  for (auto c : constrained_) n += c == 0 ? 1 : 0;
  return n;
}

Vec2 FESpace::face_normal(int face) const {
  const Face& f = mesh_->face(face);
  const Vec2 t = mesh_->vertex(f.b) - mesh_->vertex(f.a);
  const double len = norm(t);
  return {t.y / len, -t.x / len};
}

namespace {

// Functional `site` applied to a polynomial given in the scaled cell frame
// X = (x - center) / scale. Exact for every local space in the catalog.
double physical_functional(const Mesh& mesh, const FESpace& space, const DofSite& site, int cell,
                           const Poly2& p, Vec2 center, double scale) {
  const auto to_frame = [&](Vec2 x) { return (1.0 / scale) * (x - center); };
  switch (site.kind) {
    case DofKind::VertexValue:
      return p.eval(to_frame(mesh.vertex(site.vertex)));
    case DofKind::EdgePointValue: {
      const Face& f = mesh.face(site.face);
      const Vec2 x = mesh.vertex(f.a) + site.param * (mesh.vertex(f.b) - mesh.vertex(f.a));
      return p.eval(to_frame(x));
    }
    case DofKind::EdgeMean: {
      const Face& f = mesh.face(site.face);
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) {
        const Vec2 x = mesh.vertex(f.a) + t[q] * (mesh.vertex(f.b) - mesh.vertex(f.a));
        s += w[q] * p.eval(to_frame(x));
      }
      return s;
    }
    case DofKind::EdgeNormalDerivMean: {
      const Face& f = mesh.face(site.face);
      const Vec2 n = space.face_normal(site.face);
      const Poly2 px = p.derivative({1, 0});
      const Poly2 py = p.derivative({0, 1});
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) {
        const Vec2 x = mesh.vertex(f.a) + t[q] * (mesh.vertex(f.b) - mesh.vertex(f.a));
        const Vec2 X = to_frame(x);
        s += w[q] * (n.x * px.eval(X) + n.y * py.eval(X)) / scale;
      }
      return s;
    }
    case DofKind::CellMean: {
      const QuadRule rule =
          mesh.kind() == CellKind::Triangle ? simplex_rule(6) : box_rule(9);
      double num = 0.0, den = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double dj = mesh.jacobian(site.cell, rule.points[q]).det();
        num += rule.weights[q] * dj * p.eval(to_frame(mesh.map_point(site.cell, rule.points[q])));
        den += rule.weights[q] * dj;
      }
      return num / den;
    }
    case DofKind::CellPointValue: {
      const Vec2 ref = mesh.kind() == CellKind::Triangle ? Vec2{1.0 / 3, 1.0 / 3} : Vec2{0, 0};
      return p.eval(to_frame(mesh.map_point(site.cell, ref)));
    }
  }
  throw std::logic_error("physical_functional: unhandled kind");
}

}  // namespace

void FESpace::build_local_bases() {
  physical_backend_ = !(family() == Family::Q1 || family() == Family::Q2);
  const int nc = mesh_->num_cells();
  centers_.resize(nc);
  scales_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    centers_[c] = mesh_->cell_centroid(c);
    scales_[c] = mesh_->cell_diameter(c);
  }
  if (!physical_backend_) return;

  const int n = element_->num_basis();
  shape_polys_.assign(nc, {});
  for (int c = 0; c < nc; ++c) {
    std::vector<double> vmat(n * n);
    for (int row = 0; row < n; ++row) {
      DofSite site = decode_dof(*element_, *mesh_, cell_dofs_[c][row]);
      if (site.kind == DofKind::CellMean || site.kind == DofKind::CellPointValue) site.cell = c;
      for (int col = 0; col < n; ++col)
        vmat[row * n + col] =
            physical_functional(*mesh_, *this, site, c, element_->span[col], centers_[c], scales_[c]);
    }
    auto& shapes = shape_polys_[c];
    shapes.resize(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> a = vmat;
      std::vector<double> rhs(n, 0.0);
      rhs[i] = 1.0;
      solve_dense(n, a, rhs);
      Poly2 s;
      for (int k = 0; k < n; ++k) s += rhs[k] * element_->span[k];
      shapes[i] = s;
    }
  }
}

namespace {

// Physical derivatives of psi(xi(x)) through the bilinear map: inverse
// Jacobian products plus the curvature terms T2, T3 of the inverse map.
double parametric_deriv(const Mesh& mesh, int cell, const Poly2& psi, MultiIndex alpha, Vec2 ref) {
  const int order = alpha.order();
  if (order == 0) return psi.eval(ref);
  if (order > 3) throw std::invalid_argument("parametric elements support derivatives up to order 3");

  const Mat2 jac = mesh.jacobian(cell, ref);
  const Mat2 kin = jac.inverse();  // K(k,i) = d xi_k / d x_i
  const Vec2 curv = mesh.bilinear_curvature(cell);
  const bool affine = curv.x == 0.0 && curv.y == 0.0;

  // Reference derivatives up to the needed order.
  double rd[4][4] = {};
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b) rd[a][b] = psi.eval_deriv({a, b}, ref);
  const auto psi_d = [&](int k) { return k == 0 ? rd[1][0] : rd[0][1]; };
  const auto psi_dd = [&](int k, int l) { return rd[(k == 0) + (l == 0)][(k == 1) + (l == 1)]; };
  const auto psi_ddd = [&](int k, int l, int m) {
    return rd[(k == 0) + (l == 0) + (m == 0)][(k == 1) + (l == 1) + (m == 1)];
  };

  double t2[2][2][2] = {};
  double t3[2][2][2][2] = {};
  if (!affine && order >= 2) {
    // dJ/dxi_m is constant: column m of J depends on the other variable only.
    const Mat2 g[2] = {{0.0, curv.x, 0.0, curv.y}, {curv.x, 0.0, curv.y, 0.0}};
    Mat2 a_m[2];
    for (int m = 0; m < 2; ++m) a_m[m] = kin * g[m] * kin;
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double s = 0.0;
          for (int m = 0; m < 2; ++m) s += a_m[m](k, i) * kin(m, j);
          t2[k][i][j] = -s;
        }
    if (order >= 3) {
      for (int l = 0; l < 2; ++l) {
        Mat2 t2col{t2[0][0][l], t2[0][1][l], t2[1][0][l], t2[1][1][l]};
        for (int k = 0; k < 2; ++k)
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              double s = 0.0;
              for (int m = 0; m < 2; ++m) {
                const double da = (t2col * g[m] * kin)(k, i) + (kin * g[m] * t2col)(k, i);
                s += da * kin(m, j) + a_m[m](k, i) * t2[m][j][l];
              }
              t3[k][i][j][l] = -s;
            }
      }
    }
  }

  int idx[3];
  int pos = 0;
  for (int r = 0; r < alpha.dx; ++r) idx[pos++] = 0;
  for (int r = 0; r < alpha.dy; ++r) idx[pos++] = 1;

  if (order == 1) {
    double s = 0.0;
    for (int k = 0; k < 2; ++k) s += psi_d(k) * kin(k, idx[0]);
    return s;
  }
  if (order == 2) {
    const int i = idx[0], j = idx[1];
    double s = 0.0;
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) s += psi_dd(k, l) * kin(k, i) * kin(l, j);
      s += psi_d(k) * t2[k][i][j];
    }
    return s;
  }
  const int i = idx[0], j = idx[1], l = idx[2];
  double s = 0.0;
  for (int k = 0; k < 2; ++k) {
    for (int m = 0; m < 2; ++m) {
      for (int q = 0; q < 2; ++q) s += psi_ddd(k, m, q) * kin(k, i) * kin(m, j) * kin(q, l);
      s += psi_dd(k, m) *
           (t2[k][i][j] * kin(m, l) + t2[k][i][l] * kin(m, j) + kin(k, i) * t2[m][j][l]);
    }
    s += psi_d(k) * t3[k][i][j][l];
  }
  return s;
}

}  // namespace

double FESpace::shape_deriv(int cell, int i, MultiIndex alpha, Vec2 ref) const {
  if (physical_backend_) {
    const Vec2 x = mesh_->map_point(cell, ref);
    const Vec2 X = (1.0 / scales_[cell]) * (x - centers_[cell]);
    return shape_polys_[cell][i].eval_deriv(alpha, X) * std::pow(scales_[cell], -alpha.order());
  }
  return parametric_deriv(*mesh_, cell, element_->basis[i], alpha, ref);
}

Poly2 FESpace::combine_local(int cell, const std::vector<double>& coeffs) const {
  if (!physical_backend_)
    throw std::logic_error("combine_local: parametric family has no physical polynomials");
  Poly2 out;
  const auto& dofs = cell_dofs_[cell];
  for (std::size_t i = 0; i < dofs.size(); ++i) out += coeffs[dofs[i]] * shape_polys_[cell][i];
  return out;
}

double FEFunction::eval(int cell, Vec2 ref, MultiIndex alpha) const {
  if (alpha.order() > 3) throw std::invalid_argument("FEFunction::eval: |alpha| must be <= 3");
  if (space->has_local_polynomials()) {
    const Poly2 local = space->combine_local(cell, coeffs);
    const Vec2 x = space->mesh().map_point(cell, ref);
    const Vec2 X = (1.0 / space->local_scale(cell)) * (x - space->local_center(cell));
    return local.eval_deriv(alpha, X) * std::pow(space->local_scale(cell), -alpha.order());
  }
  double s = 0.0;
  const auto& dofs = space->cell_dofs(cell);
  for (std::size_t i = 0; i < dofs.size(); ++i)
    s += coeffs[dofs[i]] * space->shape_deriv(cell, static_cast<int>(i), alpha, ref);
  return s;
}

double FESpace::dof_value(int cell, int slot, const ScalarField& u) const {
  DofSite site = decode_dof(*element_, *mesh_, cell_dofs_[cell][slot]);
  switch (site.kind) {
    case DofKind::VertexValue:
      return u.value(mesh_->vertex(site.vertex));
    case DofKind::EdgePointValue: {
      const Face& f = mesh_->face(site.face);
      return u.value(mesh_->vertex(f.a) + site.param * (mesh_->vertex(f.b) - mesh_->vertex(f.a)));
    }
    case DofKind::EdgeMean: {
      const Face& f = mesh_->face(site.face);
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q)
        s += w[q] * u.value(mesh_->vertex(f.a) + t[q] * (mesh_->vertex(f.b) - mesh_->vertex(f.a)));
      return s;
    }
    case DofKind::EdgeNormalDerivMean: {
      const Face& f = mesh_->face(site.face);
      const Vec2 n = face_normal(site.face);
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) {
        const Vec2 x = mesh_->vertex(f.a) + t[q] * (mesh_->vertex(f.b) - mesh_->vertex(f.a));
        s += w[q] * (n.x * u.derivative({1, 0}, x) + n.y * u.derivative({0, 1}, x));
      }
      return s;
    }
    case DofKind::CellMean: {
      const QuadRule rule = mesh_->kind() == CellKind::Triangle ? simplex_rule(10) : box_rule(11);
      double num = 0.0, den = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double dj = mesh_->jacobian(cell, rule.points[q]).det();
        num += rule.weights[q] * dj * u.value(mesh_->map_point(cell, rule.points[q]));
        den += rule.weights[q] * dj;
      }
      return num / den;
    }
    case DofKind::CellPointValue: {
      const Vec2 ref = mesh_->kind() == CellKind::Triangle ? Vec2{1.0 / 3, 1.0 / 3} : Vec2{0, 0};
      return u.value(mesh_->map_point(cell, ref));
    }
  }
  throw std::logic_error("dof_value: unhandled kind");
}

FEFunction interpolate(const FESpace& space, const ScalarField& u) {
  FEFunction f = FEFunction::zero(space);
  for (int c = 0; c < space.mesh().num_cells(); ++c) {
    const auto& dofs = space.cell_dofs(c);
    for (std::size_t slot = 0; slot < dofs.size(); ++slot)
      f.coeffs[dofs[slot]] = space.dof_value(c, static_cast<int>(slot), u);
  }
  for (int g = 0; g < space.num_dofs(); ++g)
    if (space.constrained(g)) f.coeffs[g] = 0.0;
  return f;
}

double check_vanishing(const FESpace& space, MultiIndex gamma, int trials) {
  if (gamma.order() != space.element().order)
    throw std::invalid_argument("check_vanishing: |gamma| must equal the element order r");
  const Vec2* samples =
      space.mesh().kind() == CellKind::Triangle ? kTriSamples : kQuadSamples;
  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(0xFE1ABC0FFEEULL ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(trial + 1)));
    std::vector<double> coeffs(space.num_dofs());
    for (auto& c : coeffs) c = rng.symmetric();
    for (int cell = 0; cell < space.mesh().num_cells(); ++cell) {
      if (space.has_local_polynomials()) {
        const Poly2 local = space.combine_local(cell, coeffs);
        const Poly2 dgamma = local.derivative(gamma);
        const double scale_pow = std::pow(space.local_scale(cell), -gamma.order());
        for (int s = 0; s < 7; ++s) {
          const Vec2 x = space.mesh().map_point(cell, samples[s]);
          const Vec2 X = (1.0 / space.local_scale(cell)) * (x - space.local_center(cell));
          worst = std::max(worst, std::abs(dgamma.eval(X) * scale_pow));
        }
      } else {
        const auto& dofs = space.cell_dofs(cell);
        for (int s = 0; s < 7; ++s) {
          double v = 0.0;
          for (std::size_t i = 0; i < dofs.size(); ++i)
            v += coeffs[dofs[i]] * space.shape_deriv(cell, static_cast<int>(i), gamma, samples[s]);
          worst = std::max(worst, std::abs(v));
        }
      }
    }
  }
  return worst;
}

}  // namespace felab
