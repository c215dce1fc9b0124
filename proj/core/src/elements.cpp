#include "felab/elements.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "felab/quadrature.hpp"

namespace felab {

std::vector<MultiIndex> multi_indices_of_order(int order) {
  std::vector<MultiIndex> out;
  for (int dx = order; dx >= 0; --dx) out.push_back({dx, order - dx});
  return out;
}

Family family_from_string(const std::string& name) {
  static const std::map<std::string, Family> table = {
      {"P1", Family::P1},       {"P2", Family::P2},     {"P3", Family::P3},
      {"Q1", Family::Q1},       {"Q2", Family::Q2},     {"CR", Family::CR},
      {"ECR", Family::ECR},     {"Q1ROT", Family::Q1ROT},
      {"EQ1ROT", Family::EQ1ROT}, {"MORLEY", Family::MORLEY}};
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown element family '" + name + "'");
  return it->second;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::P1: return "P1";
    case Family::P2: return "P2";
    case Family::P3: return "P3";
    case Family::Q1: return "Q1";
    case Family::Q2: return "Q2";
    case Family::CR: return "CR";
    case Family::ECR: return "ECR";
    case Family::Q1ROT: return "Q1ROT";
    case Family::EQ1ROT: return "EQ1ROT";
    case Family::MORLEY: return "MORLEY";
  }
  throw std::invalid_argument("unknown element family");
}

void solve_dense(int n, std::vector<double>& a, std::vector<double>& b) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (a[pivot * n + col] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
    if (pivot != col) {
      for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] * inv;
      if (factor == 0.0) continue;
      for (int k = col; k < n; ++k) a[r * n + k] -= factor * a[col * n + k];
      b[r] -= factor * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * b[k];
    b[r] = s / a[r * n + r];
  }
}

namespace {

// Reference geometry: unit right triangle with vertices (0,0),(1,0),(0,1),
// square [-1,1]^2 with counter-clockwise corners starting at (-1,-1).
const Vec2 kTriVerts[3] = {{0, 0}, {1, 0}, {0, 1}};
const Vec2 kQuadVerts[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
// Outward unit normals per local edge.
const double kSqrtHalf = 0.70710678118654752440;
const Vec2 kTriNormals[3] = {{0, -1}, {kSqrtHalf, kSqrtHalf}, {-1, 0}};
const Vec2 kQuadNormals[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

void edge_endpoints(CellKind kind, int edge, Vec2& a, Vec2& b) {
  if (kind == CellKind::Triangle) {
    a = kTriVerts[edge];
    b = kTriVerts[(edge + 1) % 3];
  } else {
    a = kQuadVerts[edge];
    b = kQuadVerts[(edge + 1) % 4];
  }
}

std::vector<Poly2> lagrange_span(int degree) {
  std::vector<Poly2> out;
  for (int total = 0; total <= degree; ++total)
    for (int ex = total; ex >= 0; --ex) out.push_back(Poly2::monomial(ex, total - ex));
  return out;
}

}  // namespace

int ReferenceElement::num_vertex_dofs() const {
  int n = 0;
  for (const auto& d : dofs) n += d.kind == DofKind::VertexValue ? 1 : 0;
  const int nv = cell_kind == CellKind::Triangle ? 3 : 4;
  return n / nv;
}

int ReferenceElement::num_edge_dofs() const {
  int n = 0;
  for (const auto& d : dofs)
    n += (d.kind == DofKind::EdgePointValue || d.kind == DofKind::EdgeMean ||
          d.kind == DofKind::EdgeNormalDerivMean)
             ? 1
             : 0;
  const int ne = cell_kind == CellKind::Triangle ? 3 : 4;
  return n / ne;
}

int ReferenceElement::num_cell_dofs() const {
  int n = 0;
  for (const auto& d : dofs)
    n += (d.kind == DofKind::CellMean || d.kind == DofKind::CellPointValue) ? 1 : 0;
  return n;
}

double ReferenceElement::eval_deriv(int basis_index, MultiIndex alpha, Vec2 ref_point) const {
  if (alpha.order() > 3) throw std::invalid_argument("eval_deriv: |alpha| must be <= 3");
  return basis[basis_index].eval_deriv(alpha, ref_point);
}

double ReferenceElement::apply_reference_dof(int dof_index, const Poly2& p) const {
  const DofDescriptor& d = dofs[dof_index];
  switch (d.kind) {
    case DofKind::VertexValue:
      return p.eval(cell_kind == CellKind::Triangle ? kTriVerts[d.entity] : kQuadVerts[d.entity]);
    case DofKind::EdgePointValue: {
      Vec2 a, b;
      edge_endpoints(cell_kind, d.entity, a, b);
      return p.eval(a + d.param * (b - a));
    }
    case DofKind::EdgeMean: {
      Vec2 a, b;
      edge_endpoints(cell_kind, d.entity, a, b);
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) s += w[q] * p.eval(a + t[q] * (b - a));
      return s;
    }
    case DofKind::EdgeNormalDerivMean: {
      Vec2 a, b;
      edge_endpoints(cell_kind, d.entity, a, b);
      const Vec2 n = cell_kind == CellKind::Triangle ? kTriNormals[d.entity] : kQuadNormals[d.entity];
      const Poly2 px = p.derivative({1, 0});
      const Poly2 py = p.derivative({0, 1});
      std::vector<double> t, w;
      gauss_legendre_01(5, t, w);
      double s = 0.0;
      for (std::size_t q = 0; q < t.size(); ++q) {
        const Vec2 x = a + t[q] * (b - a);
        s += w[q] * (n.x * px.eval(x) + n.y * py.eval(x));
      }
      return s;
    }
    case DofKind::CellMean: {
      const QuadRule rule =
          cell_kind == CellKind::Triangle ? simplex_rule(6) : box_rule(9);
      double s = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        s += rule.weights[q] * p.eval(rule.points[q]);
      return s / rule.weight_sum();
    }
    case DofKind::CellPointValue:
      return p.eval(cell_kind == CellKind::Triangle ? Vec2{1.0 / 3.0, 1.0 / 3.0} : Vec2{0, 0});
  }
  throw std::logic_error("apply_reference_dof: unhandled kind");
}

namespace {

ReferenceElement make_element(Family family) {
  ReferenceElement el;
  el.family = family;
  switch (family) {
    case Family::P1:
      el.cell_kind = CellKind::Triangle;
      el.order = 2;
      el.continuity_order = 1;
      el.span = lagrange_span(1);
      for (int v = 0; v < 3; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      el.gamma = multi_indices_of_order(2);
      break;
    case Family::P2:
      el.cell_kind = CellKind::Triangle;
      el.order = 3;
      el.continuity_order = 1;
      el.span = lagrange_span(2);
      for (int v = 0; v < 3; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      for (int e = 0; e < 3; ++e) el.dofs.push_back({DofKind::EdgePointValue, e, 0.5});
      el.gamma = multi_indices_of_order(3);
      break;
    case Family::P3:
      el.cell_kind = CellKind::Triangle;
      el.order = 4;
      el.continuity_order = 1;
      el.span = lagrange_span(3);
      for (int v = 0; v < 3; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      for (int e = 0; e < 3; ++e) {
        el.dofs.push_back({DofKind::EdgePointValue, e, 1.0 / 3.0});
        el.dofs.push_back({DofKind::EdgePointValue, e, 2.0 / 3.0});
      }
      el.dofs.push_back({DofKind::CellPointValue, 0, 0.0});
      el.gamma = multi_indices_of_order(4);
      break;
    case Family::Q1:
      el.cell_kind = CellKind::Quadrilateral;
      el.order = 2;
      el.continuity_order = 1;
      el.span = {Poly2::monomial(0, 0), Poly2::monomial(1, 0), Poly2::monomial(0, 1),
                 Poly2::monomial(1, 1)};
      for (int v = 0; v < 4; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      el.gamma = {{2, 0}, {0, 2}};
      break;
    case Family::Q2:
      el.cell_kind = CellKind::Quadrilateral;
      el.order = 3;
      el.continuity_order = 1;
      for (int ex = 0; ex <= 2; ++ex)
        for (int ey = 0; ey <= 2; ++ey) el.span.push_back(Poly2::monomial(ex, ey));
      for (int v = 0; v < 4; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      for (int e = 0; e < 4; ++e) el.dofs.push_back({DofKind::EdgePointValue, e, 0.5});
      el.dofs.push_back({DofKind::CellPointValue, 0, 0.0});
      el.gamma = {{3, 0}, {0, 3}};
      break;
    case Family::CR:
      el.cell_kind = CellKind::Triangle;
      el.order = 2;
      el.continuity_order = 0;
      el.span = lagrange_span(1);
      for (int e = 0; e < 3; ++e) el.dofs.push_back({DofKind::EdgeMean, e, 0.0});
      el.gamma = multi_indices_of_order(2);
      break;
    case Family::ECR: {
      el.cell_kind = CellKind::Triangle;
      el.order = 2;
      el.continuity_order = 0;
      el.span = lagrange_span(1);
      Poly2 bubble = Poly2::monomial(2, 0) + Poly2::monomial(0, 2);
      el.span.push_back(bubble);
      for (int e = 0; e < 3; ++e) el.dofs.push_back({DofKind::EdgeMean, e, 0.0});
      el.dofs.push_back({DofKind::CellMean, 0, 0.0});
      el.gamma = {{1, 1}};
      break;
    }
    case Family::Q1ROT: {
      el.cell_kind = CellKind::Quadrilateral;
      el.order = 2;
      el.continuity_order = 0;
      el.span = {Poly2::monomial(0, 0), Poly2::monomial(1, 0), Poly2::monomial(0, 1),
                 Poly2::monomial(2, 0) + Poly2::monomial(0, 2, -1.0)};
      for (int e = 0; e < 4; ++e) el.dofs.push_back({DofKind::EdgeMean, e, 0.0});
      el.gamma = {{1, 1}};
      break;
    }
    case Family::EQ1ROT:
      el.cell_kind = CellKind::Quadrilateral;
      el.order = 2;
      el.continuity_order = 0;
      el.span = {Poly2::monomial(0, 0), Poly2::monomial(1, 0), Poly2::monomial(0, 1),
                 Poly2::monomial(2, 0), Poly2::monomial(0, 2)};
      for (int e = 0; e < 4; ++e) el.dofs.push_back({DofKind::EdgeMean, e, 0.0});
      el.dofs.push_back({DofKind::CellMean, 0, 0.0});
      el.gamma = {{1, 1}};
      break;
    case Family::MORLEY:
      el.cell_kind = CellKind::Triangle;
      el.order = 3;
      el.continuity_order = 0;
      el.span = lagrange_span(2);
      for (int v = 0; v < 3; ++v) el.dofs.push_back({DofKind::VertexValue, v, 0.0});
      for (int e = 0; e < 3; ++e) el.dofs.push_back({DofKind::EdgeNormalDerivMean, e, 0.0});
      el.gamma = multi_indices_of_order(3);
      break;
  }

  // Nodalize: invert the DOF-on-span matrix.
  const int n = static_cast<int>(el.span.size());
  if (n != static_cast<int>(el.dofs.size()))
    throw std::logic_error("make_element: dof/span count mismatch");
  std::vector<double> vmat(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) vmat[a * n + b] = el.apply_reference_dof(a, el.span[b]);
  el.basis.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> a = vmat;
    std::vector<double> rhs(n, 0.0);
    rhs[i] = 1.0;
    solve_dense(n, a, rhs);
    Poly2 b;
    for (int k = 0; k < n; ++k) b += rhs[k] * el.span[k];
    el.basis[i] = b;
  }
  return el;
}

}  // namespace

const ReferenceElement& reference_element(Family family) {
  static const std::map<Family, ReferenceElement> cache = [] {
    std::map<Family, ReferenceElement> c;
    for (Family f : {Family::P1, Family::P2, Family::P3, Family::Q1, Family::Q2, Family::CR,
                     Family::ECR, Family::Q1ROT, Family::EQ1ROT, Family::MORLEY})
      c.emplace(f, make_element(f));
    return c;
  }();
  return cache.at(family);
}

}  // namespace felab
