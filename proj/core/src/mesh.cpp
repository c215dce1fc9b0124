#include "felab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace felab {

namespace {

double polygon_area(const Vec2* pts, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 p = pts[i];
    const Vec2 q = pts[(i + 1) % n];
    s += cross(p, q);
  }
  return 0.5 * s;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 4>> cells, CellKind kind)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), kind_(kind) {
  build_faces();
}

void Mesh::build_faces() {
  const int nv_cell = vertices_per_cell();
  std::map<std::pair<int, int>, int> edge_to_face;
  cell_faces_.assign(cells_.size(), {-1, -1, -1, -1});
  for (int c = 0; c < num_cells(); ++c) {
    for (int e = 0; e < nv_cell; ++e) {
      const int va = cells_[c][e];
      const int vb = cells_[c][(e + 1) % nv_cell];
      const std::pair<int, int> key{std::min(va, vb), std::max(va, vb)};
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face f;
        f.a = key.first;
        f.b = key.second;
        f.left = c;
        edge_to_face.emplace(key, static_cast<int>(faces_.size()));
        cell_faces_[c][e] = static_cast<int>(faces_.size());
        faces_.push_back(f);
      } else {
        Face& f = faces_[it->second];
        if (f.right >= 0) throw std::runtime_error("Mesh: face shared by more than two cells");
        f.right = c;
        cell_faces_[c][e] = it->second;
      }
    }
  }
  boundary_vertex_.assign(vertices_.size(), 0);
  for (const Face& f : faces_) {
    if (f.boundary()) {
      boundary_vertex_[f.a] = 1;
      boundary_vertex_[f.b] = 1;
    }
  }
}

Vec2 Mesh::map_point(int c, Vec2 ref) const {
  const auto& cell = cells_[c];
  if (kind_ == CellKind::Triangle) {
    const Vec2 v0 = vertices_[cell[0]], v1 = vertices_[cell[1]], v2 = vertices_[cell[2]];
    return v0 + ref.x * (v1 - v0) + ref.y * (v2 - v0);
  }
  const Vec2 v0 = vertices_[cell[0]], v1 = vertices_[cell[1]];
  const Vec2 v2 = vertices_[cell[2]], v3 = vertices_[cell[3]];
  const double xi = ref.x, eta = ref.y;
  const double n0 = 0.25 * (1 - xi) * (1 - eta);
  const double n1 = 0.25 * (1 + xi) * (1 - eta);
  const double n2 = 0.25 * (1 + xi) * (1 + eta);
  const double n3 = 0.25 * (1 - xi) * (1 + eta);
  return n0 * v0 + n1 * v1 + n2 * v2 + n3 * v3;
}

Mat2 Mesh::jacobian(int c, Vec2 ref) const {
  const auto& cell = cells_[c];
  if (kind_ == CellKind::Triangle) {
    const Vec2 v0 = vertices_[cell[0]], v1 = vertices_[cell[1]], v2 = vertices_[cell[2]];
    return {v1.x - v0.x, v2.x - v0.x, v1.y - v0.y, v2.y - v0.y};
  }
  const Vec2 v0 = vertices_[cell[0]], v1 = vertices_[cell[1]];
  const Vec2 v2 = vertices_[cell[2]], v3 = vertices_[cell[3]];
  // F = a + b*xi + c*eta + d*xi*eta on [-1,1]^2.
  const Vec2 b = 0.25 * (v1 - v0 + v2 - v3);
  const Vec2 cc = 0.25 * (v3 - v0 + v2 - v1);
  const Vec2 d = 0.25 * (v0 - v1 + v2 - v3);
  return {b.x + d.x * ref.y, cc.x + d.x * ref.x, b.y + d.y * ref.y, cc.y + d.y * ref.x};
}

Vec2 Mesh::bilinear_curvature(int c) const {
  if (kind_ == CellKind::Triangle) return {0.0, 0.0};
  const auto& cell = cells_[c];
  const Vec2 v0 = vertices_[cell[0]], v1 = vertices_[cell[1]];
  const Vec2 v2 = vertices_[cell[2]], v3 = vertices_[cell[3]];
  return 0.25 * (v0 - v1 + v2 - v3);
}

double Mesh::cell_area(int c) const {
  Vec2 pts[4];
  const int n = vertices_per_cell();
  for (int i = 0; i < n; ++i) pts[i] = vertices_[cells_[c][i]];
  return polygon_area(pts, n);
}

double Mesh::cell_diameter(int c) const {
  const int n = vertices_per_cell();
  double d2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec2 diff = vertices_[cells_[c][i]] - vertices_[cells_[c][j]];
      d2 = std::max(d2, dot(diff, diff));
    }
  return std::sqrt(d2);
}

Vec2 Mesh::cell_centroid(int c) const {
  const int n = vertices_per_cell();
  Vec2 s{0.0, 0.0};
  for (int i = 0; i < n; ++i) s = s + vertices_[cells_[c][i]];
  return (1.0 / n) * s;
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int c = 0; c < num_cells(); ++c) s += cell_area(c);
  return s;
}

void Mesh::validate() const {
  if (std::abs(total_area() - 1.0) > 1e-12)
    throw std::runtime_error("Mesh: cells do not tile the unit square (area != 1)");
  for (int c = 0; c < num_cells(); ++c) {
    if (kind_ == CellKind::Triangle) {
      if (jacobian(c, {0.0, 0.0}).det() <= 0.0)
        throw std::runtime_error("Mesh: non-positive triangle Jacobian");
    } else {
      // det J is bilinear in (xi, eta), so corner positivity implies
      // positivity on the whole cell.
      for (const Vec2 corner : {Vec2{-1, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{-1, 1}})
        if (jacobian(c, corner).det() <= 0.0)
          throw std::runtime_error("Mesh: non-positive quadrilateral Jacobian");
    }
  }
  std::vector<int> seen(num_faces(), 0);
  for (int c = 0; c < num_cells(); ++c) {
    for (int e = 0; e < vertices_per_cell(); ++e) {
      const int f = cell_faces_[c][e];
      if (f < 0 || f >= num_faces()) throw std::runtime_error("Mesh: missing face link");
      if (faces_[f].left != c && faces_[f].right != c)
        throw std::runtime_error("Mesh: face adjacency not symmetric");
      ++seen[f];
    }
  }
  for (int f = 0; f < num_faces(); ++f) {
    const int expected = faces_[f].boundary() ? 1 : 2;
    if (seen[f] != expected) throw std::runtime_error("Mesh: face multiplicity mismatch");
  }
}

Mesh build_structured(int n, CellKind kind) {
  if (n < 1) throw std::invalid_argument("build_structured: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 4>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (kind == CellKind::Quadrilateral) {
        cells.push_back({a, b, c, d});
      } else {
        cells.push_back({a, b, c, -1});
        cells.push_back({a, c, d, -1});
      }
    }
  return Mesh(std::move(vertices), std::move(cells), kind);
}

Mesh refine_uniform(const Mesh& m) {
  std::vector<Vec2> vertices = m.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  const auto edge_mid = [&](int a, int b) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (m.vertex(a) + m.vertex(b)));
    midpoint.emplace(key, id);
    return id;
  };
  std::vector<std::array<int, 4>> cells;
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& cv = m.cell(c);
    if (m.kind() == CellKind::Triangle) {
      const int m01 = edge_mid(cv[0], cv[1]);
      const int m12 = edge_mid(cv[1], cv[2]);
      const int m02 = edge_mid(cv[0], cv[2]);
      cells.push_back({cv[0], m01, m02, -1});
      cells.push_back({cv[1], m12, m01, -1});
      cells.push_back({cv[2], m02, m12, -1});
      cells.push_back({m01, m12, m02, -1});
    } else {
      const int m01 = edge_mid(cv[0], cv[1]);
      const int m12 = edge_mid(cv[1], cv[2]);
      const int m23 = edge_mid(cv[2], cv[3]);
      const int m30 = edge_mid(cv[3], cv[0]);
      const int cc = static_cast<int>(vertices.size());
      vertices.push_back(0.25 * (m.vertex(cv[0]) + m.vertex(cv[1]) + m.vertex(cv[2]) + m.vertex(cv[3])));
      cells.push_back({cv[0], m01, cc, m30});
      cells.push_back({m01, cv[1], m12, cc});
      cells.push_back({cc, m12, cv[2], m23});
      cells.push_back({m30, cc, m23, cv[3]});
    }
  }
  return Mesh(std::move(vertices), std::move(cells), m.kind());
}

namespace {

bool cells_positive(const Mesh& shape, const std::vector<Vec2>& verts,
                    const std::vector<int>& cells_to_check) {
  for (int c : cells_to_check) {
    const auto& cv = shape.cell(c);
    if (shape.kind() == CellKind::Triangle) {
      const Vec2 e1 = verts[cv[1]] - verts[cv[0]];
      const Vec2 e2 = verts[cv[2]] - verts[cv[0]];
      if (cross(e1, e2) <= 0.0) return false;
    } else {
      for (int k = 0; k < 4; ++k) {
        const Vec2 prev = verts[cv[(k + 3) % 4]] - verts[cv[k]];
        const Vec2 next = verts[cv[(k + 1) % 4]] - verts[cv[k]];
        if (cross(next, prev) <= 0.0) return false;
      }
    }
  }
  return true;
}

}  // namespace

Mesh perturb(const Mesh& m, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 0.3)
    throw std::invalid_argument("perturb: amplitude must be in [0, 0.3]");
  const int nv = m.num_vertices();
  std::vector<double> shortest_edge(nv, 1e300);
  std::vector<std::vector<int>> vertex_cells(nv);
  for (int c = 0; c < m.num_cells(); ++c)
    for (int k = 0; k < m.vertices_per_cell(); ++k) vertex_cells[m.cell(c)[k]].push_back(c);
  for (const Face& f : m.faces()) {
    const double len = norm(m.vertex(f.a) - m.vertex(f.b));
    shortest_edge[f.a] = std::min(shortest_edge[f.a], len);
    shortest_edge[f.b] = std::min(shortest_edge[f.b], len);
  }

  std::vector<Vec2> verts = m.vertices();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int v = 0; v < nv; ++v) {
    if (m.vertex_on_boundary(v)) continue;
    Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(v + 1)));
    const double u1 = rng.symmetric();
    const double u2 = rng.symmetric();
    // |(u1, u2)| <= sqrt(2), so this displacement obeys the magnitude cap.
    Vec2 d = (amplitude * shortest_edge[v] * inv_sqrt2) * Vec2{u1, u2};
    const Vec2 original = verts[v];
    bool placed = false;
    for (int attempt = 0; attempt <= 10; ++attempt) {
      verts[v] = original + d;
      if (cells_positive(m, verts, vertex_cells[v])) {
        placed = true;
        break;
      }
      d = 0.5 * d;
    }
    if (!placed) verts[v] = original;
  }
  std::vector<std::array<int, 4>> cells(m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) cells[c] = m.cell(c);
  return Mesh(std::move(verts), std::move(cells), m.kind());
}

Mesh grade_toward_corner(int n, double mu) {
  if (n < 2) throw std::invalid_argument("grade_toward_corner: n must be >= 2");
  if (!(mu > 0.0 && mu <= 1.0))
    throw std::invalid_argument("grade_toward_corner: mu must be in (0, 1]");
  std::vector<double> line(n + 1);
  for (int i = 0; i <= n; ++i)
    line[i] = std::pow(static_cast<double>(i) / n, 1.0 / mu);
  line[0] = 0.0;
  line[n] = 1.0;
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.push_back({line[i], line[j]});
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 4>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      cells.push_back({a, b, c, -1});
      cells.push_back({a, c, d, -1});
    }
  return Mesh(std::move(vertices), std::move(cells), CellKind::Triangle);
}

Vec2 Mesh::inverse_map(int c, Vec2 x) const {
  if (kind_ == CellKind::Triangle) {
    const Vec2 v0 = vertices_[cells_[c][0]];
    return jacobian(c, {0, 0}).inverse().apply(x - v0);
  }
  Vec2 ref{0.0, 0.0};
  for (int it = 0; it < 50; ++it) {
    const Vec2 residual = map_point(c, ref) - x;
    if (std::abs(residual.x) + std::abs(residual.y) < 1e-14) break;
    const Vec2 step = jacobian(c, ref).inverse().apply(residual);
    ref = ref - step;
  }
  return ref;
}

PointLocator::PointLocator(const Mesh& m, int bins_per_side) : mesh_(&m) {
  bins_ = bins_per_side > 0
              ? bins_per_side
              : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(m.num_cells()))));
  cells_in_bin_.assign(static_cast<std::size_t>(bins_) * bins_, {});
  const auto clamp_bin = [this](double t) {
    int b = static_cast<int>(t * bins_);
    return std::min(std::max(b, 0), bins_ - 1);
  };
  for (int c = 0; c < m.num_cells(); ++c) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (int k = 0; k < m.vertices_per_cell(); ++k) {
      const Vec2 v = m.vertex(m.cell(c)[k]);
      x0 = std::min(x0, v.x);
      y0 = std::min(y0, v.y);
      x1 = std::max(x1, v.x);
      y1 = std::max(y1, v.y);
    }
    for (int bx = clamp_bin(x0); bx <= clamp_bin(x1); ++bx)
      for (int by = clamp_bin(y0); by <= clamp_bin(y1); ++by)
        cells_in_bin_[static_cast<std::size_t>(by) * bins_ + bx].push_back(c);
  }
}

int PointLocator::locate(Vec2 x, Vec2* ref) const {
  const auto clamp_bin = [this](double t) {
    int b = static_cast<int>(t * bins_);
    return std::min(std::max(b, 0), bins_ - 1);
  };
  const auto& candidates =
      cells_in_bin_[static_cast<std::size_t>(clamp_bin(x.y)) * bins_ + clamp_bin(x.x)];
  const double tol = 1e-12;
  for (int c : candidates) {
    const Vec2 r = mesh_->inverse_map(c, x);
    const bool inside = mesh_->kind() == CellKind::Triangle
                            ? (r.x >= -tol && r.y >= -tol && r.x + r.y <= 1.0 + tol)
                            : (std::abs(r.x) <= 1.0 + tol && std::abs(r.y) <= 1.0 + tol);
    if (inside) {
      if (ref) *ref = r;
      return c;
    }
  }
  return -1;
}

double triangle_inradius(Vec2 a, Vec2 b, Vec2 c) {
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  const double peri = norm(b - a) + norm(c - b) + norm(a - c);
  return 2.0 * area / peri;
}

double quad_inradius_approx(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = segment_segment_distance(a, b, d, c);
  const double d2 = segment_segment_distance(b, c, a, d);
  return 0.5 * std::min(d1, d2);
}

MeshQuality quality(const Mesh& m) {
  MeshQuality q;
  q.h = 0.0;
  q.h_min = 1e300;
  q.sigma = 1e300;
  for (int c = 0; c < m.num_cells(); ++c) {
    const double diam = m.cell_diameter(c);
    q.h = std::max(q.h, diam);
    q.h_min = std::min(q.h_min, diam);
    double rho;
    const auto& cv = m.cell(c);
    if (m.kind() == CellKind::Triangle)
      rho = triangle_inradius(m.vertex(cv[0]), m.vertex(cv[1]), m.vertex(cv[2]));
    else
      rho = quad_inradius_approx(m.vertex(cv[0]), m.vertex(cv[1]), m.vertex(cv[2]), m.vertex(cv[3]));
    q.sigma = std::min(q.sigma, rho / diam);
  }
  q.beta = q.h / q.h_min;
  return q;
}

void write_mesh_text(const Mesh& m, std::ostream& out) {
  out << "vertices " << m.num_vertices() << " cells " << m.num_cells() << " kind "
      << (m.kind() == CellKind::Triangle ? "tri" : "quad") << "\n";
  char buf[64];
  for (int v = 0; v < m.num_vertices(); ++v) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", m.vertex(v).x, m.vertex(v).y);
    out << buf << "\n";
  }
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& cv = m.cell(c);
    out << cv[0] << " " << cv[1] << " " << cv[2];
    if (m.kind() == CellKind::Quadrilateral) out << " " << cv[3];
    out << "\n";
  }
}

void write_mesh_text(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh_text: cannot open " + path);
  write_mesh_text(m, out);
}

Mesh read_mesh_text(std::istream& in) {
  std::string tok_vertices, tok_cells, tok_kind, kind_name;
  int nv = 0, nc = 0;
  if (!(in >> tok_vertices >> nv >> tok_cells >> nc >> tok_kind >> kind_name) ||
      tok_vertices != "vertices" || tok_cells != "cells" || tok_kind != "kind")
    throw std::runtime_error("read_mesh_text: malformed header");
  CellKind kind;
  if (kind_name == "tri")
    kind = CellKind::Triangle;
  else if (kind_name == "quad")
    kind = CellKind::Quadrilateral;
  else
    throw std::runtime_error("read_mesh_text: unknown kind '" + kind_name + "'");
  std::vector<Vec2> vertices(nv);
  for (int v = 0; v < nv; ++v)
    if (!(in >> vertices[v].x >> vertices[v].y))
      throw std::runtime_error("read_mesh_text: truncated vertex list");
  const int per_cell = kind == CellKind::Triangle ? 3 : 4;
  std::vector<std::array<int, 4>> cells(nc, {-1, -1, -1, -1});
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < per_cell; ++k)
      if (!(in >> cells[c][k]))
        throw std::runtime_error("read_mesh_text: truncated cell list");
  return Mesh(std::move(vertices), std::move(cells), kind);
}

Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh_text: cannot open " + path);
  return read_mesh_text(in);
}

}  // namespace felab
