#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "felab/geometry.hpp"

namespace felab {

enum class CellKind { Triangle, Quadrilateral };

/// Oriented by the canonical vertex pair (a < b); `right` is -1 on the
/// domain boundary.
struct Face {
  int a = -1;
  int b = -1;
  int left = -1;
  int right = -1;

  bool boundary() const { return right < 0; }
};

/// Mesh quality metrics: h = max cell diameter, h_min = min cell diameter,
/// sigma = min over cells of (inscribed radius / diameter), beta = h / h_min.
struct MeshQuality {
  double h = 0.0;
  double h_min = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
};

/// Conforming 2D partition of the unit square into triangles or
/// quadrilaterals. Immutable after construction; all generators are
/// deterministic.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 4>> cells, CellKind kind);

  CellKind kind() const { return kind_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int vertices_per_cell() const { return kind_ == CellKind::Triangle ? 3 : 4; }

  Vec2 vertex(int v) const { return vertices_[v]; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::array<int, 4>& cell(int c) const { return cells_[c]; }
  const Face& face(int f) const { return faces_[f]; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Local faces of a cell, ordered (v0,v1), (v1,v2), ... wrapping around.
  const std::array<int, 4>& cell_faces(int c) const { return cell_faces_[c]; }
  bool vertex_on_boundary(int v) const { return boundary_vertex_[v] != 0; }

  /// Reference-to-physical map: affine for triangles (reference unit right
  /// triangle), bilinear for quadrilaterals (reference square [-1,1]^2).
  Vec2 map_point(int c, Vec2 ref) const;
  /// Jacobian of the reference map at `ref` (constant for triangles).
  Mat2 jacobian(int c, Vec2 ref) const;
  /// Mixed second derivative d^2 F / (dxi deta) of the bilinear map
  /// (zero for triangles and parallelograms).
  Vec2 bilinear_curvature(int c) const;

  double cell_area(int c) const;
  double cell_diameter(int c) const;
  Vec2 cell_centroid(int c) const;
  double total_area() const;

  /// Reference coordinates of a physical point inside `c` (affine inverse
  /// for triangles, Newton for bilinear quadrilaterals).
  Vec2 inverse_map(int c, Vec2 x) const;

  /// Throws std::runtime_error when a structural invariant is violated:
  /// non-positive Jacobians, inconsistent face adjacency, or total area
  /// different from 1 by more than 1e-12.
  void validate() const;

 private:
  void build_faces();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 4>> cells_;
  CellKind kind_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> cell_faces_;
  std::vector<std::uint8_t> boundary_vertex_;
};

/// n x n structured mesh of the unit square. Triangles split each square
/// along the lower-left to upper-right diagonal.
Mesh build_structured(int n, CellKind kind);

/// Uniform refinement: triangles into 4 congruent children by edge
/// midpoints, quadrilaterals into 4 by edge midpoints and centroid.
Mesh refine_uniform(const Mesh& m);

/// Displace interior vertices by deterministic pseudo-random offsets of
/// magnitude <= amplitude * (shortest incident edge). If a displacement
/// makes an incident cell degenerate it is halved up to 10 times, then
/// dropped. amplitude in [0, 0.3].
Mesh perturb(const Mesh& m, double amplitude, std::uint64_t seed);

/// Structured triangle mesh with grid lines at (i/n)^(1/mu), mu in (0, 1];
/// grading concentrates cells at the origin corner and drives beta up like
/// n^(1/mu - 1). mu = 1 reproduces build_structured(n, Triangle).
Mesh grade_toward_corner(int n, double mu);

MeshQuality quality(const Mesh& m);

/// Bin-accelerated physical-point-to-cell lookup.
class PointLocator {
 public:
  explicit PointLocator(const Mesh& m, int bins_per_side = 0);

  /// Cell containing `x` (ties on shared faces resolved arbitrarily) and its
  /// reference coordinates; returns -1 when no cell contains the point.
  int locate(Vec2 x, Vec2* ref = nullptr) const;

 private:
  const Mesh* mesh_;
  int bins_;
  std::vector<std::vector<int>> cells_in_bin_;
};

/// Exact inscribed-circle radius of a triangle (area over semiperimeter).
double triangle_inradius(Vec2 a, Vec2 b, Vec2 c);
/// Approximate inscribed radius of a quadrilateral: half the minimum
/// distance between opposite edges. Only triangles feed sigma assertions.
double quad_inradius_approx(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Text format: "vertices N cells M kind tri|quad", N coordinate lines,
/// M connectivity lines. Reals carry 17 significant digits, so
/// write -> read round-trips bit-exactly.
void write_mesh_text(const Mesh& m, std::ostream& out);
void write_mesh_text(const Mesh& m, const std::string& path);
Mesh read_mesh_text(std::istream& in);
Mesh read_mesh_text(const std::string& path);

}  // namespace felab
