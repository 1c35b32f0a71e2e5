#pragma once

#include <array>
#include <functional>
#include <vector>

#include "special_functions.hpp"

namespace crackwave {

using Tri = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Oriented triangulated surface in the lower half-space.
struct CrackMesh {
  std::vector<Vec3> vertices;
  std::vector<Tri> triangles;
  std::vector<Vec3> normals;   // per triangle, unit
  std::vector<double> areas;   // per triangle
  bool closed = false;         // closed surfaces skip the orientation and open-boundary checks

  /// Builds normals and areas from the vertex/triangle lists. Orientation follows vertex order.
  static CrackMesh from_cells(std::vector<Vec3> vertices, std::vector<Tri> triangles, bool closed = false);

  double diameter() const;
  double max_cell_diameter() const;
  double total_area() const { double s = 0; for (double a : areas) s += a; return s; }
  Vec3 centroid(int tri) const;
  /// Edges with exactly one adjacent triangle.
  std::vector<Edge> boundary_edges() const;
  /// Sorted, de-duplicated vertex indices on boundary edges.
  std::vector<int> boundary_vertices() const;
  /// Mirror image across the top plane; mirrored normals, orientation preserved in the mirrored sense.
  CrackMesh mirrored() const;
};

struct CrackMeshChecks {
  double standoff = 0.5;         // every vertex must satisfy x3 <= -standoff
  bool require_up = true;        // n . e3 > 0 on every triangle
  bool require_halfspace = true;
};

/// Shared validator: positive areas, unit normals, half-space containment, orientation.
void validate(const CrackMesh& mesh, const CrackMeshChecks& checks = {});

/// Geodesic triangulation of the upper (or lower) open hemisphere, normals pointing up.
CrackMesh make_hemisphere(const Vec3& center, double radius, bool upper, int n_refine, double standoff = 0.5);

/// Closed sphere built from the two hemispheres sharing their equator ring.
/// With `inward` the normals point into the ball.
CrackMesh make_sphere(const Vec3& center, double radius, int n_refine, bool inward);

/// Surface of revolution of a (r, x3) profile about the x3 axis, moved down by `shift`.
CrackMesh make_revolution_surface(const std::vector<Vec2>& profile, int n_theta, double shift, double standoff = 0.5);

/// Structured triangulation of center + s*a*e1 + t*b*e2, |s|,|t| <= 1, normal e1 x e2.
CrackMesh make_planar_crack(const Vec3& center, const Vec3& e1, const Vec3& e2, double a, double b, int n1, int n2,
                            double standoff = 0.5);

/// Merges two meshes, identifying bit-identical vertices.
CrackMesh merge_meshes(const CrackMesh& a, const CrackMesh& b, bool closed);

// --- 2D curves ---------------------------------------------------------------

/// Polyline in the (x1, x2) half-plane with per-segment unit normals (n . e2 > 0).
struct Curve2D {
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  std::vector<double> lengths;

  static Curve2D from_points(std::vector<Vec2> points);
  double diameter() const;
  /// Largest angle between a segment normal and e2, in radians.
  double max_normal_tilt() const;
};

void validate(const Curve2D& curve, double standoff = 0.5);

// --- 2D triangulations for the eigenproblems --------------------------------

enum class EdgeTag { free, symmetry };

struct TaggedEdge {
  Edge nodes;
  EdgeTag tag;
};

/// Triangulation in (x1, x2), or (r, x3) when `radial_weight` is set.
struct Mesh2D {
  std::vector<Vec2> nodes;
  std::vector<Tri> triangles;  // counter-clockwise
  std::vector<TaggedEdge> boundary;
  bool radial_weight = false;
  /// Nodes on the upper free boundary, ordered by first coordinate (filled by the column mesher).
  std::vector<int> top_nodes;

  double area(int tri) const;
  double total_area() const;
  /// Smallest interior angle (radians) over triangles whose centroid satisfies `where`.
  double min_angle(const std::function<bool(const Vec2&)>& where) const;
  std::vector<int> symmetry_nodes() const;
  void tag_boundary(bool symmetry_on_axis);
};

void validate(const Mesh2D& mesh);

/// Cusped domain {-a f(x1) < x2 < a f(x1)}, f(t) = (t-1)^2 (t+1)^2.
struct CuspDomainSpec {
  double a = 1.0;
  bool half = true;            // keep only x2 > 0, with x2 = 0 tagged as symmetry line
  int grading_layers = 10;     // geometric layers (ratio 0.7) toward each cusp tip
  bool axisymmetric = false;   // (r, x3) profile over 0 < r < 1 with radial weight

  void validate() const;
};

inline double cusp_profile(double t) { return (t - 1.0) * (t - 1.0) * (t + 1.0) * (t + 1.0); }

inline constexpr double kGradingRatio = 0.7;

/// Domain between x2 = 0 (or -height) and x2 = height(x1) for x1 in [x_lo, x_hi], meshed by columns.
struct ColumnDomain {
  double x_lo = -1.0;
  double x_hi = 1.0;
  std::function<double(double)> height;
  /// Height used to choose layer counts; lets thin domains keep the reference layer count.
  std::function<double(double)> reference_height;
  bool half = true;
  bool grade_lo = false;
  bool grade_hi = false;
  int grading_layers = 10;
  bool radial_weight = false;
};

Mesh2D make_column_mesh(const ColumnDomain& domain, double h);
Mesh2D make_cusp_mesh(const CuspDomainSpec& spec, double h);
/// Axis-aligned rectangle with nx * ny cells; optionally tags the bottom side as symmetry line.
Mesh2D make_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, bool symmetry_bottom);

}  // namespace crackwave
