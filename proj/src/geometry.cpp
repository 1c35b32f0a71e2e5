#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace crackwave {

namespace {

std::string tri_label(int i) {
  std::ostringstream os;
  os << "triangle " << i;
  return os.str();
}

bool segments_cross(const Vec2& p, const Vec2& q, const Vec2& r, const Vec2& s) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    return (v > 0) - (v < 0);
  };
  const int o1 = orient(p, q, r), o2 = orient(p, q, s), o3 = orient(r, s, p), o4 = orient(r, s, q);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

CrackMesh CrackMesh::from_cells(std::vector<Vec3> vertices, std::vector<Tri> triangles, bool closed) {
  CrackMesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  m.closed = closed;
  m.normals.resize(m.triangles.size());
  m.areas.resize(m.triangles.size());
  const int nv = static_cast<int>(m.vertices.size());
  for (std::size_t i = 0; i < m.triangles.size(); ++i) {
    const Tri& t = m.triangles[i];
    for (int v : t) require(v >= 0 && v < nv, ErrorKind::validation, tri_label(static_cast<int>(i)) + " references a missing vertex");
    const Vec3 c = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    const double n = c.norm();
    m.areas[i] = 0.5 * n;
    m.normals[i] = n > 0 ? Vec3(c / n) : Vec3::Zero();
  }
  return m;
}

double CrackMesh::diameter() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const Vec3& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

double CrackMesh::max_cell_diameter() const {
  double d = 0;
  for (const Tri& t : triangles) {
    d = std::max({d, (vertices[t[0]] - vertices[t[1]]).norm(), (vertices[t[1]] - vertices[t[2]]).norm(),
                  (vertices[t[2]] - vertices[t[0]]).norm()});
  }
  return d;
}

Vec3 CrackMesh::centroid(int tri) const {
  const Tri& t = triangles[tri];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

std::vector<Edge> CrackMesh::boundary_edges() const {
  std::map<Edge, int> count;
  for (const Tri& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      Edge k{t[e], t[(e + 1) % 3]};
      if (k[0] > k[1]) std::swap(k[0], k[1]);
      ++count[k];
    }
  }
  std::vector<Edge> out;
  for (const auto& [e, c] : count)
    if (c == 1) out.push_back(e);
  return out;
}

std::vector<int> CrackMesh::boundary_vertices() const {
  std::vector<int> out;
  for (const Edge& e : boundary_edges()) {
    out.push_back(e[0]);
    out.push_back(e[1]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CrackMesh CrackMesh::mirrored() const {
  std::vector<Vec3> v;
  v.reserve(vertices.size());
  for (const Vec3& p : vertices) v.push_back(mirror(p));
  // Reflection reverses handedness; swapping two indices keeps the normal equal to the mirrored normal.
  std::vector<Tri> t;
  t.reserve(triangles.size());
  for (const Tri& c : triangles) t.push_back({c[0], c[2], c[1]});
  CrackMesh m = from_cells(std::move(v), std::move(t), closed);
  for (std::size_t i = 0; i < m.normals.size(); ++i) m.normals[i] = mirror(normals[i]);
  return m;
}

void validate(const CrackMesh& mesh, const CrackMeshChecks& checks) {
  require(!mesh.triangles.empty(), ErrorKind::validation, "mesh has no triangles");
  require(mesh.normals.size() == mesh.triangles.size() && mesh.areas.size() == mesh.triangles.size(),
          ErrorKind::validation, "mesh normals/areas do not match the triangle count");
  const double scale = std::max(mesh.diameter(), 1e-300);
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const int id = static_cast<int>(i);
    require(mesh.areas[i] > 1e-14 * scale * scale, ErrorKind::validation, tri_label(id) + " is degenerate (zero area)");
    require(std::abs(mesh.normals[i].norm() - 1.0) < 1e-12, ErrorKind::validation, tri_label(id) + " normal is not unit length");
    if (checks.require_up && !mesh.closed)
      require(mesh.normals[i][2] > 0.0, ErrorKind::validation, "orientation: " + tri_label(id) + " normal has n.e3 <= 0");
  }
  if (checks.require_halfspace) {
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
      if (!(mesh.vertices[i][2] <= -checks.standoff)) {
        std::ostringstream os;
        os << "vertex " << i << " violates the half-space standoff x3 <= " << -checks.standoff;
        fail(ErrorKind::validation, os.str());
      }
    }
  }
  if (!mesh.closed)
    require(!mesh.boundary_edges().empty(), ErrorKind::validation, "open crack mesh has no boundary loop");
}

namespace {

CrackMesh unit_hemisphere(bool upper, int n_refine) {
  std::vector<Vec3> v = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, upper ? 1.0 : -1.0}};
  // outward-oriented for the upper cap
  std::vector<Tri> t = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  for (int level = 0; level < n_refine; ++level) {
    std::map<Edge, int> mid;
    auto midpoint = [&](int a, int b) {
      Edge key{std::min(a, b), std::max(a, b)};
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const Vec3 p = (v[key[0]] + v[key[1]]).normalized();
      v.push_back(p);
      const int idx = static_cast<int>(v.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<Tri> next;
    next.reserve(4 * t.size());
    for (const Tri& c : t) {
      const int ab = midpoint(c[0], c[1]), bc = midpoint(c[1], c[2]), ca = midpoint(c[2], c[0]);
      next.push_back({c[0], ab, ca});
      next.push_back({ab, c[1], bc});
      next.push_back({ca, bc, c[2]});
      next.push_back({ab, bc, ca});
    }
    t = std::move(next);
  }
  CrackMesh m = CrackMesh::from_cells(std::move(v), std::move(t));
  // Orient every cap so that n . e3 > 0: the lower cap gets inward normals.
  double avg = 0;
  for (const Vec3& n : m.normals) avg += n[2];
  if (avg < 0) {
    for (Tri& c : m.triangles) std::swap(c[1], c[2]);
    m = CrackMesh::from_cells(std::move(m.vertices), std::move(m.triangles));
  }
  return m;
}

}  // namespace

CrackMesh make_hemisphere(const Vec3& center, double radius, bool upper, int n_refine, double standoff) {
  require(radius > 0, ErrorKind::validation, "hemisphere radius must be positive");
  require(n_refine >= 0 && n_refine <= 8, ErrorKind::invalid_argument, "hemisphere refinement must be in [0, 8]");
  require(center[2] + radius < 0, ErrorKind::validation, "hemisphere leaves the lower half-space");
  CrackMesh unit = unit_hemisphere(upper, n_refine);
  for (Vec3& p : unit.vertices) p = center + radius * p;
  CrackMesh m = CrackMesh::from_cells(std::move(unit.vertices), std::move(unit.triangles));
  validate(m, {standoff, true, true});
  return m;
}

CrackMesh merge_meshes(const CrackMesh& a, const CrackMesh& b, bool closed) {
  std::vector<Vec3> v = a.vertices;
  std::map<std::array<double, 3>, int> index;
  for (std::size_t i = 0; i < v.size(); ++i) index[{v[i][0], v[i][1], v[i][2]}] = static_cast<int>(i);
  std::vector<int> remap(b.vertices.size());
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    const auto key = std::array<double, 3>{b.vertices[i][0], b.vertices[i][1], b.vertices[i][2]};
    auto it = index.find(key);
    if (it != index.end()) {
      remap[i] = it->second;
    } else {
      v.push_back(b.vertices[i]);
      remap[i] = static_cast<int>(v.size()) - 1;
      index.emplace(key, remap[i]);
    }
  }
  std::vector<Tri> t = a.triangles;
  for (const Tri& c : b.triangles) t.push_back({remap[c[0]], remap[c[1]], remap[c[2]]});
  return CrackMesh::from_cells(std::move(v), std::move(t), closed);
}

CrackMesh make_sphere(const Vec3& center, double radius, int n_refine, bool inward) {
  CrackMesh up = unit_hemisphere(true, n_refine);
  CrackMesh down = unit_hemisphere(false, n_refine);
  // Lower cap carries inward normals already; flip it to outward first.
  for (Tri& c : down.triangles) std::swap(c[1], c[2]);
  CrackMesh s = merge_meshes(up, down, true);
  for (Vec3& p : s.vertices) p = center + radius * p;
  if (inward)
    for (Tri& c : s.triangles) std::swap(c[1], c[2]);
  CrackMesh m = CrackMesh::from_cells(std::move(s.vertices), std::move(s.triangles), true);
  require(m.boundary_edges().empty(), ErrorKind::internal, "sphere mesh is not closed");
  return m;
}

CrackMesh make_revolution_surface(const std::vector<Vec2>& profile, int n_theta, double shift, double standoff) {
  require(profile.size() >= 2, ErrorKind::validation, "revolution profile needs at least two points");
  require(n_theta >= 8, ErrorKind::invalid_argument, "n_theta must be >= 8");
  for (const Vec2& p : profile) require(p.x() >= 0.0, ErrorKind::validation, "revolution profile has r < 0");
  for (std::size_t i = 0; i + 1 < profile.size(); ++i)
    require((profile[i + 1] - profile[i]).norm() > 0, ErrorKind::validation, "revolution profile has repeated points");
  for (std::size_t i = 0; i + 1 < profile.size(); ++i)
    for (std::size_t j = i + 2; j + 1 < profile.size(); ++j)
      if (segments_cross(profile[i], profile[i + 1], profile[j], profile[j + 1]))
        fail(ErrorKind::validation, "revolution profile is self-intersecting");

  std::vector<Vec3> v;
  std::vector<std::vector<int>> rings;
  for (const Vec2& p : profile) {
    std::vector<int> ring;
    if (p.x() == 0.0) {
      v.push_back({0.0, 0.0, p.y() - shift});
      ring.push_back(static_cast<int>(v.size()) - 1);
    } else {
      for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * kPi * j / n_theta;
        v.push_back({p.x() * std::cos(th), p.x() * std::sin(th), p.y() - shift});
        ring.push_back(static_cast<int>(v.size()) - 1);
      }
    }
    rings.push_back(std::move(ring));
  }
  std::vector<Tri> t;
  for (std::size_t i = 0; i + 1 < rings.size(); ++i) {
    const auto& a = rings[i];
    const auto& b = rings[i + 1];
    if (a.size() == 1 && b.size() == 1) fail(ErrorKind::validation, "revolution profile runs along the axis");
    for (int j = 0; j < n_theta; ++j) {
      const int jn = (j + 1) % n_theta;
      if (a.size() == 1) {
        t.push_back({a[0], b[j], b[jn]});
      } else if (b.size() == 1) {
        t.push_back({a[j], b[0], a[jn]});
      } else {
        t.push_back({a[j], b[j], b[jn]});
        t.push_back({a[j], b[jn], a[jn]});
      }
    }
  }
  CrackMesh m = CrackMesh::from_cells(std::move(v), std::move(t));
  double avg = 0;
  for (const Vec3& n : m.normals) avg += n[2];
  if (avg < 0) {
    for (Tri& c : m.triangles) std::swap(c[1], c[2]);
    m = CrackMesh::from_cells(std::move(m.vertices), std::move(m.triangles));
  }
  validate(m, {standoff, true, true});
  return m;
}

CrackMesh make_planar_crack(const Vec3& center, const Vec3& e1, const Vec3& e2, double a, double b, int n1, int n2,
                            double standoff) {
  require(std::abs(e1.norm() - 1) < 1e-12 && std::abs(e2.norm() - 1) < 1e-12 && std::abs(e1.dot(e2)) < 1e-12,
          ErrorKind::validation, "planar crack axes are not orthonormal");
  require(a > 0 && b > 0, ErrorKind::validation, "planar crack half-widths must be positive");
  require(n1 >= 1 && n2 >= 1, ErrorKind::invalid_argument, "planar crack needs at least one cell per axis");
  std::vector<Vec3> v;
  v.reserve((n1 + 1) * (n2 + 1));
  for (int j = 0; j <= n2; ++j) {
    const double t = -1.0 + 2.0 * j / n2;
    for (int i = 0; i <= n1; ++i) {
      const double s = -1.0 + 2.0 * i / n1;
      v.push_back(center + (s * a) * e1 + (t * b) * e2);
    }
  }
  auto id = [n1](int i, int j) { return j * (n1 + 1) + i; };
  std::vector<Tri> tris;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  CrackMesh m = CrackMesh::from_cells(std::move(v), std::move(tris));
  validate(m, {standoff, true, true});
  return m;
}

// --- Curve2D ------------------------------------------------------------------

Curve2D Curve2D::from_points(std::vector<Vec2> points) {
  require(points.size() >= 2, ErrorKind::validation, "curve needs at least two points");
  Curve2D c;
  c.points = std::move(points);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const Vec2 d = c.points[i + 1] - c.points[i];
    const double len = d.norm();
    c.lengths.push_back(len);
    c.normals.push_back(len > 0 ? Vec2(Vec2(-d.y(), d.x()) / len) : Vec2::Zero());
  }
  return c;
}

double Curve2D::diameter() const {
  double d = 0;
  for (const Vec2& p : points)
    for (const Vec2& q : points) d = std::max(d, (p - q).norm());
  return d;
}

double Curve2D::max_normal_tilt() const {
  double tilt = 0;
  for (const Vec2& n : normals) tilt = std::max(tilt, std::acos(std::clamp(n.y(), -1.0, 1.0)));
  return tilt;
}

void validate(const Curve2D& curve, double standoff) {
  for (std::size_t i = 0; i < curve.lengths.size(); ++i) {
    std::ostringstream os;
    os << "segment " << i;
    require(curve.lengths[i] > 0, ErrorKind::validation, os.str() + " is degenerate");
    require(std::abs(curve.normals[i].norm() - 1) < 1e-12, ErrorKind::validation, os.str() + " normal is not unit");
    require(curve.normals[i].y() > 0, ErrorKind::validation, "orientation: " + os.str() + " has n.e2 <= 0");
  }
  for (const Vec2& p : curve.points)
    require(p.y() <= -standoff, ErrorKind::validation, "curve point violates the half-plane standoff");
}

// --- Mesh2D -------------------------------------------------------------------

double Mesh2D::area(int tri) const {
  const Tri& t = triangles[tri];
  const Vec2 a = nodes[t[1]] - nodes[t[0]], b = nodes[t[2]] - nodes[t[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh2D::total_area() const {
  double s = 0;
  for (int i = 0; i < static_cast<int>(triangles.size()); ++i) s += area(i);
  return s;
}

double Mesh2D::min_angle(const std::function<bool(const Vec2&)>& where) const {
  double best = kPi;
  for (const Tri& t : triangles) {
    const Vec2 c = (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]) / 3.0;
    if (!where(c)) continue;
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = nodes[t[(k + 1) % 3]] - nodes[t[k]];
      const Vec2 w = nodes[t[(k + 2) % 3]] - nodes[t[k]];
      best = std::min(best, std::acos(std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0)));
    }
  }
  return best;
}

std::vector<int> Mesh2D::symmetry_nodes() const {
  std::vector<int> out;
  for (const TaggedEdge& e : boundary)
    if (e.tag == EdgeTag::symmetry) {
      out.push_back(e.nodes[0]);
      out.push_back(e.nodes[1]);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Mesh2D::tag_boundary(bool symmetry_on_axis) {
  std::map<Edge, int> count;
  for (const Tri& t : triangles)
    for (int e = 0; e < 3; ++e) {
      Edge k{t[e], t[(e + 1) % 3]};
      if (k[0] > k[1]) std::swap(k[0], k[1]);
      ++count[k];
    }
  boundary.clear();
  for (const auto& [e, c] : count) {
    if (c != 1) continue;
    const bool on_axis = nodes[e[0]].y() == 0.0 && nodes[e[1]].y() == 0.0;
    boundary.push_back({e, symmetry_on_axis && on_axis ? EdgeTag::symmetry : EdgeTag::free});
  }
}

void validate(const Mesh2D& mesh) {
  require(!mesh.triangles.empty(), ErrorKind::validation, "2D mesh has no triangles");
  const int nn = static_cast<int>(mesh.nodes.size());
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    for (int v : mesh.triangles[i]) require(v >= 0 && v < nn, ErrorKind::validation, tri_label(i) + " references a missing node");
    require(mesh.area(i) > 0, ErrorKind::validation, tri_label(i) + " has non-positive area");
  }
  for (const TaggedEdge& e : mesh.boundary)
    if (e.tag == EdgeTag::symmetry)
      require(mesh.nodes[e.nodes[0]].y() == 0.0 && mesh.nodes[e.nodes[1]].y() == 0.0, ErrorKind::validation,
              "symmetry edge off the line x2 = 0");
  if (mesh.radial_weight)
    for (const Vec2& p : mesh.nodes) require(p.x() >= 0.0, ErrorKind::validation, "radial mesh has a node with r < 0");
}

void CuspDomainSpec::validate() const {
  require(a > 0 && a <= 1, ErrorKind::validation, "cusp flattening a must satisfy 0 < a <= 1");
  require(grading_layers >= 0 && grading_layers <= 40, ErrorKind::validation, "grading layers out of range");
}

namespace {

// Column abscissae from x_lo to x_hi: spacing ~h, shrinking geometrically toward graded ends.
std::vector<double> column_positions(const ColumnDomain& d, double h) {
  auto graded = [&](void) {
    std::vector<double> offs;  // distances from the end
    double ds = h * std::pow(kGradingRatio, d.grading_layers);
    double s = 0;
    while (ds < h) {
      s += ds;
      offs.push_back(s);
      ds /= kGradingRatio;
    }
    return offs;
  };
  const double len = d.x_hi - d.x_lo;
  std::vector<double> lo_offs = d.grade_lo ? graded() : std::vector<double>{};
  std::vector<double> hi_offs = d.grade_hi ? graded() : std::vector<double>{};
  const double lo_end = lo_offs.empty() ? 0.0 : lo_offs.back();
  const double hi_end = hi_offs.empty() ? 0.0 : hi_offs.back();
  const double mid = len - lo_end - hi_end;
  require(mid > 2 * h, ErrorKind::validation, "mesh size too large to resolve the domain");
  const int nmid = std::max(2, static_cast<int>(std::ceil(mid / h)));
  std::vector<double> xs{d.x_lo};
  for (double o : lo_offs) xs.push_back(d.x_lo + o);
  for (int i = 1; i < nmid; ++i) xs.push_back(d.x_lo + lo_end + mid * i / nmid);
  for (auto it = hi_offs.rbegin(); it != hi_offs.rend(); ++it) xs.push_back(d.x_hi - *it);
  xs.push_back(d.x_hi);
  return xs;
}

}  // namespace

Mesh2D make_column_mesh(const ColumnDomain& d, double h) {
  require(h > 0, ErrorKind::validation, "mesh size must be positive");
  require(d.x_hi > d.x_lo, ErrorKind::validation, "empty column domain");
  require(static_cast<bool>(d.height), ErrorKind::invalid_argument, "column domain needs a height function");
  auto ref = d.reference_height ? d.reference_height : d.height;
  const std::vector<double> xs = column_positions(d, h);

  Mesh2D m;
  m.radial_weight = d.radial_weight;
  std::vector<std::vector<int>> cols;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    double top = d.height(x);
    require(top >= 0 && std::isfinite(top), ErrorKind::validation, "column height must be finite and >= 0");
    if (i == 0 || i + 1 == xs.size()) top = std::max(top, 0.0);
    const double dx = std::min(i > 0 ? x - xs[i - 1] : h, i + 1 < xs.size() ? xs[i + 1] - x : h);
    const double hy = std::min(h, std::max(dx, h / 8));
    int layers = top > 0 ? std::max(1, static_cast<int>(std::ceil(ref(x) / hy - 1e-9))) : 0;
    std::vector<int> col;
    const int jlo = d.half ? 0 : -layers;
    for (int j = jlo; j <= layers; ++j) {
      const double y = layers == 0 ? 0.0 : top * j / layers;
      m.nodes.push_back({x, y});
      col.push_back(static_cast<int>(m.nodes.size()) - 1);
    }
    m.top_nodes.push_back(col.back());
    cols.push_back(std::move(col));
  }
  // Zip neighbouring columns together by normalized height.
  for (std::size_t i = 0; i + 1 < cols.size(); ++i) {
    const auto& a = cols[i];
    const auto& b = cols[i + 1];
    const int p = static_cast<int>(a.size()) - 1, q = static_cast<int>(b.size()) - 1;
    auto frac = [](int j, int n) { return n == 0 ? 0.5 : static_cast<double>(j) / n; };
    int ia = 0, ib = 0;
    while (ia < p || ib < q) {
      const bool advance_b = ia == p || (ib < q && frac(ib + 1, q) <= frac(ia + 1, p));
      if (advance_b) {
        m.triangles.push_back({a[ia], b[ib], b[ib + 1]});
        ++ib;
      } else {
        m.triangles.push_back({a[ia], b[ib], a[ia + 1]});
        ++ia;
      }
    }
  }
  m.tag_boundary(d.half);
  validate(m);
  return m;
}

Mesh2D make_cusp_mesh(const CuspDomainSpec& spec, double h) {
  spec.validate();
  require(h > 0 && h <= 0.25, ErrorKind::validation, "mesh size h must be in (0, 0.25] to resolve the cusp domain");
  ColumnDomain d;
  const double a = spec.a;
  d.height = [a](double x) { return a * cusp_profile(x); };
  d.reference_height = [](double x) { return cusp_profile(x); };
  d.half = spec.half;
  d.grading_layers = spec.grading_layers;
  if (spec.axisymmetric) {
    d.x_lo = 0.0;
    d.x_hi = 1.0;
    d.grade_hi = true;
    d.radial_weight = true;
  } else {
    d.x_lo = -1.0;
    d.x_hi = 1.0;
    d.grade_lo = d.grade_hi = true;
  }
  return make_column_mesh(d, h);
}

Mesh2D make_rectangle_mesh(double x0, double x1, double y0, double y1, int nx, int ny, bool symmetry_bottom) {
  require(nx >= 1 && ny >= 1 && x1 > x0 && y1 > y0, ErrorKind::validation, "invalid rectangle mesh");
  require(!symmetry_bottom || y0 == 0.0, ErrorKind::validation, "symmetry side must lie on x2 = 0");
  Mesh2D m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.push_back({x0 + (x1 - x0) * i / nx, j == 0 ? y0 : y0 + (y1 - y0) * j / ny});
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.tag_boundary(symmetry_bottom);
  validate(m);
  return m;
}

}  // namespace crackwave
