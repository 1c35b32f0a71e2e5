#include "layer_potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace crackwave {

void validate(const DensityField& g, std::size_t vertex_count) {
  require(g.values.size() == vertex_count, ErrorKind::invalid_argument, "density length does not match the vertex count");
  for (const cplx& v : g.values)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::invalid_argument, "density has non-finite values");
}

double max_abs_on(const DensityField& g, const std::vector<int>& vertices) {
  double m = 0;
  for (int v : vertices) m = std::max(m, std::abs(g.values.at(v)));
  return m;
}

void QuadratureConfig::validate() const {
  require(order == 1 || order == 3 || order == 6 || order == 12, ErrorKind::invalid_argument,
          "quadrature order must be 1, 3, 6 or 12 points");
  require(near_threshold >= 1.0, ErrorKind::invalid_argument, "near-field threshold must be >= 1");
  require(max_depth >= 0 && max_depth <= 8, ErrorKind::invalid_argument, "subdivision depth must be in [0, 8]");
  require(line_order >= 1 && line_order <= 64, ErrorKind::invalid_argument, "line order must be in [1, 64]");
}

// --- Kernels ------------------------------------------------------------------

namespace {

template <class V>
cplx dl_value(const RadialKernel& g, const V& d, double r, const V& n) {
  return -g.dg * (d.dot(n) / r);
}

template <class V, class CV>
CV dl_grad(const RadialKernel& g, const V& d, double r, const V& n) {
  // D = -F(R) (d.n), F = G'/R; grad_x D = -F'(R) (d.n) d/R - F n
  const cplx f = g.dg / r;
  const cplx fp = g.d2g / r - g.dg / (r * r);
  const double dn = d.dot(n);
  return (-fp * dn / r) * d.template cast<cplx>() - f * n.template cast<cplx>();
}

}  // namespace

cplx double_layer_kernel_3d(double k, const Vec3& x, const Vec3& y, const Vec3& n, KernelKind kind) {
  const Vec3 d = x - y;
  const double r = d.norm();
  require(r > 0, ErrorKind::domain, "double-layer kernel at a coincident point");
  cplx v = dl_value(radial_kernel_3d(k, r), d, r, n);
  if (kind == KernelKind::halfspace) {
    const Vec3 di = x - mirror(y);
    const double ri = di.norm();
    require(ri > 0, ErrorKind::domain, "double-layer kernel at the image point");
    v += dl_value(radial_kernel_3d(k, ri), di, ri, mirror(n));
  }
  return v;
}

CVec3 double_layer_kernel_grad_3d(double k, const Vec3& x, const Vec3& y, const Vec3& n, KernelKind kind) {
  const Vec3 d = x - y;
  const double r = d.norm();
  require(r > 0, ErrorKind::domain, "double-layer kernel at a coincident point");
  CVec3 v = dl_grad<Vec3, CVec3>(radial_kernel_3d(k, r), d, r, n);
  if (kind == KernelKind::halfspace) {
    const Vec3 di = x - mirror(y);
    const double ri = di.norm();
    require(ri > 0, ErrorKind::domain, "double-layer kernel at the image point");
    v += dl_grad<Vec3, CVec3>(radial_kernel_3d(k, ri), di, ri, mirror(n));
  }
  return v;
}

// --- Distances -----------------------------------------------------------------

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point on triangle by Voronoi-region tests.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return ap.norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

double distance_to_mesh(const CrackMesh& mesh, const Vec3& p) {
  double d = std::numeric_limits<double>::infinity();
  for (const Tri& t : mesh.triangles)
    d = std::min(d, point_triangle_distance(p, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]));
  return d;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

}  // namespace

double distance_to_curve(const Curve2D& curve, const Vec2& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i)
    d = std::min(d, point_segment_distance(p, curve.points[i], curve.points[i + 1]));
  return d;
}

// --- 3D integration --------------------------------------------------------------

namespace {

using Bary = std::array<double, 3>;

struct CellInfo {
  Vec3 centroid;
  double radius;  // max distance from centroid to a corner
  double diam;
};

std::vector<CellInfo> cell_info(const CrackMesh& mesh) {
  std::vector<CellInfo> out(mesh.triangles.size());
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Tri& t = mesh.triangles[i];
    const Vec3 c = mesh.centroid(static_cast<int>(i));
    double r = 0, d = 0;
    for (int k = 0; k < 3; ++k) {
      r = std::max(r, (mesh.vertices[t[k]] - c).norm());
      d = std::max(d, (mesh.vertices[t[k]] - mesh.vertices[t[(k + 1) % 3]]).norm());
    }
    out[i] = {c, r, d};
  }
  return out;
}

// Visits quadrature points (parent barycentrics, position, weight) of one cell, subdividing
// recursively while the target point is near.
template <class Sink>
void integrate_cell(const Vec3& x, const std::array<Vec3, 3>& V, double area, const std::array<Bary, 3>& B, double frac,
                    int depth, const QuadratureConfig& q, double min_dist, Sink& sink) {
  std::array<Vec3, 3> P;
  for (int k = 0; k < 3; ++k) P[k] = B[k][0] * V[0] + B[k][1] * V[1] + B[k][2] * V[2];
  const double diam = std::max({(P[0] - P[1]).norm(), (P[1] - P[2]).norm(), (P[2] - P[0]).norm()});
  const Vec3 c = (P[0] + P[1] + P[2]) / 3.0;
  double rad = 0;
  for (const Vec3& p : P) rad = std::max(rad, (p - c).norm());
  bool near = (x - c).norm() - rad < q.near_threshold * diam;
  if (near) {
    const double dist = point_triangle_distance(x, P[0], P[1], P[2]);
    if (dist < min_dist) {
      std::ostringstream os;
      os << "observation point (" << x[0] << ", " << x[1] << ", " << x[2] << ") lies on the surface";
      fail(ErrorKind::precision, os.str());
    }
    near = dist < q.near_threshold * diam;
  }
  if (near && depth < q.max_depth) {
    Bary m01, m12, m20;
    for (int i = 0; i < 3; ++i) {
      m01[i] = 0.5 * (B[0][i] + B[1][i]);
      m12[i] = 0.5 * (B[1][i] + B[2][i]);
      m20[i] = 0.5 * (B[2][i] + B[0][i]);
    }
    const double f = 0.25 * frac;
    integrate_cell(x, V, area, {B[0], m01, m20}, f, depth + 1, q, min_dist, sink);
    integrate_cell(x, V, area, {m01, B[1], m12}, f, depth + 1, q, min_dist, sink);
    integrate_cell(x, V, area, {m20, m12, B[2]}, f, depth + 1, q, min_dist, sink);
    integrate_cell(x, V, area, {m01, m12, m20}, f, depth + 1, q, min_dist, sink);
    return;
  }
  for (const TriPoint& tp : triangle_rule(q.order)) {
    Bary lam;
    for (int i = 0; i < 3; ++i) lam[i] = tp.bary[0] * B[0][i] + tp.bary[1] * B[1][i] + tp.bary[2] * B[2][i];
    const Vec3 y = lam[0] * V[0] + lam[1] * V[1] + lam[2] * V[2];
    sink(lam, y, tp.weight * area * frac);
  }
}

template <class CellSink>
void integrate_mesh(const CrackMesh& mesh, const std::vector<CellInfo>& info, const Vec3& x, const QuadratureConfig& q,
                    CellSink&& make_sink) {
  const double min_dist = 1e-8 * mesh.diameter();
  static const std::array<Bary, 3> kRoot = {Bary{1, 0, 0}, Bary{0, 1, 0}, Bary{0, 0, 1}};
  const auto& rule = triangle_rule(q.order);
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Tri& t = mesh.triangles[i];
    const std::array<Vec3, 3> V = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    auto sink = make_sink(static_cast<int>(i));
    const CellInfo& ci = info[i];
    if ((x - ci.centroid).norm() - ci.radius >= q.near_threshold * ci.diam) {
      for (const TriPoint& tp : rule) {
        const Vec3 y = tp.bary[0] * V[0] + tp.bary[1] * V[1] + tp.bary[2] * V[2];
        sink(tp.bary, y, tp.weight * mesh.areas[i]);
      }
    } else {
      integrate_cell(x, V, mesh.areas[i], kRoot, 1.0, 0, q, min_dist, sink);
    }
  }
}

FieldSamples eval_3d(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx, const std::vector<Vec3>& pts,
                     const QuadratureConfig& q, KernelKind kind, bool gradients) {
  ctx.validate();
  q.validate();
  validate(g, mesh.vertices.size());
  for (const Vec3& p : pts)
    require(kind == KernelKind::free_space || p[2] <= 0.0, ErrorKind::invalid_argument,
            "observation points must satisfy x3 <= 0");
  const double k = ctx.k();
  const auto info = cell_info(mesh);
  FieldSamples out;
  out.points = pts;
  out.values.assign(pts.size(), cplx(0));
  if (gradients) out.gradients.assign(pts.size(), CVec3::Zero());
  parallel_for(pts.size(), [&](std::size_t ip) {
    const Vec3& x = pts[ip];
    cplx u = 0;
    CVec3 du = CVec3::Zero();
    integrate_mesh(mesh, info, x, q, [&](int cell) {
      const Tri& t = mesh.triangles[cell];
      const Vec3& n = mesh.normals[cell];
      return [&, t, n](const Bary& lam, const Vec3& y, double w) {
        const cplx gy = lam[0] * g.values[t[0]] + lam[1] * g.values[t[1]] + lam[2] * g.values[t[2]];
        if (gy == cplx(0)) return;
        u += w * gy * double_layer_kernel_3d(k, x, y, n, kind);
        if (gradients) du += (w * gy) * double_layer_kernel_grad_3d(k, x, y, n, kind);
      };
    });
    out.values[ip] = u;
    if (gradients) out.gradients[ip] = du;
  });
  return out;
}

}  // namespace

FieldSamples eval_double_layer_3d(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                  const std::vector<Vec3>& pts, const QuadratureConfig& q, KernelKind kind) {
  return eval_3d(mesh, g, ctx, pts, q, kind, false);
}

FieldSamples eval_double_layer_grad_3d(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                       const std::vector<Vec3>& pts, const QuadratureConfig& q, KernelKind kind) {
  return eval_3d(mesh, g, ctx, pts, q, kind, true);
}

Eigen::MatrixXcd double_layer_matrix_3d(const CrackMesh& mesh, const WaveContext& ctx, const std::vector<Vec3>& pts,
                                        const QuadratureConfig& q, KernelKind kind) {
  ctx.validate();
  q.validate();
  const double k = ctx.k();
  const auto info = cell_info(mesh);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pts.size()),
                                              static_cast<Eigen::Index>(mesh.vertices.size()));
  parallel_for(pts.size(), [&](std::size_t ip) {
    const Vec3& x = pts[ip];
    const auto row = static_cast<Eigen::Index>(ip);
    integrate_mesh(mesh, info, x, q, [&](int cell) {
      const Tri& t = mesh.triangles[cell];
      const Vec3& n = mesh.normals[cell];
      return [&, t, n](const Bary& lam, const Vec3& y, double w) {
        const cplx kv = w * double_layer_kernel_3d(k, x, y, n, kind);
        for (int i = 0; i < 3; ++i) A(row, t[i]) += lam[i] * kv;
      };
    });
  });
  return A;
}

// --- 2D ------------------------------------------------------------------------------

namespace {

struct Kernel2D {
  cplx value;
  CVec2 grad;
};

Kernel2D dl_kernel_2d(double k, const Vec2& x, const Vec2& y, const Vec2& n, KernelKind kind, bool gradients) {
  Kernel2D out{0, CVec2::Zero()};
  auto add = [&](const Vec2& src, const Vec2& nn) {
    const Vec2 d = x - src;
    const double r = d.norm();
    require(r > 0, ErrorKind::domain, "2D double-layer kernel at a coincident point");
    const RadialKernel g = radial_kernel_2d(k, r);
    out.value += dl_value(g, d, r, nn);
    if (gradients) out.grad += dl_grad<Vec2, CVec2>(g, d, r, nn);
  };
  add(y, n);
  if (kind == KernelKind::halfspace) add(mirror(y), mirror(n));
  return out;
}

template <class Sink>
void integrate_segment(const Vec2& x, const Vec2& a, const Vec2& b, double s0, double s1, int depth,
                       const QuadratureConfig& q, const std::vector<LinePoint>& rule, double min_dist, Sink& sink) {
  const Vec2 pa = a + s0 * (b - a), pb = a + s1 * (b - a);
  const double len = (pb - pa).norm();
  const double dist = point_segment_distance(x, pa, pb);
  if (dist < min_dist) fail(ErrorKind::precision, "observation point lies on the curve");
  if (dist < q.near_threshold * len && depth < q.max_depth) {
    const double sm = 0.5 * (s0 + s1);
    integrate_segment(x, a, b, s0, sm, depth + 1, q, rule, min_dist, sink);
    integrate_segment(x, a, b, sm, s1, depth + 1, q, rule, min_dist, sink);
    return;
  }
  for (const LinePoint& lp : rule) {
    const double s = s0 + (s1 - s0) * lp.s;
    sink(s, Vec2(a + s * (b - a)), lp.weight * len);
  }
}

}  // namespace

FieldSamples eval_double_layer_2d(const Curve2D& curve, const DensityField& g, const WaveContext& ctx,
                                  const std::vector<Vec2>& pts, const QuadratureConfig& q, bool gradients,
                                  KernelKind kind) {
  ctx.validate();
  q.validate();
  validate(g, curve.points.size());
  for (const Vec2& p : pts)
    require(kind == KernelKind::free_space || p.y() <= 0.0, ErrorKind::invalid_argument,
            "observation points must satisfy x2 <= 0");
  const double k = ctx.k();
  const auto rule = gauss_legendre(q.line_order);
  const double min_dist = 1e-8 * curve.diameter();
  FieldSamples out;
  out.points.reserve(pts.size());
  for (const Vec2& p : pts) out.points.push_back({p.x(), p.y(), 0.0});
  out.values.assign(pts.size(), cplx(0));
  if (gradients) out.gradients.assign(pts.size(), CVec3::Zero());
  parallel_for(pts.size(), [&](std::size_t ip) {
    const Vec2& x = pts[ip];
    cplx u = 0;
    CVec2 du = CVec2::Zero();
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
      const Vec2& a = curve.points[i];
      const Vec2& b = curve.points[i + 1];
      const Vec2& n = curve.normals[i];
      const cplx g0 = g.values[i], g1 = g.values[i + 1];
      if (g0 == cplx(0) && g1 == cplx(0)) continue;
      auto sink = [&](double s, const Vec2& y, double w) {
        const cplx gy = (1.0 - s) * g0 + s * g1;
        const Kernel2D kv = dl_kernel_2d(k, x, y, n, kind, gradients);
        u += w * gy * kv.value;
        if (gradients) du += (w * gy) * kv.grad;
      };
      integrate_segment(x, a, b, 0.0, 1.0, 0, q, rule, min_dist, sink);
    }
    out.values[ip] = u;
    if (gradients) out.gradients[ip] = CVec3(du[0], du[1], 0.0);
  });
  return out;
}

// --- Probes ----------------------------------------------------------------------------

std::pair<cplx, double> extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& f) {
  require(eps.size() == f.size() && !eps.empty(), ErrorKind::invalid_argument, "extrapolation needs matching samples");
  const std::size_t n = eps.size();
  std::vector<std::vector<cplx>> T(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i) {
    T[i][0] = f[i];
    for (std::size_t j = 1; j <= i; ++j)
      T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) * (eps[i] / (eps[i - j] - eps[i]));
  }
  const cplx best = T[n - 1][n - 1];
  const double err = n > 1 ? std::abs(best - T[n - 2][n - 2]) : std::abs(best);
  return {best, err};
}

namespace {

void check_eps(const std::vector<double>& eps) {
  require(eps.size() >= 2, ErrorKind::invalid_argument, "probe needs at least two epsilons");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0, ErrorKind::invalid_argument, "probe epsilons must be positive");
    if (i > 0) require(eps[i] < eps[i - 1], ErrorKind::invalid_argument, "probe epsilons must decrease");
  }
}

std::vector<Vec3> two_sided_points(const Vec3& x, const Vec3& n, const std::vector<double>& eps) {
  std::vector<Vec3> pts;
  for (double e : eps) {
    pts.push_back(x + e * n);
    pts.push_back(x - e * n);
  }
  return pts;
}

}  // namespace

JumpEstimate jump_probe(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx, const Vec3& surface_point,
                        const Vec3& n, const std::vector<double>& eps_list, const QuadratureConfig& q) {
  check_eps(eps_list);
  const FieldSamples s = eval_double_layer_3d(mesh, g, ctx, two_sided_points(surface_point, n, eps_list), q);
  JumpEstimate out;
  for (std::size_t i = 0; i < eps_list.size(); ++i) out.samples.push_back(s.values[2 * i] - s.values[2 * i + 1]);
  auto [v, err] = extrapolate_to_zero(eps_list, out.samples);
  out.value = v;
  out.error_estimate = err;
  double scale = 0;
  for (const cplx& c : out.samples) scale = std::max(scale, std::abs(c));
  out.converged = err <= 1e-2 * std::max(scale, 1e-300);
  return out;
}

NormalDerivativeJump normal_derivative_jump_probe(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                                  const Vec3& surface_point, const Vec3& n,
                                                  const std::vector<double>& eps_list, const QuadratureConfig& q) {
  check_eps(eps_list);
  const FieldSamples s = eval_double_layer_grad_3d(mesh, g, ctx, two_sided_points(surface_point, n, eps_list), q);
  NormalDerivativeJump out;
  const CVec3 nc = n.cast<cplx>();
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const cplx plus = s.gradients[2 * i].transpose() * nc;
    const cplx minus = s.gradients[2 * i + 1].transpose() * nc;
    out.jump.samples.push_back(plus - minus);
    out.gradient_scale = std::max({out.gradient_scale, s.gradients[2 * i].norm(), s.gradients[2 * i + 1].norm()});
  }
  auto [v, err] = extrapolate_to_zero(eps_list, out.jump.samples);
  out.jump.value = v;
  out.jump.error_estimate = err;
  out.jump.converged = err <= 1e-2 * std::max(out.gradient_scale, 1e-300);
  return out;
}

cplx helmholtz_residual(const Field3& u, const WaveContext& ctx, const Vec3& pt, double h, const CrackMesh* avoid) {
  require(h > 0, ErrorKind::invalid_argument, "stencil step must be positive");
  require(pt[2] + h <= 0, ErrorKind::precision, "stencil leaves the lower half-space");
  if (avoid) require(distance_to_mesh(*avoid, pt) > 2 * h, ErrorKind::precision, "stencil collides with the crack");
  const cplx c = u(pt);
  cplx lap = -6.0 * c;
  for (int d = 0; d < 3; ++d) {
    Vec3 e = Vec3::Zero();
    e[d] = h;
    lap += u(pt + e) + u(pt - e);
  }
  const double k = ctx.k();
  return lap / (h * h) + k * k * c;
}

cplx helmholtz_residual(const Field2& u, const WaveContext& ctx, const Vec2& pt, double h, const Curve2D* avoid) {
  require(h > 0, ErrorKind::invalid_argument, "stencil step must be positive");
  require(pt.y() + h <= 0, ErrorKind::precision, "stencil leaves the lower half-plane");
  if (avoid) require(distance_to_curve(*avoid, pt) > 2 * h, ErrorKind::precision, "stencil collides with the crack");
  const cplx c = u(pt);
  const cplx lap = u(pt + Vec2(h, 0)) + u(pt - Vec2(h, 0)) + u(pt + Vec2(0, h)) + u(pt - Vec2(0, h)) - 4.0 * c;
  const double k = ctx.k();
  return lap / (h * h) + k * k * c;
}

}  // namespace crackwave
