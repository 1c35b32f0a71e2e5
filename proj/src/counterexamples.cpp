#include "counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"

namespace crackwave {

namespace {

constexpr double kDepth = 2.0;

}  // namespace

double CounterexampleInstance::eigenfunction(const Vec3& x) const {
  if (tag == "sphere") {
    const Vec3 p = (x - Vec3(0, 0, -kDepth * scale)) / scale;
    return p.norm() < 1.0 ? psi_ball(p, first_dj1_zero()) : 0.0;
  }
  require(eigen.has_value(), ErrorKind::internal, "instance has no eigenpair");
  std::optional<double> v;
  if (tag == "cusp2d")
    v = interpolate(*eigen, Vec2(x[0], x[1] + kDepth));
  else
    v = interpolate(*eigen, Vec2(std::hypot(x[0], x[1]), x[2] + kDepth));
  return v.value_or(0.0);
}

CounterexampleInstance CounterexampleInstance::swapped() const {
  CounterexampleInstance s = *this;
  std::swap(s.crack1, s.crack2);
  std::swap(s.curve1, s.curve2);
  std::swap(s.g1, s.g2);
  s.orientation = -orientation;
  return s;
}

CounterexampleInstance build_sphere_instance(std::optional<double> target_k, int n_refine) {
  const double k1 = first_dj1_zero();
  const double k = target_k.value_or(k1);
  require(k > 0 && std::isfinite(k), ErrorKind::invalid_argument, "target wavenumber must be positive");
  const double s = k1 / k;
  const Vec3 c(0, 0, -kDepth * s);
  CounterexampleInstance inst;
  inst.tag = "sphere";
  inst.dim = 3;
  inst.scale = s;
  inst.refinement = n_refine;
  inst.ctx = {k, 1.0};
  inst.crack1 = make_hemisphere(c, s, true, n_refine, 0.5 * s);
  inst.crack2 = make_hemisphere(c, s, false, n_refine, 0.5 * s);
  for (const Vec3& v : inst.crack1.vertices) inst.g1.values.push_back(psi_ball((v - c) / s, k1));
  for (const Vec3& v : inst.crack2.vertices) inst.g2.values.push_back(psi_ball((v - c) / s, k1));
  return inst;
}

CounterexampleInstance build_cusp2d_instance(double a, double h) {
  CuspDomainSpec spec;
  spec.a = a;
  spec.validate();
  CounterexampleInstance inst;
  inst.tag = "cusp2d";
  inst.dim = 2;
  inst.a = a;
  inst.eigen = cusp_eigenpair(spec, h);
  inst.h = h / 4;
  const EigenPair& e = *inst.eigen;
  std::vector<Vec2> up, lo;
  for (int i : e.mesh.top_nodes) {
    const Vec2& p = e.mesh.nodes[i];
    up.push_back({p.x(), p.y() - kDepth});
    lo.push_back({p.x(), -p.y() - kDepth});
    inst.g1.values.push_back(e.phi[i]);
    inst.g2.values.push_back(-e.phi[i]);
  }
  inst.curve1 = Curve2D::from_points(std::move(up));
  inst.curve2 = Curve2D::from_points(std::move(lo));
  validate(inst.curve1);
  validate(inst.curve2);
  inst.ctx = {e.mu(), 1.0};
  return inst;
}

CounterexampleInstance build_axisym_instance(double h, int n_theta) {
  CuspDomainSpec spec;
  spec.axisymmetric = true;
  CounterexampleInstance inst;
  inst.tag = "axisym";
  inst.dim = 3;
  inst.eigen = cusp_eigenpair(spec, h);
  inst.h = h / 4;
  const EigenPair& e = *inst.eigen;
  std::vector<Vec2> up, lo;
  std::vector<double> trace;
  for (int i : e.mesh.top_nodes) {
    const Vec2& p = e.mesh.nodes[i];
    up.push_back(p);
    lo.push_back({p.x(), -p.y()});
    trace.push_back(e.phi[i]);
  }
  inst.crack1 = make_revolution_surface(up, n_theta, kDepth);
  inst.crack2 = make_revolution_surface(lo, n_theta, kDepth);
  // Vertices come ring by ring in profile order: one pole vertex for r = 0, else n_theta.
  auto densities = [&](double sign) {
    DensityField g;
    for (std::size_t i = 0; i < up.size(); ++i) {
      const int count = up[i].x() == 0.0 ? 1 : n_theta;
      for (int j = 0; j < count; ++j) g.values.push_back(sign * trace[i]);
    }
    return g;
  };
  inst.g1 = densities(1.0);
  inst.g2 = densities(-1.0);
  require(inst.g1.values.size() == inst.crack1.vertices.size() && inst.g2.values.size() == inst.crack2.vertices.size(),
          ErrorKind::internal, "axisymmetric density does not match the surface");
  inst.ctx = {e.mu(), 1.0};
  return inst;
}

std::vector<Vec3> top_plane_points(const CounterexampleInstance& inst, const ObservationGrid& grid) {
  require(grid.n >= 2 && grid.half_width > 0, ErrorKind::invalid_argument, "observation grid needs n >= 2 and positive extent");
  const double w = grid.half_width * inst.scale;
  std::vector<Vec3> pts;
  for (int i = 0; i < grid.n; ++i) {
    const double x = -w + 2.0 * w * i / (grid.n - 1);
    if (inst.dim == 2) {
      pts.push_back({x, 0.0, 0.0});
      continue;
    }
    for (int j = 0; j < grid.n; ++j) pts.push_back({x, -w + 2.0 * w * j / (grid.n - 1), 0.0});
  }
  return pts;
}

namespace {

FieldSamples field(const CounterexampleInstance& inst, bool first, const std::vector<Vec3>& pts,
                   const QuadratureConfig& q, bool gradients) {
  if (inst.dim == 2) {
    std::vector<Vec2> p2;
    for (const Vec3& p : pts) p2.push_back({p[0], p[1]});
    return eval_double_layer_2d(first ? inst.curve1 : inst.curve2, first ? inst.g1 : inst.g2, inst.ctx, p2, q, gradients);
  }
  const CrackMesh& m = first ? inst.crack1 : inst.crack2;
  const DensityField& g = first ? inst.g1 : inst.g2;
  return gradients ? eval_double_layer_grad_3d(m, g, inst.ctx, pts, q) : eval_double_layer_3d(m, g, inst.ctx, pts, q);
}

// Points inside and outside the enclosed region, away from both cracks.
void probe_points(const CounterexampleInstance& inst, std::vector<Vec3>& inside, std::vector<Vec3>& outside) {
  if (inst.tag == "sphere") {
    const double s = inst.scale;
    const Vec3 c(0, 0, -kDepth * s);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    while (inside.size() < 50) {
      const Vec3 p(U(rng), U(rng), U(rng));
      if (p.norm() < 0.8) inside.push_back(c + s * p);
    }
    while (outside.size() < 50) {
      const Vec3 p(1.9 * U(rng), 1.9 * U(rng), 1.9 * U(rng));
      if (p.norm() > 1.25 && p.norm() < 1.9) outside.push_back(c + s * p);
    }
    return;
  }
  const double a = inst.dim == 2 ? inst.a : 1.0;
  for (int i = 0; i <= 8; ++i) {
    const double x = inst.dim == 2 ? -0.6 + 1.2 * i / 8 : 0.05 + 0.55 * i / 8;
    const double f = a * cusp_profile(x);
    for (int j = -3; j <= 3; ++j) {
      const double y = 0.6 * f * j / 3.0 - kDepth;
      inside.push_back(inst.dim == 2 ? Vec3(x, y, 0) : Vec3(x * std::cos(0.7 * i), x * std::sin(0.7 * i), y));
    }
  }
  for (int i = 0; i < 20; ++i) {
    const double x = inst.dim == 2 ? -1.4 + 2.8 * i / 19 : 1.4 * i / 19;
    const double f = std::abs(x) < 1 ? a * cusp_profile(x) : 0.0;
    for (double sgn : {1.0, -1.0}) {
      const double y = sgn * (f + 0.25) - kDepth;
      outside.push_back(inst.dim == 2 ? Vec3(x, y, 0) : Vec3(x * std::cos(0.3 * i), x * std::sin(0.3 * i), y));
    }
  }
}

}  // namespace

TopFields top_fields(const CounterexampleInstance& inst, const ObservationGrid& grid, const QuadratureConfig& q) {
  const std::vector<Vec3> pts = top_plane_points(inst, grid);
  return {field(inst, true, pts, q, true), field(inst, false, pts, q, true)};
}

GapReport cauchy_gap(const CounterexampleInstance& inst, const ObservationGrid& grid, const QuadratureConfig& q) {
  return cauchy_gap(inst, top_fields(inst, grid, q), q);
}

GapReport cauchy_gap(const CounterexampleInstance& inst, const TopFields& top, const QuadratureConfig& q) {
  const FieldSamples& u1 = top.u1;
  const FieldSamples& u2 = top.u2;
  const std::vector<Vec3>& pts = u1.points;
  require(u2.points.size() == pts.size() && u1.has_gradients() && u2.has_gradients(), ErrorKind::invalid_argument,
          "top fields need matching points and gradients");
  GapReport r;
  r.instance = inst.tag;
  r.refinement = inst.refinement;
  r.h = inst.h;
  double du = 0, su = 0, dg = 0, sg = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    du = std::max(du, std::abs(u1.values[i] - u2.values[i]));
    su = std::max({su, std::abs(u1.values[i]), std::abs(u2.values[i])});
    // tangential part only; the normal derivative vanishes on the plane
    const int nt = inst.dim == 2 ? 1 : 2;
    double d2 = 0, a2 = 0, b2 = 0;
    for (int c = 0; c < nt; ++c) {
      d2 += std::norm(u1.gradients[i][c] - u2.gradients[i][c]);
      a2 += std::norm(u1.gradients[i][c]);
      b2 += std::norm(u2.gradients[i][c]);
    }
    dg = std::max(dg, std::sqrt(d2));
    sg = std::max({sg, std::sqrt(a2), std::sqrt(b2)});
  }
  double gmax = 0;
  for (const cplx& v : inst.g1.values) gmax = std::max(gmax, std::abs(v));
  r.sup_u = su;
  r.degenerate = !(su > 1e-14 * gmax) || !(sg > 0);
  r.rel_gap_u = r.degenerate ? 0.0 : du / su;
  r.rel_gap_grad = r.degenerate ? 0.0 : dg / sg;

  std::vector<Vec3> inside, outside;
  probe_points(inst, inside, outside);
  const FieldSamples i1 = field(inst, true, inside, q, false), i2 = field(inst, false, inside, q, false);
  const FieldSamples o1 = field(inst, true, outside, q, false), o2 = field(inst, false, outside, q, false);
  double ei = 0, pmax = 0, eo = 0;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const double ph = inst.eigenfunction(inside[i]);
    pmax = std::max(pmax, std::abs(ph));
    ei = std::max(ei, std::abs(i2.values[i] - i1.values[i] - inst.orientation * ph));
  }
  for (std::size_t i = 0; i < outside.size(); ++i) eo = std::max(eo, std::abs(o2.values[i] - o1.values[i]));
  require(pmax > 0, ErrorKind::numerical, "eigenfunction vanishes at every interior probe");
  r.interior_residual = ei / pmax;
  r.exterior_residual = eo / pmax;
  return r;
}

CounterexampleInstance perturb_g2(const CounterexampleInstance& inst, const std::vector<int>& cells, double fraction) {
  CounterexampleInstance p = inst;
  std::vector<bool> hit(p.g2.values.size(), false);
  for (int c : cells) {
    if (inst.dim == 2) {
      require(c >= 0 && c + 1 < static_cast<int>(hit.size()), ErrorKind::invalid_argument, "segment index out of range");
      hit[c] = hit[c + 1] = true;
    } else {
      require(c >= 0 && c < static_cast<int>(inst.crack2.triangles.size()), ErrorKind::invalid_argument,
              "cell index out of range");
      for (int v : inst.crack2.triangles[c]) hit[v] = true;
    }
  }
  for (std::size_t v = 0; v < hit.size(); ++v)
    if (hit[v]) p.g2.values[v] *= 1.0 + fraction;
  return p;
}

std::vector<int> root_cell_family(const CounterexampleInstance& inst, int root) {
  require(inst.tag == "sphere" && inst.refinement >= 0, ErrorKind::invalid_argument, "root cells exist for sphere instances only");
  require(root >= 0 && root < 4, ErrorKind::invalid_argument, "hemisphere has 4 root cells");
  const int per = 1 << (2 * inst.refinement);
  std::vector<int> cells(per);
  for (int i = 0; i < per; ++i) cells[i] = root * per + i;
  return cells;
}

double min_support_ratio(const CounterexampleInstance& inst, double layer) {
  double worst = std::numeric_limits<double>::infinity();
  for (int which = 0; which < 2; ++which) {
    const DensityField& g = which == 0 ? inst.g1 : inst.g2;
    std::vector<double> rms;
    std::vector<bool> keep;
    if (inst.dim == 2) {
      const Curve2D& c = which == 0 ? inst.curve1 : inst.curve2;
      const double cut = layer * c.diameter();
      for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
        const Vec2 m = 0.5 * (c.points[i] + c.points[i + 1]);
        rms.push_back(std::sqrt(0.5 * (std::norm(g.values[i]) + std::norm(g.values[i + 1]))));
        keep.push_back(std::min((m - c.points.front()).norm(), (m - c.points.back()).norm()) > cut);
      }
    } else {
      const CrackMesh& m = which == 0 ? inst.crack1 : inst.crack2;
      const double cut = layer * m.diameter();
      const auto bnd = m.boundary_vertices();
      for (std::size_t t = 0; t < m.triangles.size(); ++t) {
        const Tri& tri = m.triangles[t];
        rms.push_back(std::sqrt((std::norm(g.values[tri[0]]) + std::norm(g.values[tri[1]]) + std::norm(g.values[tri[2]])) / 3));
        const Vec3 c = m.centroid(static_cast<int>(t));
        double d = std::numeric_limits<double>::infinity();
        for (int b : bnd) d = std::min(d, (c - m.vertices[b]).norm());
        keep.push_back(d > cut);
      }
    }
    double mean = 0;
    for (double v : rms) mean += v * v;
    mean = std::sqrt(mean / rms.size());
    for (std::size_t i = 0; i < rms.size(); ++i)
      if (keep[i]) worst = std::min(worst, rms[i] / mean);
  }
  return worst;
}

}  // namespace crackwave
