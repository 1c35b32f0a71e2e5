#include "eigen_fem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseCholesky>

#include "errors.hpp"
#include "quadrature.hpp"

namespace crackwave {

FemOperators assemble(const Mesh2D& mesh) {
  validate(mesh);
  const int n = static_cast<int>(mesh.nodes.size());
  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(mesh.triangles.size() * 9);
  mt.reserve(mesh.triangles.size() * 9);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const Tri& tri = mesh.triangles[t];
    const double A = mesh.area(t);
    require(A > 0 && std::isfinite(A), ErrorKind::numerical, "assembly hit a degenerate cell");
    double b[3], c[3], r[3];
    for (int i = 0; i < 3; ++i) {
      const Vec2& pj = mesh.nodes[tri[(i + 1) % 3]];
      const Vec2& pk = mesh.nodes[tri[(i + 2) % 3]];
      b[i] = pj.y() - pk.y();
      c[i] = pk.x() - pj.x();
      r[i] = mesh.nodes[tri[i]].x();
    }
    const double rbar = (r[0] + r[1] + r[2]) / 3.0;
    const double w = mesh.radial_weight ? rbar : 1.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        kt.emplace_back(tri[i], tri[j], w * (b[i] * b[j] + c[i] * c[j]) / (4.0 * A));
        double m;
        if (!mesh.radial_weight) {
          m = A / 12.0 * (i == j ? 2.0 : 1.0);
        } else if (i == j) {
          // integrals of lambda_i^2 lambda_k: A/10 for k = i, A/30 otherwise
          m = A * (r[i] / 10.0 + (3.0 * rbar - r[i]) / 30.0);
        } else {
          const int k = 3 - i - j;
          m = A * ((r[i] + r[j]) / 30.0 + r[k] / 60.0);
        }
        mt.emplace_back(tri[i], tri[j], m);
      }
  }
  FemOperators ops;
  ops.K.resize(n, n);
  ops.M.resize(n, n);
  ops.K.setFromTriplets(kt.begin(), kt.end());
  ops.M.setFromTriplets(mt.begin(), mt.end());
  ops.dirichlet = mesh.symmetry_nodes();
  ops.radial_weight = mesh.radial_weight;
  return ops;
}

double EigenPair::mu() const { return std::sqrt(mu2); }

double rayleigh_quotient(const FemOperators& ops, const Eigen::VectorXd& phi) {
  return phi.dot(ops.K * phi) / phi.dot(ops.M * phi);
}

namespace {

SparseMatrix restrict_to(const SparseMatrix& A, const std::vector<int>& map, int nf) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int i = map[it.row()], j = map[it.col()];
      if (i >= 0 && j >= 0) t.emplace_back(i, j, it.value());
    }
  SparseMatrix R(nf, nf);
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

}  // namespace

EigenPair smallest_eigenpair(const FemOperators& ops, const Mesh2D& mesh, const EigenSolveOptions& opt) {
  require(opt.tol > 0 && opt.max_iterations > 0 && opt.block >= 1, ErrorKind::invalid_argument, "bad eigen solver options");
  const int n = static_cast<int>(ops.K.rows());
  require(n == static_cast<int>(mesh.nodes.size()), ErrorKind::invalid_argument, "operators do not match the mesh");
  std::vector<int> map(n, 0);
  for (int d : ops.dirichlet) map[d] = -1;
  int nf = 0;
  for (int i = 0; i < n; ++i)
    if (map[i] >= 0) map[i] = nf++;
  const int p = std::min(opt.block, nf - 1);
  require(p >= 1, ErrorKind::numerical, "too few free nodes for an eigen solve");
  const SparseMatrix K = restrict_to(ops.K, map, nf);
  const SparseMatrix M = restrict_to(ops.M, map, nf);
  const bool deflate = ops.dirichlet.empty();
  const double shift = deflate ? -1.0 : 0.0;

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  solver.compute(SparseMatrix(K - shift * M));
  require(solver.info() == Eigen::Success, ErrorKind::numerical, "factorization of the stiffness matrix failed");

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(nf);
  ones /= std::sqrt(ones.dot(M * ones));
  auto remove_constant = [&](Eigen::MatrixXd& Y) {
    if (!deflate) return;
    const Eigen::VectorXd Mc = M * ones;
    for (int j = 0; j < Y.cols(); ++j) Y.col(j) -= ones * Mc.dot(Y.col(j));
  };

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Eigen::MatrixXd X(nf, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < nf; ++i) X(i, j) = U(rng);
  remove_constant(X);

  double lambda = 0, prev = std::numeric_limits<double>::infinity(), res = 0;
  Eigen::VectorXd x;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= opt.max_iterations; ++it) {
    Eigen::MatrixXd Y = solver.solve(M * X);
    remove_constant(Y);
    const Eigen::MatrixXd Kp = Y.transpose() * (K * Y);
    const Eigen::MatrixXd Mp = Y.transpose() * (M * Y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (Kp + Kp.transpose()),
                                                                 0.5 * (Mp + Mp.transpose()));
    require(ges.info() == Eigen::Success, ErrorKind::numerical, "Rayleigh-Ritz step failed");
    X = Y * ges.eigenvectors();
    lambda = ges.eigenvalues()(0);
    x = X.col(0);
    const Eigen::VectorXd Mx = M * x;
    res = (K * x - lambda * Mx).norm() / (std::abs(lambda) * Mx.norm());
    if (std::abs(lambda - prev) <= opt.tol * std::abs(lambda) && res <= opt.tol) {
      converged = true;
      break;
    }
    prev = lambda;
  }
  require(converged, ErrorKind::numerical, "eigen iteration did not converge");
  require(lambda > 0, ErrorKind::numerical, "smallest eigenvalue is not positive");

  EigenPair out;
  out.mu2 = lambda;
  out.mesh = mesh;
  out.residual = res;
  out.iterations = it;
  out.phi = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (map[i] >= 0) out.phi[i] = x[map[i]];
  const double target = out.half() ? 0.5 : 1.0;
  out.phi *= std::sqrt(target / out.phi.dot(ops.M * out.phi));
  Eigen::Index imax;
  out.phi.cwiseAbs().maxCoeff(&imax);
  if (out.phi[imax] < 0) out.phi = -out.phi;
  return out;
}

EigenPair cusp_eigenpair(const CuspDomainSpec& spec_in, double h, const EigenSolveOptions& opt) {
  CuspDomainSpec spec = spec_in;
  spec.half = true;
  spec.validate();
  double mu2_prev = 0;
  EigenPair pair;
  for (int level = 0; level < 3; ++level) {
    const Mesh2D mesh = make_cusp_mesh(spec, h / (1 << level));
    mu2_prev = pair.mu2;
    pair = smallest_eigenpair(assemble(mesh), mesh, opt);
  }
  pair.err_estimate = std::abs(pair.mu2 - mu2_prev);
  return pair;
}

// --- Decay diagnostics -------------------------------------------------------

namespace {

struct CuspFrame {
  bool radial;
  double s(const Vec2& p) const { return radial ? 1.0 - p.x() : p.x() + 1.0; }
  double sigma(const Vec2& p) const {
    const double d = s(p);
    return std::sqrt(d * d + p.y() * p.y());
  }
  double weight(const Vec2& p) const { return radial ? p.x() : 1.0; }
};

struct Node {
  Vec2 p;
  double phi;
};

// Part of the triangle with s < R (Sutherland-Hodgman against one line).
std::vector<Node> clip(const std::array<Node, 3>& tri, const CuspFrame& f, double R) {
  std::vector<Node> out;
  for (int i = 0; i < 3; ++i) {
    const Node& a = tri[i];
    const Node& b = tri[(i + 1) % 3];
    const double da = f.s(a.p) - R, db = f.s(b.p) - R;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      const double t = da / (da - db);
      out.push_back({a.p + t * (b.p - a.p), a.phi + t * (b.phi - a.phi)});
    }
  }
  return out;
}

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

// Integral of w phi^2 over a triangle with linear phi (degree-4 rule, exact for r phi^2).
double integrate_phi2(const Node& a, const Node& b, const Node& c, const CuspFrame& f) {
  const double A = tri_area(a.p, b.p, c.p);
  double s = 0;
  for (const TriPoint& tp : triangle_rule(6)) {
    const Vec2 p = tp.bary[0] * a.p + tp.bary[1] * b.p + tp.bary[2] * c.p;
    const double v = tp.bary[0] * a.phi + tp.bary[1] * b.phi + tp.bary[2] * c.phi;
    s += tp.weight * f.weight(p) * v * v;
  }
  return s * A;
}

double weighted_sigma(const Node& a, const Node& b, const Node& c, const CuspFrame& f, double alpha, int levels) {
  if (levels == 0) {
    const Vec2 p = (a.p + b.p + c.p) / 3.0;
    const double v = (a.phi + b.phi + c.phi) / 3.0;
    return tri_area(a.p, b.p, c.p) * f.weight(p) * std::pow(f.sigma(p), -2.0 * alpha) * v * v;
  }
  auto mid = [](const Node& u, const Node& w) { return Node{0.5 * (u.p + w.p), 0.5 * (u.phi + w.phi)}; };
  const Node ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
  return weighted_sigma(a, ab, ca, f, alpha, levels - 1) + weighted_sigma(ab, b, bc, f, alpha, levels - 1) +
         weighted_sigma(ca, bc, c, f, alpha, levels - 1) + weighted_sigma(ab, bc, ca, f, alpha, levels - 1);
}

}  // namespace

DecayReport decay_report(const EigenPair& pair, const std::vector<double>& radii, const std::vector<double>& alphas) {
  require(radii.size() >= 4, ErrorKind::invalid_argument, "decay report needs at least 4 radii");
  for (double R : radii) require(R > 0 && R < 1, ErrorKind::invalid_argument, "radii must lie in (0, 1)");
  const double rmin = *std::min_element(radii.begin(), radii.end());
  const double rmax = *std::max_element(radii.begin(), radii.end());
  require(rmax >= 10 * rmin * (1 - 1e-12), ErrorKind::invalid_argument, "radii must span a decade");
  const Mesh2D& mesh = pair.mesh;
  require(pair.phi.size() == static_cast<Eigen::Index>(mesh.nodes.size()), ErrorKind::invalid_argument,
          "eigenfunction does not match its mesh");
  const CuspFrame f{mesh.radial_weight};

  std::vector<double> cols;
  for (const Vec2& p : mesh.nodes) {
    const double s = f.s(p);
    if (s > 0 && s < rmin) cols.push_back(s);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  require(cols.size() >= 3, ErrorKind::precision, "cusp unresolved: fewer than 3 element layers inside the smallest radius");

  const double full = pair.half() ? 2.0 : 1.0;
  DecayReport rep;
  rep.radii = radii;
  rep.alphas = alphas;
  rep.integrals.assign(radii.size(), 0.0);
  rep.weighted.assign(alphas.size(), 0.0);
  for (const Tri& t : mesh.triangles) {
    const std::array<Node, 3> tri = {Node{mesh.nodes[t[0]], pair.phi[t[0]]}, Node{mesh.nodes[t[1]], pair.phi[t[1]]},
                                     Node{mesh.nodes[t[2]], pair.phi[t[2]]}};
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const std::vector<Node> poly = clip(tri, f, radii[i]);
      for (std::size_t k = 2; k < poly.size(); ++k) rep.integrals[i] += integrate_phi2(poly[0], poly[k - 1], poly[k], f);
    }
    const double sc = f.sigma((tri[0].p + tri[1].p + tri[2].p) / 3.0);
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (sc < 0.5) {
        rep.weighted[j] += weighted_sigma(tri[0], tri[1], tri[2], f, alphas[j], 2);
      } else {
        const double A = tri_area(tri[0].p, tri[1].p, tri[2].p);
        for (const TriPoint& tp : triangle_rule(6)) {
          const Vec2 p = tp.bary[0] * tri[0].p + tp.bary[1] * tri[1].p + tp.bary[2] * tri[2].p;
          const double v = tp.bary[0] * tri[0].phi + tp.bary[1] * tri[1].phi + tp.bary[2] * tri[2].phi;
          rep.weighted[j] += A * tp.weight * f.weight(p) * std::pow(f.sigma(p), -2.0 * alphas[j]) * v * v;
        }
      }
    }
  }
  for (double& v : rep.integrals) v *= full;
  for (double& v : rep.weighted) v *= full;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(rep.integrals[i] > 0, ErrorKind::numerical, "cusp integral vanished; cannot fit a decay slope");
    const double lx = std::log(radii[i]), ly = std::log(rep.integrals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

std::optional<double> interpolate(const EigenPair& pair, const Vec2& p_in) {
  Vec2 p = p_in;
  double sign = 1.0;
  if (pair.half() && p.y() < 0) {
    p.y() = -p.y();
    sign = -1.0;
  }
  const Mesh2D& m = pair.mesh;
  for (const Tri& t : m.triangles) {
    const Vec2& a = m.nodes[t[0]];
    const Vec2& b = m.nodes[t[1]];
    const Vec2& c = m.nodes[t[2]];
    if (p.x() < std::min({a.x(), b.x(), c.x()}) - 1e-12 || p.x() > std::max({a.x(), b.x(), c.x()}) + 1e-12) continue;
    if (p.y() < std::min({a.y(), b.y(), c.y()}) - 1e-12 || p.y() > std::max({a.y(), b.y(), c.y()}) + 1e-12) continue;
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    const double l1 = ((p - a).x() * (c - a).y() - (p - a).y() * (c - a).x()) / det;
    const double l2 = ((b - a).x() * (p - a).y() - (b - a).y() * (p - a).x()) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 < -1e-12 || l1 < -1e-12 || l2 < -1e-12) continue;
    return sign * (l0 * pair.phi[t[0]] + l1 * pair.phi[t[1]] + l2 * pair.phi[t[2]]);
  }
  return std::nullopt;
}

}  // namespace crackwave
