#include "inversion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "errors.hpp"

namespace crackwave {

std::pair<Vec3, Vec3> PlanarCrackParams::axes() const {
  const Eigen::Matrix3d R =
      (Eigen::AngleAxisd(tilt2, Vec3::UnitY()) * Eigen::AngleAxisd(tilt1, Vec3::UnitX())).toRotationMatrix();
  return {R.col(0), R.col(1)};
}

Eigen::Matrix<double, 7, 1> PlanarCrackParams::geometry() const {
  Eigen::Matrix<double, 7, 1> x;
  x << center[0], center[1], center[2], tilt1, tilt2, a, b;
  return x;
}

void PlanarCrackParams::set_geometry(const Eigen::Matrix<double, 7, 1>& x) {
  center = x.head<3>();
  tilt1 = x[3];
  tilt2 = x[4];
  a = x[5];
  b = x[6];
}

void PlanarCrackParams::validate() const {
  require(m >= 1 && m <= 4, ErrorKind::validation, "density basis needs 1 <= m <= 4 modes per axis");
  require(a > 0 && b > 0, ErrorKind::validation, "half-widths must be positive");
  require(std::abs(tilt1) < 1.2 && std::abs(tilt2) < 1.2, ErrorKind::validation, "tilt angles must stay below 1.2 rad");
  require(coeffs.empty() || coeffs.size() == static_cast<std::size_t>(m * m), ErrorKind::validation,
          "coefficient count must be m * m");
  require(n1 >= 2 && n2 >= 2, ErrorKind::validation, "planar crack mesh needs at least 2 cells per axis");
}

CrackMesh PlanarCrackParams::mesh() const {
  validate();
  const auto [e1, e2] = axes();
  return make_planar_crack(center, e1, e2, a, b, n1, n2);
}

Eigen::MatrixXd PlanarCrackParams::basis() const {
  Eigen::MatrixXd B((n1 + 1) * (n2 + 1), m * m);
  for (int j = 0; j <= n2; ++j)
    for (int i = 0; i <= n1; ++i) {
      const double s = 2.0 * i / n1, t = 2.0 * j / n2;  // (s + 1), (t + 1)
      for (int q = 1; q <= m; ++q)
        for (int p = 1; p <= m; ++p) B(j * (n1 + 1) + i, (q - 1) * m + p - 1) = std::sin(p * kPi * s / 2) * std::sin(q * kPi * t / 2);
    }
  return B;
}

DensityField PlanarCrackParams::density() const {
  const Eigen::MatrixXd B = basis();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m * m);
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[static_cast<Eigen::Index>(i)] = coeffs[i];
  const Eigen::VectorXcd g = B.cast<cplx>() * c;
  return {std::vector<cplx>(g.data(), g.data() + g.size())};
}

FieldSamples forward_map(const PlanarCrackParams& p, const WaveContext& ctx, const std::vector<Vec3>& V,
                         const QuadratureConfig& q) {
  return eval_double_layer_3d(p.mesh(), p.density(), ctx, V, q);
}

Eigen::MatrixXcd forward_matrix(const PlanarCrackParams& p, const WaveContext& ctx, const std::vector<Vec3>& V,
                                const QuadratureConfig& q) {
  return double_layer_matrix_3d(p.mesh(), ctx, V, q) * p.basis().cast<cplx>();
}

DensityFit fit_density(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& d, double rank_tol) {
  require(A.rows() == d.size(), ErrorKind::invalid_argument, "data length does not match the forward matrix");
  require(A.cols() <= A.rows(), ErrorKind::invalid_argument, "basis larger than the observation count");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  DensityFit fit;
  fit.sigma_max = sv.size() ? sv[0] : 0.0;
  fit.sigma_min = sv.size() ? sv[sv.size() - 1] : 0.0;
  fit.ill_posed = !(fit.sigma_min > rank_tol * fit.sigma_max);
  svd.setThreshold(rank_tol);
  const Eigen::VectorXcd c = svd.solve(d);
  fit.coeffs.assign(c.data(), c.data() + c.size());
  fit.residual = (A * c - d).norm();
  const double dn = d.norm();
  fit.rel_residual = dn > 0 ? fit.residual / dn : 0.0;
  return fit;
}

DensityFit fit_density(const PlanarCrackParams& geometry, const WaveContext& ctx, const std::vector<Vec3>& V,
                       const std::vector<cplx>& data, const QuadratureConfig& q) {
  const Eigen::MatrixXcd A = forward_matrix(geometry, ctx, V, q);
  return fit_density(A, Eigen::Map<const Eigen::VectorXcd>(data.data(), static_cast<Eigen::Index>(data.size())));
}

double projected_misfit(const InversionSpec& spec, const PlanarCrackParams& geometry,
                        std::vector<std::vector<cplx>>* coeffs) {
  double r2 = 0, d2 = 0;
  if (coeffs) coeffs->clear();
  for (const Observation& ob : spec.observations) {
    const DensityFit fit = fit_density(geometry, ob.ctx, spec.V, ob.data);
    r2 += fit.residual * fit.residual;
    for (const cplx& v : ob.data) d2 += std::norm(v);
    if (coeffs) coeffs->push_back(fit.coeffs);
  }
  return d2 > 0 ? std::sqrt(r2 / d2) : std::sqrt(r2);
}

GeometryFit fit_geometry(const InversionSpec& spec, const PlanarCrackParams& init) {
  require(spec.budget > 0, ErrorKind::invalid_argument, "optimizer budget must be positive");
  require(!spec.V.empty() && !spec.observations.empty(), ErrorKind::invalid_argument, "inversion needs observations");
  for (const Observation& ob : spec.observations) {
    ob.ctx.validate();
    require(ob.data.size() == spec.V.size(), ErrorKind::invalid_argument, "data length does not match V");
    for (const cplx& v : ob.data)
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::invalid_argument, "data must be finite");
  }
  init.validate();
  PlanarCrackParams work = init;
  auto misfit = [&](const Eigen::VectorXd& x) {
    work.set_geometry(x);
    try {
      return projected_misfit(spec, work);
    } catch (const Error&) {
      return 1e3;  // candidate left the admissible set
    }
  };
  Eigen::VectorXd step(7);
  const double L = std::max(init.a, init.b);
  step << 0.1 * L, 0.1 * L, 0.1 * L, 0.05, 0.05, 0.1 * init.a, 0.1 * init.b;
  NelderMeadOptions opt;
  opt.max_evals = spec.budget;
  const NelderMeadResult nm = nelder_mead(misfit, init.geometry(), step, opt);

  GeometryFit out;
  out.params = init;
  out.params.set_geometry(nm.x);
  out.misfit = projected_misfit(spec, out.params, &out.coeffs);
  out.params.coeffs = out.coeffs.front();
  out.history = nm.history;
  out.evals = nm.evals;
  out.budget_exhausted = !nm.converged;
  out.seed = spec.seed;
  out.budget = spec.budget;
  return out;
}

PlanarCrackParams perturbed_init(const PlanarCrackParams& truth, double rel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto sign = [&] { return (rng() & 1) ? 1.0 : -1.0; };
  Eigen::Matrix<double, 7, 1> x = truth.geometry();
  const double L = std::max(truth.a, truth.b);
  for (int i = 0; i < 3; ++i) x[i] += rel * sign() * std::max(std::abs(x[i]), L);
  for (int i = 3; i < 5; ++i) x[i] += rel * sign();
  for (int i = 5; i < 7; ++i) x[i] *= 1.0 + rel * sign();
  PlanarCrackParams p = truth;
  p.set_geometry(x);
  return p;
}

std::vector<cplx> add_noise(const std::vector<cplx>& data, double level, std::uint64_t seed) {
  double rms = 0;
  for (const cplx& v : data) rms += std::norm(v);
  rms = data.empty() ? 0.0 : std::sqrt(rms / data.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, level * rms / std::sqrt(2.0));
  std::vector<cplx> out = data;
  for (cplx& v : out) v += cplx(N(rng), N(rng));
  return out;
}

std::vector<Vec3> plane_grid(int n, double w) {
  require(n >= 2 && w > 0, ErrorKind::invalid_argument, "plane grid needs n >= 2 and w > 0");
  std::vector<Vec3> V;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V.push_back({-w + 2 * w * i / (n - 1), -w + 2 * w * j / (n - 1), 0.0});
  return V;
}

// --- Sweep -----------------------------------------------------------------------

std::vector<SweepDip> find_dips(const std::vector<double>& t, const std::vector<double>& iota, int channel, double depth,
                                double window) {
  std::vector<SweepDip> dips;
  const std::size_t n = t.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(iota[i] <= iota[i - 1] && iota[i] < iota[i + 1])) continue;
    double wmax = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t[j] - t[i]) <= window) wmax = std::max(wmax, iota[j]);
    if (iota[i] > depth * wmax) continue;
    // |linear| profile through the neighbours
    const double s = (iota[i - 1] + iota[i + 1]) / (t[i + 1] - t[i - 1]);
    double z = t[i];
    if (s > 0) z = 0.5 * (t[i - 1] + t[i + 1]) + (iota[i - 1] - iota[i + 1]) / (2 * s);
    z = std::clamp(z, t[i - 1], t[i + 1]);
    dips.push_back({z, iota[i], channel});
  }
  return dips;
}

SweepResult frequency_sweep(const SweepSpec& spec) {
  require(!spec.t_grid.empty(), ErrorKind::invalid_argument, "empty t grid");
  for (std::size_t i = 0; i < spec.t_grid.size(); ++i) {
    require(spec.t_grid[i] > 0, ErrorKind::invalid_argument, "t grid must be positive");
    if (i) require(spec.t_grid[i] > spec.t_grid[i - 1], ErrorKind::invalid_argument, "t grid must increase");
  }
  require(spec.g1.cols() == spec.g2.cols() && spec.g1.cols() >= 1, ErrorKind::invalid_argument,
          "both cracks need the same number of density channels");
  require(spec.g1.rows() == static_cast<Eigen::Index>(spec.crack1.vertices.size()) &&
              spec.g2.rows() == static_cast<Eigen::Index>(spec.crack2.vertices.size()),
          ErrorKind::invalid_argument, "density channels do not match the meshes");
  require(!spec.V.empty(), ErrorKind::invalid_argument, "empty observation set");
  const int C = static_cast<int>(spec.g1.cols());
  SweepResult r;
  r.t = spec.t_grid;
  r.channel.assign(C, std::vector<double>(r.t.size(), 0.0));
  r.iota.assign(r.t.size(), 0.0);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    const WaveContext ctx{spec.k0, r.t[i]};
    const Eigen::MatrixXcd A1 = double_layer_matrix_3d(spec.crack1, ctx, spec.V, spec.q) * spec.g1;
    const Eigen::MatrixXcd A2 = double_layer_matrix_3d(spec.crack2, ctx, spec.V, spec.q) * spec.g2;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < C; ++c) {
      const Eigen::VectorXcd u1 = A1.col(c), u2 = A2.col(c);
      const double n1 = u1.norm(), n2 = u2.squaredNorm();
      if (!(n1 > 0) || !(n2 > 0)) {
        r.degenerate = true;
        r.channel[c][i] = 1.0;
        continue;
      }
      const cplx coef = u2.dot(u1) / n2;  // u2^H u1 / |u2|^2
      r.channel[c][i] = (u1 - coef * u2).norm() / n1;
      best = std::min(best, r.channel[c][i]);
    }
    r.iota[i] = best;
  }
  for (int c = 0; c < C; ++c) {
    auto d = find_dips(r.t, r.channel[c], c);
    r.dips.insert(r.dips.end(), d.begin(), d.end());
  }
  std::sort(r.dips.begin(), r.dips.end(), [](const SweepDip& a, const SweepDip& b) { return a.t < b.t; });
  r.predicted = spec.predicted;
  for (double t : r.t) {
    double best = std::numeric_limits<double>::quiet_NaN(), dist = std::numeric_limits<double>::quiet_NaN();
    for (double p : r.predicted)
      if (std::isnan(dist) || std::abs(t - p) < dist) {
        dist = std::abs(t - p);
        best = p;
      }
    r.nearest_predicted.push_back(best);
    r.dist_to_predicted.push_back(dist);
  }
  return r;
}

namespace {

double legendre(int l, double x) {
  double p0 = 1, p1 = x;
  if (l == 0) return p0;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

}  // namespace

SweepSpec sphere_sweep_spec(double s, double k0, int n_refine, int lmax, const std::vector<double>& t_grid, int grid_n,
                            double grid_half_width) {
  require(s > 0 && k0 > 0, ErrorKind::invalid_argument, "sphere radius and k0 must be positive");
  require(lmax >= 0 && lmax <= 3, ErrorKind::invalid_argument, "lmax must be in [0, 3]");
  SweepSpec spec;
  const Vec3 c(0, 0, -2 * s);
  spec.crack1 = make_hemisphere(c, s, true, n_refine, 0.5 * s);
  spec.crack2 = make_hemisphere(c, s, false, n_refine, 0.5 * s);
  auto channels = [&](const CrackMesh& m) {
    Eigen::MatrixXcd G(m.vertices.size(), lmax + 1);
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
      for (int l = 0; l <= lmax; ++l) G(v, l) = legendre(l, (m.vertices[v][2] - c[2]) / s);
    return G;
  };
  spec.g1 = channels(spec.crack1);
  spec.g2 = channels(spec.crack2);
  spec.k0 = k0;
  spec.t_grid = t_grid;
  spec.V = plane_grid(grid_n, grid_half_width * s);
  if (!t_grid.empty()) {
    for (int l = 0; l <= lmax; ++l)
      for (double z : zeros_of_dj(l, 10)) {
        const double t = z / (k0 * s);
        if (t >= t_grid.front() && t <= t_grid.back()) spec.predicted.push_back(t);
      }
    std::sort(spec.predicted.begin(), spec.predicted.end());
  }
  return spec;
}

}  // namespace crackwave
