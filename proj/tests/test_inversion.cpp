#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "inversion.hpp"

using namespace crackwave;

namespace {

PlanarCrackParams truth() {
  PlanarCrackParams p;
  p.coeffs = {cplx(1, 0), cplx(0, 0.5), cplx(-0.3, 0), cplx(0.2, 0.1)};
  return p;
}

}  // namespace

TEST_CASE("Nelder-Mead minimizes the Rosenbrock function") {
  auto f = [](const Eigen::VectorXd& x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); };
  Eigen::VectorXd x0(2), step(2);
  x0 << -1.2, 1.0;
  step << 0.1, 0.1;
  const NelderMeadResult r = nelder_mead(f, x0, step);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
  NelderMeadOptions tight;
  tight.max_evals = 20;
  const NelderMeadResult s = nelder_mead(f, x0, step, tight);
  CHECK(!s.converged);
  CHECK(s.evals <= 20 + 3);
}

TEST_CASE("planar crack parameters") {
  PlanarCrackParams p = truth();
  p.tilt1 = 0.2;
  p.tilt2 = -0.3;
  const auto [e1, e2] = p.axes();
  CHECK(e1.norm() == doctest::Approx(1.0));
  CHECK(e1.dot(e2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(e1.cross(e2)[2] > 0);
  const CrackMesh m = p.mesh();
  CHECK(m.total_area() == doctest::Approx(4 * p.a * p.b));
  // basis vanishes on the rim
  const Eigen::MatrixXd B = p.basis();
  for (int v : m.boundary_vertices()) CHECK(B.row(v).norm() < 1e-14);
  Eigen::Matrix<double, 7, 1> g = p.geometry();
  PlanarCrackParams q;
  q.set_geometry(g);
  CHECK(q.geometry() == g);
  p.a = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  p = truth();
  p.coeffs.pop_back();
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("forward matrix and density fit") {
  const PlanarCrackParams p = truth();
  const WaveContext ctx{1.0, 1.0};
  const auto V = plane_grid(7, 3.0);
  const Eigen::MatrixXcd A = forward_matrix(p, ctx, V);
  const FieldSamples f = forward_map(p, ctx, V);
  Eigen::VectorXcd c(4);
  for (int i = 0; i < 4; ++i) c[i] = p.coeffs[i];
  const Eigen::VectorXcd u = A * c;
  for (std::size_t i = 0; i < V.size(); ++i) CHECK(std::abs(u[i] - f.values[i]) < 1e-12 * (1 + std::abs(f.values[i])));

  const DensityFit fit = fit_density(p, ctx, V, f.values);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(fit.coeffs[i] - p.coeffs[i]) < 1e-8);
  CHECK(fit.rel_residual < 1e-10);
  CHECK(!fit.ill_posed);

  // duplicated column: rank deficient
  Eigen::MatrixXcd D(V.size(), 2);
  D.col(0) = A.col(0);
  D.col(1) = A.col(0);
  CHECK(fit_density(D, A.col(0)).ill_posed);
}

TEST_CASE("projected misfit vanishes at the truth only") {
  const PlanarCrackParams p = truth();
  InversionSpec spec;
  spec.V = plane_grid(7, 3.0);
  spec.observations.push_back({WaveContext{1.0, 1.0}, forward_map(p, WaveContext{1.0, 1.0}, spec.V).values});
  std::vector<std::vector<cplx>> coeffs;
  CHECK(projected_misfit(spec, p, &coeffs) < 1e-10);
  REQUIRE(coeffs.size() == 1);
  PlanarCrackParams shifted = p;
  shifted.center[0] += 0.05;
  CHECK(projected_misfit(spec, shifted) > 1e-4);
}

TEST_CASE("geometry fit from a nearby start") {
  const PlanarCrackParams p = truth();
  InversionSpec spec;
  spec.V = plane_grid(7, 3.0);
  spec.observations.push_back({WaveContext{1.0, 1.0}, forward_map(p, WaveContext{1.0, 1.0}, spec.V).values});
  spec.budget = 600;
  const PlanarCrackParams init = perturbed_init(p, 0.02, 5);
  const GeometryFit fit = fit_geometry(spec, init);
  CHECK(fit.misfit < projected_misfit(spec, init) / 10);
  CHECK(fit.evals <= 600 + 8);
  CHECK(fit.budget == 600);
  spec.budget = 0;
  CHECK_THROWS_AS(fit_geometry(spec, init), Error);
}

TEST_CASE("seeded perturbation and noise") {
  const PlanarCrackParams p = truth();
  const PlanarCrackParams a = perturbed_init(p, 0.1, 42), b = perturbed_init(p, 0.1, 42), c = perturbed_init(p, 0.1, 43);
  CHECK(a.geometry() == b.geometry());
  CHECK(a.geometry() != c.geometry());
  CHECK(std::abs(a.a / p.a - 1) == doctest::Approx(0.1));
  CHECK(std::abs(a.tilt1 - p.tilt1) == doctest::Approx(0.1));
  CHECK((a.center - p.center).cwiseAbs().maxCoeff() == doctest::Approx(0.2));

  std::vector<cplx> d(4000, cplx(1, -1));
  const auto n = add_noise(d, 0.05, 1);
  double e = 0;
  for (std::size_t i = 0; i < d.size(); ++i) e += std::norm(n[i] - d[i]);
  CHECK(std::sqrt(e / d.size()) / std::sqrt(2.0) == doctest::Approx(0.05).epsilon(0.05));
  CHECK(add_noise(d, 0.05, 1) == n);
}

TEST_CASE("dip finder on synthetic curves") {
  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(1.5 + 0.01 * i);
    v.push_back(0.3 * std::abs(t.back() - 2.0137));
  }
  const auto dips = find_dips(t, v, 2);
  REQUIRE(dips.size() == 1);
  CHECK(dips[0].t == doctest::Approx(2.0137).epsilon(1e-10));
  CHECK(dips[0].channel == 2);
  // shallow wiggles are not dips
  std::vector<double> w;
  for (double x : t) w.push_back(1 + 0.1 * std::sin(20 * x));
  CHECK(find_dips(t, w, 0).empty());
}

TEST_CASE("sphere sweep spec predicts the derivative zeros") {
  std::vector<double> ts;
  for (int i = 0; i <= 35; ++i) ts.push_back(1.5 + 0.1 * i);
  const SweepSpec s = sphere_sweep_spec(1.0, 1.0, 1, 3, ts, 5, 4.0);
  // zeros of j_l' in [1.5, 5]: l=1: 2.0816, l=2: 3.3421, l=0: 4.4934, l=3: 4.5141
  REQUIRE(s.predicted.size() == 4);
  std::vector<double> p = s.predicted;
  std::sort(p.begin(), p.end());
  CHECK(p[0] == doctest::Approx(2.0815759778181));
  CHECK(p[1] == doctest::Approx(3.3420936578).epsilon(1e-9));
  CHECK(p[2] == doctest::Approx(4.4934094579).epsilon(1e-9));
  CHECK(p[3] == doctest::Approx(4.5140996470).epsilon(1e-9));
  CHECK(s.g1.cols() == 4);
  const SweepSpec half = sphere_sweep_spec(2.0, 1.0, 1, 3, ts, 5, 4.0);
  CHECK(half.predicted.size() > s.predicted.size());
  for (double x : half.predicted) {
    // t k0 s is a zero of j_l' for some l <= 3
    double best = 1;
    for (int l = 0; l <= 3; ++l) best = std::min(best, std::abs(sph_dj(l, 2.0 * x)));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("frequency sweep at coarse resolution") {
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(1.8 + 0.05 * i);
  const SweepResult r = frequency_sweep(sphere_sweep_spec(1.0, 1.0, 2, 1, ts, 11, 4.0));
  REQUIRE(r.iota.size() == ts.size());
  CHECK(!r.degenerate);
  bool near = false;
  for (const SweepDip& d : r.dips) near = near || std::abs(d.t - 2.0816) < 0.1;
  CHECK(near);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(r.dist_to_predicted[i] == doctest::Approx(std::abs(ts[i] - 2.0815759778181)));
}
