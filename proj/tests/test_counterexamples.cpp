#include <doctest.h>

#include <cmath>

#include "counterexamples.hpp"
#include "errors.hpp"

using namespace crackwave;

TEST_CASE("sphere pair: small gap that shrinks under refinement") {
  ObservationGrid grid;
  grid.n = 15;
  const GapReport g2 = cauchy_gap(build_sphere_instance(std::nullopt, 2), grid);
  const GapReport g3 = cauchy_gap(build_sphere_instance(std::nullopt, 3), grid);
  CHECK(g2.instance == "sphere");
  CHECK(g3.refinement == 3);
  CHECK(!g3.degenerate);
  CHECK(g3.rel_gap_u < 0.05);
  CHECK(g3.rel_gap_u < g2.rel_gap_u / 3);
  CHECK(g3.interior_residual < g2.interior_residual);
  CHECK(g3.interior_residual < 0.05);
  CHECK(g3.exterior_residual < 0.05);
}

TEST_CASE("sphere pair scales with the target wavenumber") {
  const CounterexampleInstance a = build_sphere_instance(1.0, 1);
  const double k1 = first_dj1_zero();
  CHECK(a.scale == doctest::Approx(k1));
  CHECK(a.ctx.k() == doctest::Approx(1.0));
  for (const Vec3& p : a.crack1.vertices) CHECK(p[2] <= -0.5 * a.scale + 1e-12);
  CHECK_THROWS_AS(build_sphere_instance(-1.0, 1), Error);
}

TEST_CASE("swapping the cracks flips the orientation") {
  const CounterexampleInstance a = build_sphere_instance(std::nullopt, 2);
  const CounterexampleInstance b = a.swapped();
  CHECK(b.orientation == -a.orientation);
  CHECK(b.crack1.vertices == a.crack2.vertices);
  ObservationGrid grid;
  grid.n = 9;
  const GapReport ga = cauchy_gap(a, grid), gb = cauchy_gap(b, grid);
  CHECK(gb.rel_gap_u == doctest::Approx(ga.rel_gap_u));
  CHECK(gb.interior_residual == doctest::Approx(ga.interior_residual));
}

TEST_CASE("perturbing the lower density opens the gap") {
  const CounterexampleInstance a = build_sphere_instance(std::nullopt, 3);
  ObservationGrid grid;
  grid.n = 15;
  const double base = cauchy_gap(a, grid).rel_gap_u;
  const auto cells = root_cell_family(a, 0);
  CHECK(cells.size() == 64);
  const CounterexampleInstance p = perturb_g2(a, cells, 0.1);
  std::vector<bool> touched(a.g2.values.size(), false);
  for (int c : cells)
    for (int v : a.crack2.triangles[c]) touched[v] = true;
  for (std::size_t v = 0; v < touched.size(); ++v)
    CHECK(std::abs(p.g2.values[v] - (touched[v] ? 1.1 : 1.0) * a.g2.values[v]) < 1e-15);
  // a whole-hemisphere change is far above the discretization gap even at this level
  std::vector<int> all(a.crack2.triangles.size());
  for (std::size_t c = 0; c < all.size(); ++c) all[c] = static_cast<int>(c);
  CHECK(cauchy_gap(perturb_g2(a, all, 0.1), grid).rel_gap_u > 2 * base);
  CHECK(perturb_g2(a, {}, 0.1).g2.values == a.g2.values);
}

TEST_CASE("2D cusp pair") {
  for (double a : {1.0, 0.25}) {
    const CounterexampleInstance inst = build_cusp2d_instance(a, 0.08);
    CHECK(inst.dim == 2);
    CHECK(inst.eigen.has_value());
    ObservationGrid grid;
    grid.n = 81;
    const GapReport g = cauchy_gap(inst, grid);
    CHECK(!g.degenerate);
    CHECK(g.rel_gap_u < 3e-2);
    CHECK(g.interior_residual < 3e-2);
    CHECK(g.exterior_residual < 3e-2);
    // the density traces vanish at the tips
    CHECK(std::abs(inst.g1.values.front()) < 1e-12);
    CHECK(std::abs(inst.g1.values.back()) < 1e-12);
  }
  CHECK_THROWS_AS(build_cusp2d_instance(0.0, 0.08), Error);
}

TEST_CASE("flatter cusps give flatter curves") {
  double prev = 10;
  for (double a : {1.0, 0.25, 0.05}) {
    const CounterexampleInstance inst = build_cusp2d_instance(a, 0.08);
    const double tilt = inst.curve1.max_normal_tilt();
    CHECK(tilt < prev);
    prev = tilt;
  }
}

TEST_CASE("axisymmetric pair") {
  const CounterexampleInstance inst = build_axisym_instance(0.08, 64);
  CHECK(inst.dim == 3);
  ObservationGrid grid;
  grid.n = 11;
  const GapReport g = cauchy_gap(inst, grid);
  CHECK(g.rel_gap_u < 3e-2);
  CHECK(g.interior_residual < 5e-2);
  CHECK(min_support_ratio(inst, 0.1) > 0);
}

TEST_CASE("observation grid") {
  const CounterexampleInstance inst = build_sphere_instance(std::nullopt, 1);
  ObservationGrid grid;
  grid.n = 5;
  const auto pts = top_plane_points(inst, grid);
  CHECK(pts.size() == 25);
  for (const Vec3& p : pts) CHECK(p[2] == 0.0);
  CHECK(pts.front()[0] == doctest::Approx(-4 * inst.scale));
  grid.n = 1;
  CHECK_THROWS_AS(top_plane_points(inst, grid), Error);
}
