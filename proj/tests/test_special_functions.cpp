#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "special_functions.hpp"

using namespace crackwave;

// Oracle values below come from libstdc++'s special math functions, not from our code.
namespace {

double ref_dj(int l, double x) {
  // j_l' = j_{l-1} - (l+1)/x j_l, and j_0' = -j_1
  if (l == 0) return -std::sph_bessel(1, x);
  return std::sph_bessel(l - 1, x) - (l + 1) / x * std::sph_bessel(l, x);
}

}  // namespace

TEST_CASE("spherical bessel matches the standard library") {
  for (int l = 0; l <= 3; ++l)
    for (double x = 0.01; x < 30; x *= 1.37) {
      CHECK(sph_j(l, x) == doctest::Approx(std::sph_bessel(l, x)).epsilon(1e-12));
      CHECK(std::abs(sph_dj(l, x) - ref_dj(l, x)) < 1e-12 * (1 + std::abs(ref_dj(l, x))));
    }
  CHECK(crackwave::j1(2.5) == doctest::Approx(std::sph_bessel(1, 2.5)).epsilon(1e-13));
  CHECK(dj1(2.5) == doctest::Approx(ref_dj(1, 2.5)).epsilon(1e-12));
}

TEST_CASE("small-argument limits") {
  CHECK(sph_j(0, 0.0) == 1.0);
  CHECK(sph_j(1, 0.0) == 0.0);
  CHECK(sph_dj(1, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(sph_j(1, 1e-6) == doctest::Approx(1e-6 / 3).epsilon(1e-9));
}

TEST_CASE("zeros of d/dx j_l") {
  for (int l = 0; l <= 3; ++l) {
    const auto z = zeros_of_dj(l, 4);
    REQUIRE(z.size() == 4);
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(std::abs(ref_dj(l, z[i])) < 1e-12);
      if (i > 0) CHECK(z[i] > z[i - 1]);
    }
    // no sign change of the derivative before the first zero
    for (double x = 0.05; x < z[0] - 1e-6; x += 0.01) CHECK(ref_dj(l, x) * ref_dj(l, 0.05) > 0);
  }
  // tabulated first zero of j_1'
  CHECK(zeros_of_dj(1, 1)[0] == doctest::Approx(2.0815759778181006).epsilon(1e-13));
  CHECK(first_dj1_zero() == zeros_of_dj(1, 1)[0]);
  CHECK_THROWS_AS(zeros_of_dj(4, 1), Error);
  CHECK_THROWS_AS(zeros_of_dj(1, 0), Error);
}

TEST_CASE("hankel functions on both sides of the series switch") {
  for (double x : {0.01, 0.3, 1.0, 4.0, 7.9, 8.1, 11.9, kHankelSeriesLimit, 12.1, 20.0, 45.0, 200.0}) {
    const Hankel01 h = hankel01(x);
    const double tol = 1e-10;
    CHECK(std::abs(h.h0.real() - std::cyl_bessel_j(0.0, x)) < tol);
    CHECK(std::abs(h.h0.imag() - std::cyl_neumann(0.0, x)) < tol * (1 + std::abs(std::cyl_neumann(0.0, x))));
    CHECK(std::abs(h.h1.real() - std::cyl_bessel_j(1.0, x)) < tol);
    CHECK(std::abs(h.h1.imag() - std::cyl_neumann(1.0, x)) < tol * (1 + std::abs(std::cyl_neumann(1.0, x))));
  }
  CHECK(hankel0_h1(3.0) == hankel01(3.0).h0);
  CHECK_THROWS_AS(hankel01(0.0), Error);
  CHECK_THROWS_AS(hankel01(-1.0), Error);
}

TEST_CASE("radial kernel derivatives agree with finite differences") {
  for (double k : {0.0, 1.0, 3.5})
    for (double r : {0.2, 1.0, 2.7}) {
      const double e = 1e-5;
      for (bool three_d : {true, false}) {
        auto K = [&](double s) { return three_d ? radial_kernel_3d(k, s) : radial_kernel_2d(k, s); };
        const RadialKernel c = K(r), p = K(r + e), m = K(r - e);
        CHECK(std::abs((p.g - m.g) / (2 * e) - c.dg) < 1e-7 * (1 + std::abs(c.dg)));
        CHECK(std::abs((p.dg - m.dg) / (2 * e) - c.d2g) < 1e-6 * (1 + std::abs(c.d2g)));
      }
    }
  // closed forms
  const RadialKernel g3 = radial_kernel_3d(2.0, 1.5);
  CHECK(std::abs(g3.g - std::exp(cplx(0, 3.0)) / (4 * kPi * 1.5)) < 1e-15);
  const RadialKernel g2 = radial_kernel_2d(2.0, 1.5);
  CHECK(std::abs(g2.g - cplx(0, 0.25) * cplx(std::cyl_bessel_j(0.0, 3.0), std::cyl_neumann(0.0, 3.0))) < 1e-12);
  CHECK(std::abs(radial_kernel_2d(0.0, 2.0).g - (-std::log(2.0) / (2 * kPi))) < 1e-15);
}

TEST_CASE("half-space Green function") {
  const WaveContext ctx{1.3, 1.0};
  const Vec3 x(0.2, -0.4, -1.1), y(0.5, 0.3, -2.0);
  const double k = 1.3;
  auto free = [&](const Vec3& a, const Vec3& b) {
    const double r = (a - b).norm();
    return std::exp(cplx(0, k * r)) / (4 * kPi * r);
  };
  CHECK(std::abs(greens_halfspace(ctx, x, y) - (free(x, y) + free(x, mirror(y)))) < 1e-15);
  CHECK(std::abs(greens_halfspace(ctx, x, y) - greens_halfspace(ctx, y, x)) < 1e-15);
  CHECK(std::abs(phi_free(ctx, x, y) - free(x, y)) < 1e-15);

  // d/dx3 vanishes on the top plane
  const Vec3 top(0.3, 0.1, 0.0);
  const double e = 1e-6;
  const cplx d3 = (greens_halfspace(ctx, top + Vec3(0, 0, e), y) - greens_halfspace(ctx, top - Vec3(0, 0, e), y)) / (2 * e);
  CHECK(std::abs(d3) < 1e-9);

  const CVec3 gy = grad_greens_halfspace(ctx, x, y);
  for (int c = 0; c < 3; ++c) {
    Vec3 d = Vec3::Zero();
    d[c] = e;
    const cplx fd = (greens_halfspace(ctx, x, y + d) - greens_halfspace(ctx, x, y - d)) / (2 * e);
    CHECK(std::abs(fd - gy[c]) < 1e-8);
  }
  CHECK_THROWS_AS(phi_free(1.0, x, x), Error);
}

TEST_CASE("wave context") {
  const WaveContext stat{0.0, 1.0};
  CHECK_NOTHROW(stat.validate());
  const WaveContext neg{-1.0, 1.0}, zero_t{1.0, 0.0}, nan_k{std::nan(""), 1.0};
  CHECK_THROWS_AS(neg.validate(), Error);
  CHECK_THROWS_AS(zero_t.validate(), Error);
  CHECK_THROWS_AS(nan_k.validate(), Error);
  CHECK(WaveContext{1.5, 2.0}.k() == 3.0);
}

TEST_CASE("ball eigenfunction satisfies the Neumann condition") {
  const double k1 = first_dj1_zero();
  for (const Vec3 dir : {Vec3(0, 0, 1), Vec3(0.6, 0, 0.8), Vec3(0.36, 0.48, 0.8)}) {
    const double e = 1e-5;
    const double dr = (psi_ball((1 + e) * dir, k1) - psi_ball((1 - e) * dir, k1)) / (2 * e);
    CHECK(std::abs(dr) < 1e-8);
  }
  // Helmholtz equation at an interior point
  const Vec3 p(0.2, -0.1, 0.4);
  const double h = 1e-3;
  double lap = -6 * psi_ball(p, k1);
  for (int c = 0; c < 3; ++c) {
    Vec3 d = Vec3::Zero();
    d[c] = h;
    lap += psi_ball(p + d, k1) + psi_ball(p - d, k1);
  }
  CHECK(std::abs(lap / (h * h) + k1 * k1 * psi_ball(p, k1)) < 1e-5);
  // odd in x3
  CHECK(psi_ball(Vec3(0.1, 0.2, -0.3), k1) == doctest::Approx(-psi_ball(Vec3(0.1, 0.2, 0.3), k1)));
}

TEST_CASE("bisection") {
  const double r = bisect([](double x) { return x * x - 2; }, 0, 2);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1; }, 0, 2), Error);
}
