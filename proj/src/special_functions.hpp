#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace crackwave {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec2 = Eigen::Vector2cd;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Background wavenumber k0 and frequency scale t; the kernels see k = t * k0.
/// k0 == 0 is accepted as the static (Laplace) limit.
struct WaveContext {
  double k0 = 1.0;
  double t = 1.0;

  double k() const { return t * k0; }
  void validate() const;
};

/// Reflection across the top plane: (y1, y2, y3) -> (y1, y2, -y3).
inline Vec3 mirror(const Vec3& y) { return {y[0], y[1], -y[2]}; }
/// Reflection across the top line of the 2D half-plane.
inline Vec2 mirror(const Vec2& y) { return {y[0], -y[1]}; }

// --- Radial profiles of the fundamental solutions -------------------------

/// Value and first two radial derivatives of a radial kernel G(R).
struct RadialKernel {
  cplx g;
  cplx dg;
  cplx d2g;
};

/// e^{ikR} / (4 pi R) and its radial derivatives.
RadialKernel radial_kernel_3d(double k, double r);
/// (i/4) H0(kR) (or -ln R / 2 pi when k == 0) and its radial derivatives.
RadialKernel radial_kernel_2d(double k, double r);

// --- Green functions -------------------------------------------------------

cplx phi_free(double k, const Vec3& x, const Vec3& y);
cplx phi_free(const WaveContext& ctx, const Vec3& x, const Vec3& y);

/// Neumann Green function of the lower half-space: phi_free(x, y) + phi_free(x, mirror(y)).
cplx greens_halfspace(const WaveContext& ctx, const Vec3& x, const Vec3& y);

/// Gradient of greens_halfspace with respect to the source point y.
CVec3 grad_greens_halfspace(const WaveContext& ctx, const Vec3& x, const Vec3& y);

/// Gradient of phi_free with respect to the source point y.
CVec3 grad_y_phi_free(double k, const Vec3& x, const Vec3& y);

// --- Spherical Bessel functions ------------------------------------------

double j1(double x);
double dj1(double x);

/// Spherical Bessel j_l and its derivative for small non-negative l.
double sph_j(int l, double x);
double sph_dj(int l, double x);

/// First `count` positive roots of d/dx j_l, bracketed on a 0.1 grid and bisected.
std::vector<double> zeros_of_dj(int l, int count);

/// Bisection on a sign-changing bracket until the bracket stops shrinking or is below `tol`.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14);

// --- Cylindrical Bessel / Hankel ------------------------------------------

struct Hankel01 {
  cplx h0;  // J0 + i Y0
  cplx h1;  // J1 + i Y1
};

/// Hankel functions of the first kind, orders 0 and 1, for x > 0.
Hankel01 hankel01(double x);
cplx hankel0_h1(double x);

/// Switch point between the power series and the asymptotic expansion.
inline constexpr double kHankelSeriesLimit = 12.0;

// --- Ball eigenfunction -----------------------------------------------------

/// j1(k1 |p|) * p3 / |p|, the odd Neumann eigenfunction of the unit ball when k1 is a root of dj1.
double psi_ball(const Vec3& p, double k1);

/// First positive root of dj1 (computed once).
double first_dj1_zero();

}  // namespace crackwave
