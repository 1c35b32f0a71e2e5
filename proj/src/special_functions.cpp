#include "special_functions.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace crackwave {

namespace {

constexpr cplx kI{0.0, 1.0};

// Below these arguments the closed forms lose digits to cancellation.
constexpr double kJ1SeriesLimit = 1.0;

double sph_j_series(int l, double x, bool derivative) {
  // j_l(x) = x^l / (2l+1)!! * sum_m (-x^2/2)^m / (m! (2l+3)(2l+5)...(2l+2m+1))
  double dfact = 1.0;
  for (int i = 3; i <= 2 * l + 1; i += 2) dfact *= i;
  const double z = -0.5 * x * x;
  double coef = 1.0;  // z^m / (m! prod)
  double sum = 0.0, dsum = 0.0;
  for (int m = 0; m < 60; ++m) {
    if (m > 0) coef *= z / (m * (2.0 * l + 2.0 * m + 1.0));
    // d/dx [x^(l+2m)] = (l+2m) x^(l+2m-1)
    sum += coef;
    dsum += coef * (l + 2 * m);
    if (std::abs(coef) < 1e-18 * std::abs(sum) && m > 2) break;
  }
  if (!derivative) return std::pow(x, l) / dfact * sum;
  if (l == 0 && x == 0.0) return 0.0;
  return std::pow(x, l - 1) / dfact * dsum;
}

double series_limit(int l) { return l <= 1 ? kJ1SeriesLimit : static_cast<double>(l); }

}  // namespace

void WaveContext::validate() const {
  require(std::isfinite(k0) && k0 >= 0.0, ErrorKind::invalid_argument, "wavenumber k0 must be finite and >= 0");
  require(std::isfinite(t) && t > 0.0, ErrorKind::invalid_argument, "frequency scale t must be > 0");
}

RadialKernel radial_kernel_3d(double k, double r) {
  const cplx e = std::exp(kI * (k * r)) / (4.0 * kPi);
  const cplx ikr = kI * (k * r);
  return {e / r, e * (ikr - 1.0) / (r * r), e * (-(k * r) * (k * r) - 2.0 * ikr + 2.0) / (r * r * r)};
}

RadialKernel radial_kernel_2d(double k, double r) {
  if (k == 0.0) {
    return {cplx(-std::log(r) / (2.0 * kPi)), cplx(-1.0 / (2.0 * kPi * r)), cplx(1.0 / (2.0 * kPi * r * r))};
  }
  const double z = k * r;
  const Hankel01 h = hankel01(z);
  const cplx dh1 = h.h0 - h.h1 / z;
  return {0.25 * kI * h.h0, -0.25 * kI * k * h.h1, -0.25 * kI * k * k * dh1};
}

cplx phi_free(double k, const Vec3& x, const Vec3& y) {
  const double r = (x - y).norm();
  require(r > 0.0, ErrorKind::domain, "phi_free: coincident points");
  return std::exp(kI * (k * r)) / (4.0 * kPi * r);
}

cplx phi_free(const WaveContext& ctx, const Vec3& x, const Vec3& y) { return phi_free(ctx.k(), x, y); }

cplx greens_halfspace(const WaveContext& ctx, const Vec3& x, const Vec3& y) {
  return phi_free(ctx.k(), x, y) + phi_free(ctx.k(), x, mirror(y));
}

CVec3 grad_y_phi_free(double k, const Vec3& x, const Vec3& y) {
  const Vec3 d = x - y;
  const double r = d.norm();
  require(r > 0.0, ErrorKind::domain, "grad_y_phi_free: coincident points");
  const RadialKernel g = radial_kernel_3d(k, r);
  return (-g.dg / r) * d.cast<cplx>();
}

CVec3 grad_greens_halfspace(const WaveContext& ctx, const Vec3& x, const Vec3& y) {
  CVec3 direct = grad_y_phi_free(ctx.k(), x, y);
  // d/dy phi(x, My) = M grad_z phi(x, z) at z = My, M = diag(1, 1, -1)
  CVec3 image = grad_y_phi_free(ctx.k(), x, mirror(y));
  image[2] = -image[2];
  return direct + image;
}

double j1(double x) { return sph_j(1, x); }
double dj1(double x) { return sph_dj(1, x); }

double sph_j(int l, double x) {
  require(l >= 0 && l <= 20, ErrorKind::invalid_argument, "sph_j: order out of range");
  const double ax = std::abs(x);
  const double sign = (l % 2 == 1 && x < 0) ? -1.0 : 1.0;
  if (ax < series_limit(l)) return sign * sph_j_series(l, ax, false);
  const double s = std::sin(ax), c = std::cos(ax);
  double jm = s / ax;
  if (l == 0) return jm;
  double j = s / (ax * ax) - c / ax;
  for (int n = 1; n < l; ++n) {
    const double jn = (2.0 * n + 1.0) / ax * j - jm;
    jm = j;
    j = jn;
  }
  return sign * j;
}

double sph_dj(int l, double x) {
  require(l >= 0 && l <= 20, ErrorKind::invalid_argument, "sph_dj: order out of range");
  const double ax = std::abs(x);
  // j_l is even/odd as l is; its derivative has the opposite parity.
  const double sign = (l % 2 == 0 && x < 0) ? -1.0 : 1.0;
  if (ax < series_limit(l)) return sign * sph_j_series(l, ax, true);
  if (l == 0) return -sign * sph_j(1, ax);
  // j_l' = j_{l-1} - (l+1)/x j_l
  return sign * (sph_j(l - 1, ax) - (l + 1.0) / ax * sph_j(l, ax));
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require(flo * fhi < 0.0, ErrorKind::internal, "bisect: bracket does not change sign");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

std::vector<double> zeros_of_dj(int l, int count) {
  require(l >= 0 && l <= 3, ErrorKind::invalid_argument, "zeros_of_dj: order must be in {0,1,2,3}");
  require(count >= 1, ErrorKind::invalid_argument, "zeros_of_dj: count must be >= 1");
  auto f = [l](double x) { return sph_dj(l, x); };
  std::vector<double> roots;
  constexpr double step = 0.1;
  double a = step, fa = f(a);
  for (int i = 0; i < 100000 && static_cast<int>(roots.size()) < count; ++i) {
    const double b = a + step;
    const double fb = f(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if (fa * fb < 0.0) {
      roots.push_back(bisect(f, a, b, 1e-14));
    }
    a = b;
    fa = fb;
  }
  require(static_cast<int>(roots.size()) == count, ErrorKind::internal, "zeros_of_dj: bracketing failed");
  return roots;
}

Hankel01 hankel01(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "hankel: argument must be positive and finite, got " << x;
    fail(ErrorKind::domain, os.str());
  }
  if (x <= kHankelSeriesLimit) {
    using ld = long double;
    const ld xl = x;
    const ld q = xl * xl / 4.0L;
    ld term0 = 1.0L;    // q^m / (m!)^2
    ld term1 = 1.0L;    // q^m / (m! (m+1)!)
    ld j0 = 0.0L, j1s = 0.0L, ys0 = 0.0L, ys1 = 0.0L;
    ld harmonic = 0.0L;
    for (int m = 0; m < 80; ++m) {
      if (m > 0) {
        term0 *= q / (static_cast<ld>(m) * m);
        term1 *= q / (static_cast<ld>(m) * (m + 1));
        harmonic += 1.0L / m;
      }
      const ld sgn = (m % 2 == 0) ? 1.0L : -1.0L;
      j0 += sgn * term0;
      j1s += sgn * term1;
      if (m > 0) {
        // sum_{m>=1} (-1)^{m+1} H_m q^m/(m!)^2 and its q-derivative factor m q^{m-1}/(m!)^2
        ys0 += -sgn * harmonic * term0;
        ys1 += -sgn * harmonic * term0 * m / q;
      }
      if (m > 4 && term0 * (1.0L + harmonic) < 1e-22L * (1.0L + std::fabs(j0))) break;
    }
    const ld j1v = xl / 2.0L * j1s;
    const ld lg = std::log(xl / 2.0L) + static_cast<ld>(kEulerGamma);
    const ld two_pi = 2.0L / static_cast<ld>(kPi);
    const ld y0 = two_pi * (lg * j0 + ys0);
    const ld y1 = two_pi * (lg * j1v - j0 / xl) - two_pi * (xl / 2.0L) * ys1;
    return {cplx(static_cast<double>(j0), static_cast<double>(y0)),
            cplx(static_cast<double>(j1v), static_cast<double>(y1))};
  }
  // Hankel asymptotic expansion: H_nu(x) ~ sqrt(2/(pi x)) e^{i(x - nu pi/2 - pi/4)} sum_k i^k a_k(nu) / x^k
  auto expand = [x](int nu) {
    const double mu = 4.0 * nu * nu;
    cplx sum = 1.0;
    double ak = 1.0;
    cplx ik = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 60; ++k) {
      ak *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
      ik *= kI;
      if (std::abs(ak) > prev) break;
      sum += ik * ak;
      prev = std::abs(ak);
      if (prev < 1e-18) break;
    }
    const double phase = x - nu * kPi / 2.0 - kPi / 4.0;
    return std::sqrt(2.0 / (kPi * x)) * cplx(std::cos(phase), std::sin(phase)) * sum;
  };
  return {expand(0), expand(1)};
}

cplx hankel0_h1(double x) { return hankel01(x).h0; }

double psi_ball(const Vec3& p, double k1) {
  const double r = p.norm();
  if (r == 0.0) return 0.0;
  return j1(k1 * r) * (p[2] / r);
}

double first_dj1_zero() {
  static const double k1 = zeros_of_dj(1, 1).front();
  return k1;
}

}  // namespace crackwave
