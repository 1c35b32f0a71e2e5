#include "quadrature.hpp"

#include <cmath>

#include "errors.hpp"

namespace crackwave {

namespace {

void add_orbit3(std::vector<TriPoint>& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.push_back({{a, a, b}, w});
  r.push_back({{a, b, a}, w});
  r.push_back({{b, a, a}, w});
}

void add_orbit6(std::vector<TriPoint>& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  r.push_back({{a, b, c}, w});
  r.push_back({{a, c, b}, w});
  r.push_back({{b, a, c}, w});
  r.push_back({{b, c, a}, w});
  r.push_back({{c, a, b}, w});
  r.push_back({{c, b, a}, w});
}

std::vector<TriPoint> build(int n) {
  std::vector<TriPoint> r;
  switch (n) {
    case 1:
      r.push_back({{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0});
      break;
    case 3:
      add_orbit3(r, 1.0 / 6, 1.0 / 3);
      break;
    case 6:  // Dunavant degree 4
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 12:  // Dunavant degree 6
      add_orbit3(r, 0.249286745170910, 0.116786275726379);
      add_orbit3(r, 0.063089014491502, 0.050844906370207);
      add_orbit6(r, 0.310352451033784, 0.053145049844817, 0.082851075618374);
      break;
    default:
      fail(ErrorKind::invalid_argument, "triangle rule must have 1, 3, 6 or 12 points");
  }
  return r;
}

}  // namespace

const std::vector<TriPoint>& triangle_rule(int points) {
  static const std::vector<TriPoint> r1 = build(1), r3 = build(3), r6 = build(6), r12 = build(12);
  switch (points) {
    case 1: return r1;
    case 3: return r3;
    case 6: return r6;
    case 12: return r12;
    default: fail(ErrorKind::invalid_argument, "triangle rule must have 1, 3, 6 or 12 points");
  }
}

std::vector<LinePoint> gauss_legendre(int n) {
  require(n >= 1 && n <= 64, ErrorKind::invalid_argument, "Gauss-Legendre order must be in [1, 64]");
  std::vector<LinePoint> out(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    out[i] = {0.5 * (1.0 - x), 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

}  // namespace crackwave
