#pragma once

#include <array>
#include <vector>

namespace crackwave {

/// Point of a triangle rule in barycentric coordinates; weights sum to 1.
struct TriPoint {
  std::array<double, 3> bary;
  double weight;
};

/// Symmetric triangle rules with 1, 3, 6 or 12 points (degree 1, 2, 4, 6).
const std::vector<TriPoint>& triangle_rule(int points);

struct LinePoint {
  double s;  // in [0, 1]
  double weight;
};

/// Gauss-Legendre rule on [0, 1].
std::vector<LinePoint> gauss_legendre(int n);

}  // namespace crackwave
