#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "geometry.hpp"

namespace crackwave {

/// Per-vertex complex jump density, linearly interpolated over cells.
struct DensityField {
  std::vector<cplx> values;
};

void validate(const DensityField& g, std::size_t vertex_count);
/// Largest |g| over the listed vertices (e.g. a crack's boundary loop).
double max_abs_on(const DensityField& g, const std::vector<int>& vertices);

struct QuadratureConfig {
  int order = 6;               // triangle rule: 1, 3, 6 or 12 points
  double near_threshold = 3.0; // subdivide while dist < threshold * cell diameter
  int max_depth = 8;
  int line_order = 8;          // Gauss-Legendre points per 2D segment

  void validate() const;
};

enum class KernelKind { halfspace, free_space };

struct FieldSamples {
  std::vector<Vec3> points;    // 2D samples use (x1, x2, 0)
  std::vector<cplx> values;
  std::vector<CVec3> gradients;  // empty unless requested

  bool has_gradients() const { return !gradients.empty(); }
};

/// Double-layer kernel d/dn_y G(x, y) for a unit normal n at y, and its x-gradient.
cplx double_layer_kernel_3d(double k, const Vec3& x, const Vec3& y, const Vec3& n, KernelKind kind);
CVec3 double_layer_kernel_grad_3d(double k, const Vec3& x, const Vec3& y, const Vec3& n, KernelKind kind);

/// u(x) = sum over cells of the integral of dG/dn_y(x, y) g(y); jumps by +g when crossing
/// the surface in the direction of its normal.
FieldSamples eval_double_layer_3d(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                  const std::vector<Vec3>& pts, const QuadratureConfig& q = {},
                                  KernelKind kind = KernelKind::halfspace);

/// As eval_double_layer_3d, with the analytic x-gradient.
FieldSamples eval_double_layer_grad_3d(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                       const std::vector<Vec3>& pts, const QuadratureConfig& q = {},
                                       KernelKind kind = KernelKind::halfspace);

/// Linear map from vertex densities to field values: rows = points, columns = vertices.
Eigen::MatrixXcd double_layer_matrix_3d(const CrackMesh& mesh, const WaveContext& ctx, const std::vector<Vec3>& pts,
                                        const QuadratureConfig& q = {}, KernelKind kind = KernelKind::halfspace);

/// 2D analog with kernel (i/4)[H0(k|x-y|) + H0(k|x-ybar|)] (ybar mirrored across x2 = 0).
FieldSamples eval_double_layer_2d(const Curve2D& curve, const DensityField& g, const WaveContext& ctx,
                                  const std::vector<Vec2>& pts, const QuadratureConfig& q = {}, bool gradients = false,
                                  KernelKind kind = KernelKind::halfspace);

/// Distance from a point to a triangle.
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double distance_to_mesh(const CrackMesh& mesh, const Vec3& p);
double distance_to_curve(const Curve2D& curve, const Vec2& p);

struct JumpEstimate {
  cplx value;
  double error_estimate = 0;
  bool converged = false;
  std::vector<cplx> samples;  // raw two-sided differences, one per epsilon
};

/// Richardson (polynomial) extrapolation to eps = 0 of u(x + eps n) - u(x - eps n).
JumpEstimate jump_probe(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx, const Vec3& surface_point,
                        const Vec3& n, const std::vector<double>& eps_list, const QuadratureConfig& q = {});

struct NormalDerivativeJump {
  JumpEstimate jump;
  double gradient_scale = 0;  // max |grad u| over the probe points
};

/// Extrapolated du/dn(x + eps n) - du/dn(x - eps n).
NormalDerivativeJump normal_derivative_jump_probe(const CrackMesh& mesh, const DensityField& g, const WaveContext& ctx,
                                                  const Vec3& surface_point, const Vec3& n,
                                                  const std::vector<double>& eps_list, const QuadratureConfig& q = {});

/// Neville extrapolation of samples f(eps_i) to eps = 0; returns value and |last - previous| estimate.
std::pair<cplx, double> extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& f);

using Field3 = std::function<cplx(const Vec3&)>;
using Field2 = std::function<cplx(const Vec2&)>;

/// 7-point finite-difference (Delta + k^2) u at pt. When `avoid` is given the stencil must stay
/// farther than 2h from it.
cplx helmholtz_residual(const Field3& u, const WaveContext& ctx, const Vec3& pt, double h,
                        const CrackMesh* avoid = nullptr);
/// 5-point analog in the plane.
cplx helmholtz_residual(const Field2& u, const WaveContext& ctx, const Vec2& pt, double h,
                        const Curve2D* avoid = nullptr);

}  // namespace crackwave
