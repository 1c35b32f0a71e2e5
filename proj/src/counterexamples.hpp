#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eigen_fem.hpp"
#include "layer_potentials.hpp"

namespace crackwave {

/// Two cracks closing into one surface (or curve) with densities that are traces of one
/// eigenfunction; their fields agree outside the enclosed region.
struct CounterexampleInstance {
  std::string tag;  // sphere, cusp2d, axisym
  int dim = 3;
  CrackMesh crack1, crack2;  // dim 3
  Curve2D curve1, curve2;    // dim 2
  DensityField g1, g2;
  WaveContext ctx;
  double scale = 1.0;  // length scale s of the enclosed region
  int refinement = -1; // sphere refinement level
  double h = 0;        // eigen mesh size for cusp instances (finest level)
  double a = 1.0;      // cusp flattening
  std::optional<EigenPair> eigen;
  double orientation = 1.0;  // u2 - u1 equals orientation * eigenfunction inside

  /// Eigenfunction in physical coordinates (zero outside the enclosed region).
  double eigenfunction(const Vec3& x) const;
  /// Roles of the two cracks exchanged.
  CounterexampleInstance swapped() const;
};

/// Hemispheres of radius s = k1/k centered at (0, 0, -2s); k = k1 (s = 1) by default.
CounterexampleInstance build_sphere_instance(std::optional<double> target_k, int n_refine);
CounterexampleInstance build_cusp2d_instance(double a, double h);
CounterexampleInstance build_axisym_instance(double h, int n_theta);

struct ObservationGrid {
  int n = 41;
  double half_width = 4.0;  // in units of the instance scale
};

struct GapReport {
  std::string instance;
  double rel_gap_u = 0;
  double rel_gap_grad = 0;
  double interior_residual = 0;
  double exterior_residual = 0;
  int refinement = -1;
  double h = 0;
  double sup_u = 0;
  bool degenerate = false;
};

/// Observation points on the top plane (or line) for an instance.
std::vector<Vec3> top_plane_points(const CounterexampleInstance& inst, const ObservationGrid& grid);

/// Fields (with gradients) of both cracks on the observation grid.
struct TopFields {
  FieldSamples u1, u2;
};

TopFields top_fields(const CounterexampleInstance& inst, const ObservationGrid& grid = {}, const QuadratureConfig& q = {});

GapReport cauchy_gap(const CounterexampleInstance& inst, const ObservationGrid& grid = {}, const QuadratureConfig& q = {});
GapReport cauchy_gap(const CounterexampleInstance& inst, const TopFields& top, const QuadratureConfig& q = {});

/// Copy of the instance with g2 scaled by (1 + fraction) on the vertices of the listed cells
/// (segments in 2D).
CounterexampleInstance perturb_g2(const CounterexampleInstance& inst, const std::vector<int>& cells, double fraction);

/// Cells of crack2 that descend from one cell of the unrefined hemisphere.
std::vector<int> root_cell_family(const CounterexampleInstance& inst, int root);

/// Smallest ratio, over cells of either crack farther than `layer` (times the crack diameter) from
/// its boundary, of the cell RMS density to the crack RMS density.
double min_support_ratio(const CounterexampleInstance& inst, double layer);

}  // namespace crackwave
