#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "layer_potentials.hpp"
#include "optimize.hpp"

namespace crackwave {

/// Planar rectangular crack: center + s a e1 + t b e2 with (e1, e2) = R (x, y), R = Ry(tilt2) Rx(tilt1).
/// Density = sum over p, q <= m of c_pq sin(p pi (s+1)/2) sin(q pi (t+1)/2).
struct PlanarCrackParams {
  Vec3 center{0, 0, -2};
  double tilt1 = 0;
  double tilt2 = 0;
  double a = 0.5;
  double b = 0.5;
  int m = 2;
  std::vector<cplx> coeffs;  // m * m, index (q-1) * m + (p-1)
  int n1 = 8;                // mesh cells per axis
  int n2 = 8;

  std::pair<Vec3, Vec3> axes() const;
  Eigen::Matrix<double, 7, 1> geometry() const;
  void set_geometry(const Eigen::Matrix<double, 7, 1>& x);
  CrackMesh mesh() const;
  /// Vertex values of the basis functions (vertices x m^2).
  Eigen::MatrixXd basis() const;
  DensityField density() const;
  void validate() const;
};

/// Field of the crack at V (top-plane points).
FieldSamples forward_map(const PlanarCrackParams& p, const WaveContext& ctx, const std::vector<Vec3>& V,
                         const QuadratureConfig& q = {});

/// Columns: field of each basis density at V.
Eigen::MatrixXcd forward_matrix(const PlanarCrackParams& p, const WaveContext& ctx, const std::vector<Vec3>& V,
                                const QuadratureConfig& q = {});

struct DensityFit {
  std::vector<cplx> coeffs;
  double residual = 0;      // |A c - d|
  double rel_residual = 0;  // |A c - d| / |d| (0 when d = 0)
  double sigma_min = 0;
  double sigma_max = 0;
  bool ill_posed = false;   // sigma_min / sigma_max below the rank tolerance
};

/// Least squares min |A c - d| via SVD of the forward matrix.
DensityFit fit_density(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& d, double rank_tol = 1e-12);
DensityFit fit_density(const PlanarCrackParams& geometry, const WaveContext& ctx, const std::vector<Vec3>& V,
                       const std::vector<cplx>& data, const QuadratureConfig& q = {});

struct Observation {
  WaveContext ctx;
  std::vector<cplx> data;
};

struct InversionSpec {
  std::vector<Vec3> V;
  std::vector<Observation> observations;  // one per frequency; densities are fitted per frequency
  int budget = 4000;
  std::uint64_t seed = 42;
  double noise = 0;
};

/// Joint relative misfit sqrt(sum |r_f|^2 / sum |d_f|^2) after eliminating the densities.
double projected_misfit(const InversionSpec& spec, const PlanarCrackParams& geometry,
                        std::vector<std::vector<cplx>>* coeffs = nullptr);

struct GeometryFit {
  PlanarCrackParams params;  // coefficients from the first observation
  std::vector<std::vector<cplx>> coeffs;
  double misfit = 0;
  std::vector<double> history;
  int evals = 0;
  bool budget_exhausted = false;
  std::uint64_t seed = 42;
  int budget = 0;
};

GeometryFit fit_geometry(const InversionSpec& spec, const PlanarCrackParams& init);

/// Truth moved by a relative amount `rel` per geometry parameter with seeded random signs (angles
/// shift by `rel` radians).
PlanarCrackParams perturbed_init(const PlanarCrackParams& truth, double rel, std::uint64_t seed);

/// Adds complex Gaussian noise of relative RMS level `level` to data.
std::vector<cplx> add_noise(const std::vector<cplx>& data, double level, std::uint64_t seed);

/// Uniform n x n grid on the top plane over [-w, w]^2.
std::vector<Vec3> plane_grid(int n, double half_width);

// --- Frequency sweep ---------------------------------------------------------

/// Density channels on the two cracks: column j of g1 is matched against the one-dimensional
/// family spanned by column j of g2.
struct SweepSpec {
  CrackMesh crack1, crack2;
  Eigen::MatrixXcd g1, g2;  // vertices x channels
  double k0 = 1;
  std::vector<double> t_grid;
  std::vector<Vec3> V;
  QuadratureConfig q;
  std::vector<double> predicted;  // bad set to compare against (may be empty)
};

struct SweepDip {
  double t;
  double iota;
  int channel;
};

struct SweepResult {
  std::vector<double> t;
  std::vector<double> iota;                  // min over channels
  std::vector<std::vector<double>> channel;  // [channel][t]
  std::vector<SweepDip> dips;
  std::vector<double> predicted;
  std::vector<double> nearest_predicted;  // per t; NaN when no prediction
  std::vector<double> dist_to_predicted;
  bool degenerate = false;
};

SweepResult frequency_sweep(const SweepSpec& spec);

/// Hemisphere pair of radius s centered at (0, 0, -2s) with Legendre channels P_l(cos theta),
/// l <= lmax, and the predicted bad set {t : t k0 s is a zero of d/dx j_l, l <= lmax}.
SweepSpec sphere_sweep_spec(double s, double k0, int n_refine, int lmax, const std::vector<double>& t_grid,
                            int grid_n, double grid_half_width);

/// Local minima of a channel that sit at most `depth` times below the channel maximum within
/// `window` on either side; located by a V-shaped (|t - z|) fit through the three nearest samples.
std::vector<SweepDip> find_dips(const std::vector<double>& t, const std::vector<double>& iota, int channel,
                                double depth = 0.25, double window = 0.5);

}  // namespace crackwave
