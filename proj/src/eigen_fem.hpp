#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "geometry.hpp"

namespace crackwave {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 stiffness and mass on the whole node set, plus the nodes held at zero.
struct FemOperators {
  SparseMatrix K;
  SparseMatrix M;
  std::vector<int> dirichlet;  // symmetry-line nodes
  bool radial_weight = false;
};

FemOperators assemble(const Mesh2D& mesh);

struct EigenSolveOptions {
  double tol = 1e-10;
  int max_iterations = 500;
  int block = 4;
};

struct EigenPair {
  double mu2 = 0;
  Eigen::VectorXd phi;  // nodal values; zero on Dirichlet nodes
  Mesh2D mesh;
  double err_estimate = -1;  // |mu2(h/2) - mu2(h/4)| from cusp_eigenpair, -1 if not computed
  double residual = 0;       // |K phi - mu2 M phi| / |mu2 M phi|
  int iterations = 0;

  double mu() const;
  bool half() const { return !mesh.symmetry_nodes().empty(); }
};

/// Smallest positive generalized eigenvalue of K x = mu2 M x on the non-Dirichlet nodes. Without
/// Dirichlet nodes the constant mode is deflated. phi is scaled so the integral of phi^2 over the
/// full (oddly extended) domain is 1, and its largest-magnitude entry is positive.
EigenPair smallest_eigenpair(const FemOperators& ops, const Mesh2D& mesh, const EigenSolveOptions& opt = {});

/// Eigenpair on the half cusp domain at h, h/2, h/4; returns the finest one with its error estimate.
EigenPair cusp_eigenpair(const CuspDomainSpec& spec, double h, const EigenSolveOptions& opt = {});

/// Rayleigh quotient phi^T K phi / phi^T M phi.
double rayleigh_quotient(const FemOperators& ops, const Eigen::VectorXd& phi);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> integrals;  // I(R) over the full domain
  double slope = 0;               // least-squares slope of log I vs log R
  std::vector<double> alphas;
  std::vector<double> weighted;   // W(alpha) = integral of sigma^(-2 alpha) phi^2
};

/// Cusp at (-1, 0) for planar meshes, at r = 1 for radial ones.
DecayReport decay_report(const EigenPair& pair, const std::vector<double>& radii, const std::vector<double>& alphas);

/// Value of the (oddly extended) eigenfunction at p, or nullopt outside the mesh.
std::optional<double> interpolate(const EigenPair& pair, const Vec2& p);

}  // namespace crackwave
