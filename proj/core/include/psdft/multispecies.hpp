#pragma once

#include "psdft/convolution.hpp"
#include "psdft/solver.hpp"

namespace psdft {

/// Canonical multi-species solves: per-species chemical potentials are
/// adjusted in an outer Newton-style loop so each species carries a fixed
/// particle number.
struct MixtureResult {
  CompositeGrid2D grid;
  std::vector<Vector> n;
  std::vector<double> mu;
  std::vector<double> mass;
  int outer_iterations = 0;
  bool converged = false;
};

/// Soft particles repelling through Gaussian pair potentials inside a
/// hard-walled square box, confined by a quadratic trap.
struct SoftMixtureOptions {
  int n = 50;           // collocation points per direction
  double box = 10.0;
  std::vector<double> alpha = {0.5, 1.0, 1.5};  // effective diameters
  std::vector<double> particles = {20.0, 20.0, 20.0};
  double T = 1.0;
  double trap_strength = 2.0;
  double trap_x = 8.0, trap_y = 7.0;
  int M = 20;
  SolverConfig solver;
  double mass_tol = 1e-8;
  int max_outer = 60;
};

MixtureResult solve_soft_mixture(const SoftMixtureOptions& opt, OperatorCache& cache);

/// Two hard-disk species in an unbounded plane with a weak confining
/// background and per-species Gaussian wells.
struct HardDiskMixtureOptions {
  int n = 40;
  double L = 4.0;
  double R = 0.5;
  double T = 1.0;
  double particles = 10.0;  // per species
  int M = 10;
  SolverConfig solver;
  double mass_tol = 1e-8;
  int max_outer = 60;
};

MixtureResult solve_hard_disk_mixture(const HardDiskMixtureOptions& opt,
                                      OperatorCache& cache);

/// Interpolate a solved field onto an equispaced probe grid (for
/// resolution studies); returns row-major values.
Vector probe_field(const CompositeGrid2D& grid, const Vector& values, double a, double b,
                   double c, double d, int nx, int ny);

}  // namespace psdft
