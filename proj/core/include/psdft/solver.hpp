#pragma once

#include "psdft/convolution.hpp"
#include "psdft/thermo.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace psdft {

/// Single-species model for wall and interface problems: hard-sphere FMT
/// excess plus optional mean-field attraction, bounded external potential,
/// chemical potential mu. All quantities dimensionless.
struct FluidSpec {
  double T = 1.0;
  double R = 0.5;
  bool hard_sphere = true;
  bool attraction = false;
  double r_c = 2.5;
  double mu = 0.0;
  std::function<double(double, double)> v_ext;  // bounded part; may be null

  BulkModel bulk() const;
};

struct SolverConfig {
  enum class Scheme { Picard, Newton } scheme = Scheme::Picard;
  double lambda_init = 0.01;
  double lambda_final = 0.2;   // Picard ramps up after lambda_switch_iter
  int lambda_switch_iter = 50;
  double newton_lambda_init = 0.5;
  int newton_full_step_after = 10;
  int max_iter = 20000;
  double tol = 1e-9;  // max-norm of the Euler-Lagrange residual
};

struct IterationReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residuals;
  double final_residual = 0;
};

struct WeightedDensities {
  Vector n2, n3, vx, vy;  // on the weighted-density grid
};

/// Euler-Lagrange system for one species in the z = T log(n) variable on a
/// fixed geometry. Hard walls are encoded by the grids themselves (the
/// density grid covers only the admissible region); the weighted densities
/// live on their own composite grid extending a radius past the wall.
class FluidProblem {
 public:
  FluidProblem(FluidSpec spec, CompositeGrid2D density_grid, CompositeGrid2D wd_grid,
               OperatorCache& cache, int M_fmt, int M_attr);

  const FluidSpec& spec() const { return spec_; }
  const CompositeGrid2D& grid() const { return density_; }
  const CompositeGrid2D& wd_grid() const { return wd_; }

  Vector density_of(const Vector& z) const;  // n = exp(z / T)
  Vector z_of_density(const Vector& n) const;

  WeightedDensities weighted(const Vector& n) const;
  Vector residual(const Vector& z) const;

  /// Relaxed fixed-point iteration on z; lambda schedule per config.
  IterationReport picard(Vector& z, const SolverConfig& cfg) const;

  /// Newton iteration with the weighted densities as explicit unknowns,
  /// analytic Jacobian from the second partials and the operators.
  IterationReport newton(Vector& z, const SolverConfig& cfg) const;

  /// Dirichlet closure: z is held at the given values at these density
  /// points (identity rows in Newton, re-imposed each Picard sweep).
  void pin(std::vector<int> nodes, Vector values);
  const std::vector<int>& pinned_nodes() const { return pin_nodes_; }

  /// Excess grand potential per unit wall area relative to bulk at mu
  /// (reference density per point; constant for wall problems, two-sided
  /// for a free interface with a dividing point at y = 0).
  double grand_potential_excess(const Vector& z, const Vector& n_ref) const;

  /// Initial state: bulk density modulated by the external Boltzmann
  /// factor, capped below the packing bound.
  Vector initial_z(double n_bulk) const;

  Vector external_potential() const { return v_ext_; }
  double mu() const { return spec_.mu; }

  const ConvolutionOperator& op_attr() const { return *attr_; }
  const ConvolutionOperator& op_w2() const { return *w2_; }
  const ConvolutionOperator& op_w3() const { return *w3_; }
  const ConvolutionOperator& op_vw2() const { return *vw2_; }
  /// Excess chemical potential field given density (reverse convolutions).
  Vector excess_mu(const Vector& n) const;
  /// d(excess_mu)/dn as a dense matrix (used by the dynamics Jacobian).
  Matrix excess_mu_jacobian(const Vector& n) const;
  double hs_excess_free_energy(const Vector& n) const;

 private:
  FluidSpec spec_;
  CompositeGrid2D density_, wd_;
  std::shared_ptr<const ConvolutionOperator> w2_, w3_, vw2_, w2r_, w3r_, vw2r_, attr_;
  Vector v_ext_;
  std::vector<int> pin_nodes_;
  Vector pin_values_;

  void apply_pins(Vector& z) const;
  struct Partials {
    Vector s2, s3, svx, svy;  // first partials of the reduced potential
  };
  Partials partials(const WeightedDensities& w) const;
};

/// 1D planar interfaces. Returns the converged problem, state and tension.
struct PlanarResult {
  std::shared_ptr<FluidProblem> problem;
  Vector z;
  IterationReport report;
  double surface_tension = 0;
  double contact_density = 0;  // density at the wall node (wall cases)
};

enum class PlanarKind { HardSphereWall, WallLiquid, WallVapor, LiquidVapor };

struct PlanarOptions {
  int n2 = 60;
  double L1 = 2.0, L2 = 2.0;
  double n_bulk = 0.7151;       // hard-sphere wall case
  double T = 0.75;              // attractive cases
  double r_c = 2.5;
  double eps_w = 0.865;
  SolverConfig solver;
  int M_fmt = -1, M_attr = -1;  // default 20 + N/4 and 20 + N/2
};

PlanarResult planar_interface_1d(PlanarKind kind, const PlanarOptions& opt,
                                 OperatorCache& cache);

/// Interpolated profile of a 1D solve along its y2 axis (liquid-vapor
/// profiles are recentered so the mean density crossing sits at 0).
struct Profile1D {
  std::shared_ptr<FluidProblem> problem;
  Vector n;
  double center = 0.0;
  double operator()(double y) const;
  double n_minus() const;  // limit at -inf
  double n_plus() const;
};
Profile1D profile_of(const PlanarResult& r, bool recenter = false);

/// 2D contact line at angle theta with Dirichlet closure above y2max given
/// by the tilted 1D liquid-vapor profile.
struct ContactLineOptions {
  int n = 30;                 // points per direction
  double L1 = 4.0, L2 = 2.0;
  double T = 0.75;
  double r_c = 2.5;
  double eps_w = 0.865;
  double theta = 1.5707963267948966;  // radians
  double y2max = 25.0;
  SolverConfig solver;
  int M_fmt = -1, M_attr = -1;
};

struct ContactLineResult {
  std::shared_ptr<FluidProblem> problem;
  Vector z;
  IterationReport report;
  Coexistence coex;
  double gamma_lv = 0;
  Profile1D lv_profile;
};

ContactLineResult contact_line_2d(const ContactLineOptions& opt, OperatorCache& cache);

}  // namespace psdft
