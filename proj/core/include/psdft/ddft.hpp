#pragma once

#include "psdft/ode.hpp"
#include "psdft/solver.hpp"

namespace psdft {

/// Adiabatic dynamics on top of an equilibrium problem's operators.
/// Overdamped: dn/dt = div[ n grad(T log n + mu_ex + V) ].
/// Inertial:   dn/dt = -div(n v),
///             dv/dt = -(v.grad)v - gamma v - grad(T log n + mu_ex + V).
///
/// Two discretizations of the driving gradient are available. The log form
/// differentiates u = T log n + mu_ex + V directly: equilibrium states are
/// then exact fixed points (u is constant at the nodes), but V must be
/// bounded and the density bounded away from zero. The flux form
/// T grad n + n grad(mu_ex) + n grad V stays regular for unbounded trap
/// potentials and vanishing densities; grad V is supplied analytically.
class DdftSystem {
 public:
  struct TimePotential {
    std::function<double(double y1, double y2, double t)> v;
    std::function<double(double y1, double y2, double t)> dv_dy1;  // may be null
    std::function<double(double y1, double y2, double t)> dv_dy2;
  };

  DdftSystem(std::shared_ptr<FluidProblem> prob, bool inertial, double gamma,
             TimePotential pot, bool log_form = false);

  int state_size() const;
  int n_nodes() const { return nd_; }
  bool inertial() const { return inertial_; }

  Vector pack(const Vector& n) const;  // zero initial velocity
  Vector density_part(const Vector& y) const { return y.head(nd_); }

  OdeSystem ode() const;

  /// Instantaneous flux components at the grid nodes.
  void flux(double t, const Vector& y, Vector& j1, Vector& j2) const;

  const FluidProblem& problem() const { return *prob_; }

 private:
  std::shared_ptr<FluidProblem> prob_;
  bool inertial_ = false;
  bool log_form_ = false;
  double gamma_ = 2.0;
  TimePotential pot_;
  int nd_ = 0;
  Matrix d1_, d2_;
  std::vector<int> wall_rows_;    // boundary nodes with a no-flux constraint
  std::vector<int> normal_axis_;  // 1 or 2 per wall row
  std::vector<int> frozen_rows_;  // Dirichlet-pinned nodes held fixed in time

  void rhs(double t, const Vector& y, Vector& f) const;
  void jac(double t, const Vector& y, Matrix& J) const;
  Vector grad_vext(double t, int axis) const;
  Vector sampled_vext(double t) const;
};

/// Mass bookkeeping over a rectangular subdomain: m(t) by interpolated
/// quadrature, dm/dt by finite differences of the samples, boundary flux by
/// edge quadrature of the interpolated flux.
struct MassLedger {
  std::vector<double> t, m, dm_dt, flux_in, err_rate;
  double max_err_rate = 0;
};

struct Rect {
  double a, b, c, d;  // [a,b] x [c,d]
};

MassLedger mass_audit(const DdftSystem& sys, const OdeTrajectory& traj, const Rect& box,
                      int quad_points = 40);

/// Total mass over the full grid (closed-box conservation checks).
double total_mass(const FluidProblem& prob, const Vector& n);

}  // namespace psdft
