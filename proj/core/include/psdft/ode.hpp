#pragma once

#include "psdft/chebyshev.hpp"

#include <functional>
#include <vector>

namespace psdft {

/// Semi-explicit DAE in residual form: rows with mass 1 are differential
/// (rhs returns dy/dt), rows with mass 0 are algebraic constraints (rhs
/// returns the constraint residual, driven to zero each step).
struct OdeSystem {
  int n = 0;
  std::function<void(double t, const Vector& y, Vector& f)> rhs;
  std::function<void(double t, const Vector& y, Matrix& J)> jacobian;
  Vector mass;  // diagonal, entries 0 or 1
};

struct OdeOptions {
  double rtol = 1e-6;
  double atol = 1e-9;
  double h_init = 1e-4;
  double h_min = 1e-13;
  double h_max = 0.5;
  int max_steps = 500000;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<Vector> y;
  int steps = 0;
  int jacobian_evals = 0;
  int lu_factorizations = 0;
};

/// Adaptive variable-step BDF(1,2) with modified Newton and reused
/// factorizations; dense output by quadratic interpolation at the
/// requested sample times (which must be increasing, starting at t0).
OdeTrajectory integrate_implicit(const OdeSystem& sys, double t0, Vector y0,
                                 const std::vector<double>& sample_times,
                                 const OdeOptions& opt);

}  // namespace psdft
