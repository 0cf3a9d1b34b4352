#pragma once

#include "psdft/solver.hpp"

namespace psdft {

/// Contact-theorem bookkeeping for a planar wall profile: the density at
/// the wall must equal beta p plus beta times the wall-potential integral.
struct SumRuleReport {
  double contact_density = 0;
  double beta_p = 0;
  double wall_integral = 0;      // beta * int n dV/dy2
  double relative_error = 0;     // defect over beta p
  double relative_error_contact = 0;  // defect over the contact density
};

SumRuleReport contact_theorem_check(const FluidProblem& prob, const Vector& z,
                                    double n_bulk,
                                    const std::function<double(double)>& dv_dy2 = {});

/// Disjoining pressure along the wall for a 2D profile:
/// Pi(y1) = -int_0^inf n dV/dy2 dy2 + T n(y1, 0) - p.
struct DisjoiningPressure {
  Vector y1;   // finite wall-parallel node positions
  Vector Pi;
  double p_bulk = 0;
};

DisjoiningPressure disjoining_pressure(const FluidProblem& prob, const Vector& z,
                                       double p_bulk,
                                       const std::function<double(double)>& dv_dy2);

/// Normal force balance across the contact line. The far-field plateaus
/// are averaged over the outermost tenth of nodes on each side; the
/// integral runs over {|Pi| > 2 max|Pi_pm|}.
struct ForceBalance {
  double delta_pi = 0;     // max |far-field plateau|
  double integral = 0;     // int Pi dy1 over the thresholded region
  double relative_error = 0;  // |1 + integral / (gamma_lv sin theta)|
};

ForceBalance normal_force_balance(const DisjoiningPressure& dp, double gamma_lv,
                                  double theta);

/// Young angle from the three tensions; throws outside partial wetting.
double young_angle(double gamma_wv, double gamma_wl, double gamma_lv);

}  // namespace psdft
