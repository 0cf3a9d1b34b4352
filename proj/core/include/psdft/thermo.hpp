#pragma once

#include "psdft/free_energy.hpp"

#include <optional>

namespace psdft {

/// Uniform-limit thermodynamics of the model: ideal gas + hard-sphere (or
/// hard-disk) excess + mean-field attraction. Energies are in eps_D units,
/// densities in sigma^-3 (sigma^-2 for disks).
struct BulkModel {
  double T = 1.0;
  double R = 0.5;
  enum class Excess { None, HardSphere, HardDisk } excess = Excess::HardSphere;
  bool attraction = false;
  double r_c = 2.5;  // only sets the integrated-strength bookkeeping

  /// Integral of the dimensionless attractive kernel: -(32/9) pi when on.
  double mean_field_integral() const;

  double f(double n) const;         // Helmholtz free-energy density
  double mu(double n) const;        // analytic d f / d n
  double pressure(double n) const;  // n mu - f
  double dmu_dn(double n) const;

  double max_density() const;  // packing bound n3 < 1

  /// Invert mu(n) = mu_target on the requested branch (0 = lowest-density
  /// root, 1 = highest). Throws when no root lies in (0, max_density).
  double density_from_mu(double mu_target, int branch = 0) const;
};

struct Coexistence {
  double mu_sat = 0;
  double n_vap = 0, n_liq = 0;
  double p_sat = 0;
};

/// Saturated liquid-vapor coexistence: equal pressure and chemical
/// potential, residuals below 1e-10. Throws above the critical point.
Coexistence coexistence(const BulkModel& model);

}  // namespace psdft
