#pragma once

#include "psdft/chebyshev.hpp"

#include <array>
#include <stdexcept>

namespace psdft {

/// Rosenfeld hard-sphere free-energy density as a function of the full
/// weighted-density tuple (n0, n1, n2, n3, v1, v2). All species share one
/// radius, so n0, n1, v1 are fixed multiples of n2, v2; the Reduced form
/// below folds that in and is what the solvers use.
struct HsWeights {
  double n0 = 0, n1 = 0, n2 = 0, n3 = 0;
  double v1x = 0, v1y = 0, v2x = 0, v2y = 0;
};

struct HsDerivs {
  double phi = 0;
  double dn0 = 0, dn1 = 0, dn2 = 0, dn3 = 0;
  double dv1x = 0, dv1y = 0, dv2x = 0, dv2y = 0;
};

HsDerivs hs_free_energy_density(const HsWeights& n);

/// Reduced hard-sphere potential in the independent set (n2, n3, v2) for
/// common radius R. Second partials feed the Newton scheme.
struct HsReduced {
  double phi = 0;
  double dn2 = 0, dn3 = 0, dvx = 0, dvy = 0;
  // second partials
  double d_n2n2 = 0, d_n2n3 = 0, d_n3n3 = 0;
  double d_n2vx = 0, d_n2vy = 0, d_n3vx = 0, d_n3vy = 0;
  double d_vxvx = 0, d_vxvy = 0, d_vyvy = 0;
};

HsReduced hs_reduced(double R, double n2, double n3, double vx, double vy);

/// Hard-disk free-energy density in (n0, n2, n3, v, T) with the tensor
/// stored as (T11, T12, T22); the reduced form folds n0 = n2/(2 pi R).
struct HdReduced {
  double phi = 0;
  double dn2 = 0, dn3 = 0;
  double dvx = 0, dvy = 0;
  double dt11 = 0, dt12 = 0, dt22 = 0;
};

HdReduced hd_reduced(double R, double n2, double n3, double vx, double vy, double t11,
                     double t12, double t22);

struct PackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace psdft
