#pragma once

#include "psdft/shapes.hpp"

#include <functional>
#include <string>
#include <vector>

namespace psdft {

/// Bare attractive pair potential (hard core plus Lennard-Jones tail, in
/// units of the tail depth): 0 inside the core, 4(r^-12 - r^-6) up to the
/// cutoff, 0 beyond.
double phi_attr(double r, double r_c);

/// eps_D / eps for cutoff radius r_c: the energy rescaling that keeps the
/// dimensionless bulk phase diagram independent of the cutoff.
double energy_scale_ratio(double r_c);

/// Planar projection of the attractive tail (energy per length, in eps_D
/// units, i.e. scaled by eps/eps_D). The small-r branch is evaluated by a
/// series: the closed form loses ~10 digits to cancellation below r ~ 0.5.
double phi2d_attr(double r, double r_c);

/// Planar projection of the unit step on a ball: 2 sqrt(R^2 - r^2).
double phi2d_omega3(double r, double R);

/// Soft repulsion 2 exp(-r^2/sigma^2).
double gaussian_pair(double r, double sigma);

/// A convolution kernel: one or more support pieces, each evaluating the
/// reflected kernel chi(-yhat) at patch points. Shell kernels (delta on a
/// sphere or circle) evaluate the smooth prefactor only; the singular
/// measure is carried by the patch quadrature.
struct KernelPiece {
  SupportSpec support;
  std::function<void(double y1, double y2, double* out)> eval;
};

struct Kernel {
  std::string name;
  int ncomp = 1;
  std::vector<KernelPiece> pieces;
};

// Hard-sphere weights (3D, reduced to the plane by invariance).
Kernel kernel_hs_w2(double R);
Kernel kernel_hs_w3(double R);
Kernel kernel_hs_vw2(double R, bool reversed);

// Hard-disk weights (intrinsically 2D).
Kernel kernel_hd_w2(double R);
Kernel kernel_hd_w3(double R);
Kernel kernel_hd_v2(double R, bool reversed);
Kernel kernel_hd_t2(double R);  // symmetric tensor, components (11,12,22)

// Mean-field attraction (projected), split into the core disk and the tail
// annulus; r_c = inf gives the unbounded tail.
Kernel kernel_attraction(double r_c);

// Soft Gaussian repulsion on the full plane.
Kernel kernel_gaussian(double sigma);

}  // namespace psdft
