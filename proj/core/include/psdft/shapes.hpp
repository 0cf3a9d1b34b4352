#pragma once

#include "psdft/grid2d.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace psdft {

/// A discretized subdomain used for intersection quadrature: Cartesian
/// points with quadrature weights. Weights at nodes mapped to infinity are
/// infinite; kernel evaluation decides whether such summands vanish.
struct Shape {
  std::string label;
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts;
  Vector w;

  int size() const { return static_cast<int>(w.size()); }
};

// Polar patches with a periodic angular variable. M Chebyshev points in the
// non-periodic direction, 2M equispaced points in the periodic one.
Shape shape_disk(double R, int M);                             // D1, doubled radius
Shape shape_annulus_exterior(double R, double L, int M);       // D2
Shape shape_annulus(double R_in, double R_out, int M);         // D3

// Spherical patches. S1 integrates over the sphere surface of radius R
// (measure R^2 sin(theta), invariance in the third coordinate assumed);
// S2 is its projection onto the plane (measure R^2 sin^2(theta) sin(psi)),
// covering the disk of radius R once with the square-root edge behavior
// absorbed in the parameterization.
Shape shape_sphere_surface(double R, double theta1, double theta2, int M);  // S1
Shape shape_sphere_projection(double R, double theta1, double theta2, int M);  // S2

// Exterior-annulus pieces clipped by the line y2 = -h (h > 0): the upper
// half-plane part (P1), the two lobes between the circle and the line for
// h < R (P2+/P2-), and the full lower region for h >= R (P3).
Shape shape_exterior_upper(double R, double L, int M);                  // P1
Shape shape_exterior_lobe(double R, double L, double h, int sign, int M);  // P2+/-
Shape shape_exterior_lower(double R, double L, double h, int M);        // P3

// Finite-annulus pieces clipped by the line y2 = -h: the lobes where the
// line cuts between the two radii (P4+/-), the central region below the
// inner circle for h between the radii (P5), and the part where the full
// radial segment lies above the line (P6).
Shape shape_annulus_lobe(double R_in, double R_out, double h, int sign, int M);  // P4+/-
Shape shape_annulus_bottom(double R_in, double R_out, double h, int M);          // P5
Shape shape_annulus_arc(double R_in, double R_out, double h, int M);             // P6

// Plumbing patches for kernels living on full 2D supports (no wall):
// the circle of radius R with line measure R dphi, and an axis-aligned
// rectangle with tensor Chebyshev quadrature.
Shape shape_ring(double R, int M);
Shape shape_rect(double a, double b, double c, double d, int M);

enum class SupportKind {
  SphereSurface,    // {|r| = R} in 3D, reduced by invariance
  Disk,             // {|r| <= R}, square-root kernels (projected sphere)
  AnnulusExterior,  // {|r| >= R}
  AnnulusFinite,    // {R_in <= |r| <= R_out}
  Circle,           // {|r| = R} in 2D (hard-disk shell)
  DiskFull,         // {|r| <= R} in 2D, smooth kernels
  Everything        // all of R^2
};

struct SupportSpec {
  SupportKind kind = SupportKind::Disk;
  double R = 0.0;
  double R_in = 0.0, R_out = 0.0;
};

/// Union of shapes covering the intersection of a kernel support with the
/// half-space {y2 > -offset}; offset = +inf selects the full support.
struct Intersection {
  SupportSpec support;
  double offset = kInf;
  std::vector<Shape> pieces;

  int total_points() const;
};

/// Assemble the case analysis for the supported kinds. `L` is the map
/// length for unbounded radial directions. Offsets below the lower
/// threshold yield an empty piece list.
Intersection assemble_intersection(const SupportSpec& support, double offset, int M,
                                   double L = 1.0);

/// CSV export (y1,y2,weight per row) for visual inspection.
void write_csv(std::ostream& os, const Shape& s);
void write_csv(std::ostream& os, const Intersection& in);

}  // namespace psdft
