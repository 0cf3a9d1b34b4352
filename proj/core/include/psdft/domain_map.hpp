#pragma once

#include "psdft/chebyshev.hpp"

#include <limits>
#include <string>

namespace psdft {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MapKind {
  IdentityScale,       // y = c x
  Affine,              // [-1,1] -> [a,b]
  AlgebraicInfinite,   // y = L x / sqrt(1-x^2), [-1,1] -> [-inf,inf]
  AlgebraicSemi,       // y = L (1+x)/(1-x),     [-1,1] -> [0,inf]
  AlgebraicFiniteSkew  // y = a + (b-a)(e/2)(1+x)/(1-x+e), e = 2L/((b-a)-2L)
};

/// Monotone map from the computational interval [-1,1] to a physical
/// interval, together with its derivative and inverse. The algebraic maps
/// place half the collocation points inside [-L,L] (whole line) or [0,L]
/// (half line); the finite-skew variant does the same inside [a,a+L].
class DomainMap1D {
 public:
  DomainMap1D() = default;  // unit identity scale
  static DomainMap1D identity_scale(double c);
  static DomainMap1D affine(double a, double b);
  static DomainMap1D algebraic_infinite(double L);
  static DomainMap1D algebraic_semi(double L);
  // b may be +inf, in which case the map degenerates to a + algebraic_semi(L).
  static DomainMap1D algebraic_finite_skew(double a, double b, double L);

  MapKind kind() const { return kind_; }
  double forward(double x) const;
  double derivative(double x) const;
  double inverse(double y) const;
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  bool unbounded() const { return !std::isfinite(lo_) || !std::isfinite(hi_); }

  std::string describe() const;

 private:
  MapKind kind_ = MapKind::IdentityScale;
  double p1_ = 1.0, p2_ = 0.0, p3_ = 0.0;
  double lo_ = -1.0, hi_ = 1.0;
};

/// Collocation grid pushed through a domain map: physical node positions
/// and quadrature weights w_k * Y'(x_k). Weights at nodes mapped to
/// infinity are infinite; quadrature() applies the convention that a
/// weighted summand with vanishing integrand contributes zero there.
struct MappedGrid1D {
  Grid1D grid;
  DomainMap1D map;
  Vector phys_nodes;
  Vector map_deriv;
  Vector phys_quad_weights;

  int n_points() const { return grid.n_points(); }
};

MappedGrid1D make_mapped_grid(Grid1D grid, DomainMap1D map);

/// Integrate nodal values over the mapped interval. Summands at infinite
/// nodes must vanish (the integrand is expected to be an excess quantity);
/// a non-finite summand raises an error.
double quadrature(const Vector& values, const MappedGrid1D& g);

/// Dense interpolation matrix from the grid nodes onto physical targets.
/// Rows reproduce polynomials in the computational variable exactly; a
/// target coinciding with a node yields the corresponding unit row.
/// Targets outside the physical interval raise an error naming the target.
Matrix interpolation_matrix(const MappedGrid1D& g, const Vector& targets);
Vector interpolation_row(const MappedGrid1D& g, double target);

/// Physical-domain differentiation matrix, diag(1/Y') * D. Rows at nodes
/// mapped to infinity are zero (derivatives of decaying profiles vanish).
Matrix differentiation_matrix(const MappedGrid1D& g);

}  // namespace psdft
