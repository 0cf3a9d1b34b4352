#pragma once

#include "psdft/domain_map.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace psdft {

struct Point2 {
  double y1, y2;
};

/// Support of the represented field, used to clip kernel supports when
/// assembling convolution intersections.
struct SupportRegion {
  enum class Kind { HalfSpace, Plane, Box };
  Kind kind = Kind::Plane;
  double y2min = 0.0;                    // HalfSpace: {y2 > y2min}
  double a = 0, b = 0, c = 0, d = 0;     // Box: [a,b] x [c,d]
};

/// Tensor-product collocation patch. Points are stored in block order with
/// the second index fastest: flat index i = i1 * n2 + i2.
struct Grid2D {
  MappedGrid1D g1, g2;
  Vector w;  // n1*n2 quadrature weights (infinite at unbounded nodes)

  int n1() const { return g1.n_points(); }
  int n2() const { return g2.n_points(); }
  int size() const { return n1() * n2(); }
  Point2 point(int i) const {
    return {g1.phys_nodes[i / n2()], g2.phys_nodes[i % n2()]};
  }

  /// Interpolation row of length size() for an arbitrary physical target.
  Vector interp_row(double y1, double y2) const;

  /// Physical-domain partial derivative operators (dense, size x size).
  Matrix d1() const;
  Matrix d2() const;

  /// Vector of nodal values of a function f(y1,y2); non-finite nodes are
  /// assigned the supplied limit value.
  template <typename F>
  Vector sample(F&& f, double limit_value = 0.0) const {
    Vector v(size());
    for (int i = 0; i < size(); ++i) {
      const Point2 p = point(i);
      if (std::isfinite(p.y1) && std::isfinite(p.y2))
        v[i] = f(p.y1, p.y2);
      else
        v[i] = limit_value;
    }
    return v;
  }
};

Grid2D make_tensor_grid(MappedGrid1D g1, MappedGrid1D g2);

/// One or more tensor patches covering a domain, with dispatch on y2 for
/// interpolation (the slit strip + shifted half-space pair of the weighted
/// density discretization). A plain grid is a composite with one part.
struct CompositeGrid2D {
  std::vector<Grid2D> parts;
  std::vector<std::array<double, 2>> y2_ranges;  // dispatch range per part
  std::vector<int> offsets;                      // column offset per part
  SupportRegion support;
  std::uint64_t id = 0;

  int size() const { return offsets.empty() ? 0 : offsets.back() + parts.back().size(); }
  int n_parts() const { return static_cast<int>(parts.size()); }
  int part_for_y2(double y2) const;
  Point2 point(int i) const;
  double weight(int i) const;

  /// Full-length interpolation row (columns outside the owning part are 0).
  Vector interp_row(double y1, double y2) const;

  template <typename F>
  Vector sample(F&& f, double limit_value = 0.0) const {
    Vector v(size());
    int off = 0;
    for (const auto& p : parts) {
      v.segment(off, p.size()) = p.sample(f, limit_value);
      off += p.size();
    }
    return v;
  }
};

CompositeGrid2D make_composite(std::vector<Grid2D> parts, SupportRegion support);

/// Integrate nodal values over the composite domain (0*inf convention for
/// excess integrands at unbounded nodes, as in the 1D quadrature).
double quadrature_excess(const CompositeGrid2D& g, const Vector& values);
double quadrature_excess(const Grid2D& g, const Vector& values);

/// Half-space {y2 > 0} discretized with the whole-line map in y1 and the
/// half-line map in y2. n1 = 1 collapses the wall-parallel direction for
/// planar problems.
CompositeGrid2D halfspace_grid(int n1, int n2, double L1, double L2);

/// Weighted-density discretization for a hard wall with particle radius R:
/// a strip covering y2 in [-R, R] (with an explicit grid line at y2 = R,
/// where weighted densities lose differentiability) plus a half-space
/// shifted upward by R. The strip point count in y2 is the next even
/// integer >= n2/3.
CompositeGrid2D composite_weighted_density_grid(int n1, int n2, double L1, double L2,
                                                double R = 0.5);
int strip_point_count(int n2);

/// Bounded box [a,b] x [c,d] with affine maps.
CompositeGrid2D box_grid(int n1, int n2, double a, double b, double c, double d);

/// Unbounded plane with whole-line maps in both directions.
CompositeGrid2D plane_grid(int n1, int n2, double L1, double L2);

/// Whole line in y2 only (n1 = 1), for free 1D interfaces.
CompositeGrid2D line_grid(int n2, double L);

}  // namespace psdft
