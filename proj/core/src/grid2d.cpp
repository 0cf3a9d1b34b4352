#include "psdft/grid2d.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace psdft {

namespace {

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  h *= 1099511628211ULL;
  return h;
}

std::uint64_t hash_grid(const CompositeGrid2D& g) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : g.parts) {
    for (const auto* vec : {&p.g1.phys_nodes, &p.g2.phys_nodes}) {
      h = fnv_mix(h, vec->size());
      for (int i = 0; i < vec->size(); ++i) {
        std::uint64_t bits;
        double v = (*vec)[i];
        if (std::isinf(v)) v = (v > 0) ? 1e300 : -1e300;
        std::memcpy(&bits, &v, sizeof(bits));
        h = fnv_mix(h, bits);
      }
    }
  }
  return h;
}

}  // namespace

Grid2D make_tensor_grid(MappedGrid1D g1, MappedGrid1D g2) {
  Grid2D g;
  g.g1 = std::move(g1);
  g.g2 = std::move(g2);
  g.w.resize(g.size());
  for (int i1 = 0; i1 < g.n1(); ++i1)
    for (int i2 = 0; i2 < g.n2(); ++i2)
      g.w[i1 * g.n2() + i2] =
          g.g1.phys_quad_weights[i1] * g.g2.phys_quad_weights[i2];
  return g;
}

Vector Grid2D::interp_row(double y1, double y2) const {
  const Vector r1 = interpolation_row(g1, y1);
  const Vector r2 = interpolation_row(g2, y2);
  Vector row(size());
  for (int i1 = 0; i1 < n1(); ++i1)
    for (int i2 = 0; i2 < n2(); ++i2) row[i1 * n2() + i2] = r1[i1] * r2[i2];
  return row;
}

Matrix Grid2D::d1() const {
  const Matrix D = differentiation_matrix(g1);
  Matrix out = Matrix::Zero(size(), size());
  for (int i1 = 0; i1 < n1(); ++i1)
    for (int j1 = 0; j1 < n1(); ++j1)
      for (int i2 = 0; i2 < n2(); ++i2) out(i1 * n2() + i2, j1 * n2() + i2) = D(i1, j1);
  return out;
}

Matrix Grid2D::d2() const {
  const Matrix D = differentiation_matrix(g2);
  Matrix out = Matrix::Zero(size(), size());
  for (int i1 = 0; i1 < n1(); ++i1) out.block(i1 * n2(), i1 * n2(), n2(), n2()) = D;
  return out;
}

CompositeGrid2D make_composite(std::vector<Grid2D> parts, SupportRegion support) {
  CompositeGrid2D g;
  g.parts = std::move(parts);
  g.support = support;
  int off = 0;
  for (const auto& p : g.parts) {
    g.offsets.push_back(off);
    g.y2_ranges.push_back({p.g2.map.lower(), p.g2.map.upper()});
    off += p.size();
  }
  g.id = hash_grid(g);
  return g;
}

int CompositeGrid2D::part_for_y2(double y2) const {
  if (!std::isfinite(y2)) {
    for (int k = 0; k < n_parts(); ++k)
      if ((y2 > 0 && std::isinf(y2_ranges[k][1])) || (y2 < 0 && std::isinf(y2_ranges[k][0])))
        return k;
    throw std::invalid_argument("composite grid: no unbounded part for y2 at infinity");
  }
  // left-closed dispatch; the first matching part owns its upper edge
  for (int k = 0; k < n_parts(); ++k) {
    const double tol = 1e-12 * std::max(1.0, std::abs(y2));
    if (y2 >= y2_ranges[k][0] - tol && y2 <= y2_ranges[k][1] + tol) return k;
  }
  throw std::invalid_argument("composite grid: y2 = " + std::to_string(y2) +
                              " outside all parts");
}

Point2 CompositeGrid2D::point(int i) const {
  for (int k = n_parts() - 1; k >= 0; --k)
    if (i >= offsets[k]) return parts[k].point(i - offsets[k]);
  throw std::out_of_range("composite grid point index");
}

double CompositeGrid2D::weight(int i) const {
  for (int k = n_parts() - 1; k >= 0; --k)
    if (i >= offsets[k]) return parts[k].w[i - offsets[k]];
  throw std::out_of_range("composite grid weight index");
}

Vector CompositeGrid2D::interp_row(double y1, double y2) const {
  Vector row = Vector::Zero(size());
  const int k = part_for_y2(y2);
  row.segment(offsets[k], parts[k].size()) = parts[k].interp_row(y1, y2);
  return row;
}

double quadrature_excess(const Grid2D& g, const Vector& values) {
  if (values.size() != g.size())
    throw std::invalid_argument("quadrature_excess: size mismatch");
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double w = g.w[i];
    const double v = values[i];
    if (!std::isfinite(w)) {
      if (v == 0.0) continue;
      throw std::runtime_error("quadrature_excess: non-finite summand");
    }
    s += w * v;
  }
  return s;
}

double quadrature_excess(const CompositeGrid2D& g, const Vector& values) {
  double s = 0.0;
  int off = 0;
  for (const auto& p : g.parts) {
    s += quadrature_excess(p, values.segment(off, p.size()));
    off += p.size();
  }
  return s;
}

namespace {
MappedGrid1D axis(int n, DomainMap1D map) {
  if (n <= 1) return make_mapped_grid(singleton_grid(), DomainMap1D::identity_scale(1.0));
  return make_mapped_grid(cheb_lobatto_grid(n - 1), map);
}
}  // namespace

CompositeGrid2D halfspace_grid(int n1, int n2, double L1, double L2) {
  if (n2 < 2) throw std::invalid_argument("halfspace_grid: n2 must be >= 2");
  Grid2D g = make_tensor_grid(axis(n1, DomainMap1D::algebraic_infinite(L1)),
                              axis(n2, DomainMap1D::algebraic_semi(L2)));
  SupportRegion sup;
  sup.kind = SupportRegion::Kind::HalfSpace;
  sup.y2min = 0.0;
  return make_composite({std::move(g)}, sup);
}

int strip_point_count(int n2) {
  int m = static_cast<int>(std::ceil(n2 / 3.0));
  if (m % 2 != 0) ++m;
  return std::max(m, 4);
}

CompositeGrid2D composite_weighted_density_grid(int n1, int n2, double L1, double L2,
                                                double R) {
  const int nstrip = strip_point_count(n2);
  Grid2D strip = make_tensor_grid(axis(n1, DomainMap1D::algebraic_infinite(L1)),
                                  axis(nstrip, DomainMap1D::identity_scale(R)));
  Grid2D upper = make_tensor_grid(
      axis(n1, DomainMap1D::algebraic_infinite(L1)),
      axis(n2, DomainMap1D::algebraic_finite_skew(R, kInf, L2)));
  SupportRegion sup;
  sup.kind = SupportRegion::Kind::HalfSpace;
  sup.y2min = -R;
  return make_composite({std::move(strip), std::move(upper)}, sup);
}

CompositeGrid2D box_grid(int n1, int n2, double a, double b, double c, double d) {
  Grid2D g = make_tensor_grid(axis(n1, DomainMap1D::affine(a, b)),
                              axis(n2, DomainMap1D::affine(c, d)));
  SupportRegion sup;
  sup.kind = SupportRegion::Kind::Box;
  sup.a = a;
  sup.b = b;
  sup.c = c;
  sup.d = d;
  return make_composite({std::move(g)}, sup);
}

CompositeGrid2D plane_grid(int n1, int n2, double L1, double L2) {
  Grid2D g = make_tensor_grid(axis(n1, DomainMap1D::algebraic_infinite(L1)),
                              axis(n2, DomainMap1D::algebraic_infinite(L2)));
  SupportRegion sup;
  sup.kind = SupportRegion::Kind::Plane;
  return make_composite({std::move(g)}, sup);
}

CompositeGrid2D line_grid(int n2, double L) {
  Grid2D g = make_tensor_grid(axis(1, DomainMap1D::identity_scale(1.0)),
                              axis(n2, DomainMap1D::algebraic_infinite(L)));
  SupportRegion sup;
  sup.kind = SupportRegion::Kind::Plane;
  return make_composite({std::move(g)}, sup);
}

}  // namespace psdft
