#include "psdft/domain_map.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psdft {

DomainMap1D DomainMap1D::identity_scale(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("identity_scale: scale must be positive");
  DomainMap1D m;
  m.kind_ = MapKind::IdentityScale;
  m.p1_ = c;
  m.lo_ = -c;
  m.hi_ = c;
  return m;
}

DomainMap1D DomainMap1D::affine(double a, double b) {
  if (!(b > a)) throw std::invalid_argument("affine: need b > a");
  DomainMap1D m;
  m.kind_ = MapKind::Affine;
  m.p1_ = a;
  m.p2_ = b;
  m.lo_ = a;
  m.hi_ = b;
  return m;
}

DomainMap1D DomainMap1D::algebraic_infinite(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("algebraic_infinite: L must be positive");
  DomainMap1D m;
  m.kind_ = MapKind::AlgebraicInfinite;
  m.p1_ = L;
  m.lo_ = -kInf;
  m.hi_ = kInf;
  return m;
}

DomainMap1D DomainMap1D::algebraic_semi(double L) {
  if (!(L > 0.0)) throw std::invalid_argument("algebraic_semi: L must be positive");
  DomainMap1D m;
  m.kind_ = MapKind::AlgebraicSemi;
  m.p1_ = L;
  m.lo_ = 0.0;
  m.hi_ = kInf;
  return m;
}

DomainMap1D DomainMap1D::algebraic_finite_skew(double a, double b, double L) {
  if (!std::isfinite(b)) {
    DomainMap1D m = algebraic_semi(L);
    m.kind_ = MapKind::AlgebraicFiniteSkew;
    m.p1_ = a;
    m.p2_ = kInf;
    m.p3_ = L;
    m.lo_ = a;
    m.hi_ = kInf;
    return m;
  }
  if (!(b > a)) throw std::invalid_argument("algebraic_finite_skew: need b > a");
  if (!(L > 0.0 && L < 0.5 * (b - a)))
    throw std::invalid_argument("algebraic_finite_skew: need 0 < L < (b-a)/2");
  DomainMap1D m;
  m.kind_ = MapKind::AlgebraicFiniteSkew;
  m.p1_ = a;
  m.p2_ = b;
  m.p3_ = L;
  m.lo_ = a;
  m.hi_ = b;
  return m;
}

double DomainMap1D::forward(double x) const {
  switch (kind_) {
    case MapKind::IdentityScale:
      return p1_ * x;
    case MapKind::Affine:
      return p1_ + 0.5 * (p2_ - p1_) * (x + 1.0);
    case MapKind::AlgebraicInfinite: {
      if (x >= 1.0) return kInf;
      if (x <= -1.0) return -kInf;
      return p1_ * x / std::sqrt(1.0 - x * x);
    }
    case MapKind::AlgebraicSemi: {
      if (x >= 1.0) return kInf;
      return p1_ * (1.0 + x) / (1.0 - x);
    }
    case MapKind::AlgebraicFiniteSkew: {
      if (!std::isfinite(p2_)) {
        if (x >= 1.0) return kInf;
        return p1_ + p3_ * (1.0 + x) / (1.0 - x);
      }
      const double e = 2.0 * p3_ / ((p2_ - p1_) - 2.0 * p3_);
      return p1_ + (p2_ - p1_) * 0.5 * e * (1.0 + x) / (1.0 - x + e);
    }
  }
  return 0.0;
}

double DomainMap1D::derivative(double x) const {
  switch (kind_) {
    case MapKind::IdentityScale:
      return p1_;
    case MapKind::Affine:
      return 0.5 * (p2_ - p1_);
    case MapKind::AlgebraicInfinite: {
      const double u = 1.0 - x * x;
      if (u <= 0.0) return kInf;
      return p1_ / (u * std::sqrt(u));
    }
    case MapKind::AlgebraicSemi: {
      const double u = 1.0 - x;
      if (u <= 0.0) return kInf;
      return 2.0 * p1_ / (u * u);
    }
    case MapKind::AlgebraicFiniteSkew: {
      if (!std::isfinite(p2_)) {
        const double u = 1.0 - x;
        if (u <= 0.0) return kInf;
        return 2.0 * p3_ / (u * u);
      }
      const double e = 2.0 * p3_ / ((p2_ - p1_) - 2.0 * p3_);
      const double u = 1.0 - x + e;
      return (p2_ - p1_) * 0.5 * e * (2.0 + e) / (u * u);
    }
  }
  return 0.0;
}

double DomainMap1D::inverse(double y) const {
  switch (kind_) {
    case MapKind::IdentityScale:
      return y / p1_;
    case MapKind::Affine:
      return 2.0 * (y - p1_) / (p2_ - p1_) - 1.0;
    case MapKind::AlgebraicInfinite: {
      if (std::isinf(y)) return y > 0 ? 1.0 : -1.0;
      return y / std::sqrt(p1_ * p1_ + y * y);
    }
    case MapKind::AlgebraicSemi: {
      if (std::isinf(y)) return 1.0;
      return (y - p1_) / (y + p1_);
    }
    case MapKind::AlgebraicFiniteSkew: {
      if (!std::isfinite(p2_)) {
        if (std::isinf(y)) return 1.0;
        const double t = y - p1_;
        return (t - p3_) / (t + p3_);
      }
      const double e = 2.0 * p3_ / ((p2_ - p1_) - 2.0 * p3_);
      const double c = (p2_ - p1_) * 0.5 * e;
      const double t = y - p1_;
      return (t * (1.0 + e) - c) / (t + c);
    }
  }
  return 0.0;
}

std::string DomainMap1D::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case MapKind::IdentityScale: os << "scale(" << p1_ << ")"; break;
    case MapKind::Affine: os << "affine[" << p1_ << "," << p2_ << "]"; break;
    case MapKind::AlgebraicInfinite: os << "alg_inf(L=" << p1_ << ")"; break;
    case MapKind::AlgebraicSemi: os << "alg_semi(L=" << p1_ << ")"; break;
    case MapKind::AlgebraicFiniteSkew:
      os << "alg_skew[" << p1_ << "," << p2_ << ",L=" << p3_ << "]";
      break;
  }
  return os.str();
}

MappedGrid1D make_mapped_grid(Grid1D grid, DomainMap1D map) {
  MappedGrid1D g;
  g.grid = std::move(grid);
  g.map = map;
  const int n = g.grid.n_points();
  g.phys_nodes.resize(n);
  g.map_deriv.resize(n);
  g.phys_quad_weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = g.grid.nodes[k];
    g.phys_nodes[k] = g.map.forward(x);
    g.map_deriv[k] = g.map.derivative(x);
    g.phys_quad_weights[k] = g.grid.quad_weights[k] * g.map_deriv[k];
  }
  return g;
}

double quadrature(const Vector& values, const MappedGrid1D& g) {
  if (values.size() != g.n_points())
    throw std::invalid_argument("quadrature: value count does not match grid");
  double s = 0.0;
  for (int k = 0; k < g.n_points(); ++k) {
    const double w = g.phys_quad_weights[k];
    const double v = values[k];
    if (!std::isfinite(w)) {
      if (v == 0.0) continue;  // excess integrand vanishing at infinity
      throw std::runtime_error("quadrature: non-finite weighted summand at node " +
                               std::to_string(k));
    }
    const double term = w * v;
    if (!std::isfinite(term))
      throw std::runtime_error("quadrature: non-finite weighted summand at node " +
                               std::to_string(k));
    s += term;
  }
  return s;
}

Vector interpolation_row(const MappedGrid1D& g, double target) {
  if (g.grid.kind == NodeKind::Singleton) return Vector::Ones(1);
  const double tol = 1e-12 * std::max(1.0, std::abs(target));
  if (std::isfinite(target)) {
    if (target < g.map.lower() - tol || target > g.map.upper() + tol) {
      std::ostringstream os;
      os << "interpolation target " << target << " outside domain ["
         << g.map.lower() << "," << g.map.upper() << "]";
      throw std::invalid_argument(os.str());
    }
  } else {
    if ((target > 0 && !std::isinf(g.map.upper())) ||
        (target < 0 && !std::isinf(g.map.lower())))
      throw std::invalid_argument("interpolation target at infinity on a bounded domain");
  }
  const double x = std::clamp(g.map.inverse(target), -1.0, 1.0);
  return barycentric_row(g.grid, x);
}

Matrix interpolation_matrix(const MappedGrid1D& g, const Vector& targets) {
  Matrix M(targets.size(), g.n_points());
  for (int i = 0; i < targets.size(); ++i) M.row(i) = interpolation_row(g, targets[i]).transpose();
  return M;
}

Matrix differentiation_matrix(const MappedGrid1D& g) {
  Matrix D = computational_diff_matrix(g.grid);
  for (int i = 0; i < g.n_points(); ++i) {
    const double d = g.map_deriv[i];
    if (std::isfinite(d) && d != 0.0)
      D.row(i) /= d;
    else
      D.row(i).setZero();
  }
  return D;
}

}  // namespace psdft
