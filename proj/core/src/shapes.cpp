#include "psdft/shapes.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace psdft {

namespace {

constexpr double kPi = std::numbers::pi;

struct Axis {
  Vector q;  // curvilinear coordinate values
  Vector w;  // quadrature weights including the map derivative
};

Axis cheb_axis(double a, double b, int M) {
  // affine [a,b]
  Grid1D g = cheb_lobatto_grid(std::max(M - 1, 1));
  Axis ax;
  ax.q.resize(g.n_points());
  ax.w.resize(g.n_points());
  for (int k = 0; k < g.n_points(); ++k) {
    ax.q[k] = a + 0.5 * (b - a) * (g.nodes[k] + 1.0);
    ax.w[k] = g.quad_weights[k] * 0.5 * (b - a);
  }
  return ax;
}

Axis semi_axis(double a, double L, int M) {
  // a + L(1+x)/(1-x), reaching infinity at x = 1
  Grid1D g = cheb_lobatto_grid(std::max(M - 1, 1));
  DomainMap1D m = DomainMap1D::algebraic_finite_skew(a, kInf, L);
  Axis ax;
  ax.q.resize(g.n_points());
  ax.w.resize(g.n_points());
  for (int k = 0; k < g.n_points(); ++k) {
    ax.q[k] = m.forward(g.nodes[k]);
    ax.w[k] = g.quad_weights[k] * m.derivative(g.nodes[k]);
  }
  return ax;
}

Axis skew_axis(double a, double b, double L, int M) {
  Grid1D g = cheb_lobatto_grid(std::max(M - 1, 1));
  DomainMap1D m = DomainMap1D::algebraic_finite_skew(a, b, L);
  Axis ax;
  ax.q.resize(g.n_points());
  ax.w.resize(g.n_points());
  for (int k = 0; k < g.n_points(); ++k) {
    ax.q[k] = m.forward(g.nodes[k]);
    ax.w[k] = g.quad_weights[k] * m.derivative(g.nodes[k]);
  }
  return ax;
}

Axis periodic_axis(double period, int n) {
  Grid1D g = periodic_grid(n);
  Axis ax;
  ax.q = g.nodes * period;
  ax.w = Vector::Constant(n, period / n);
  return ax;
}

Shape polar_shape(std::string label, const Axis& rad, const Axis& ang, double half = 1.0) {
  Shape s;
  s.label = std::move(label);
  const int n = static_cast<int>(rad.q.size() * ang.q.size());
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int ir = 0; ir < rad.q.size(); ++ir) {
    for (int ia = 0; ia < ang.q.size(); ++ia, ++i) {
      const double r = rad.q[ir];
      const double phi = ang.q[ia];
      s.pts(i, 0) = std::isfinite(r) ? r * std::cos(phi) : r * ((std::cos(phi) >= 0) ? 1 : -1);
      s.pts(i, 1) = std::isfinite(r) ? r * std::sin(phi) : r * ((std::sin(phi) >= 0) ? 1 : -1);
      s.w[i] = rad.w[ir] * ang.w[ia] * std::abs(r) * half;
    }
  }
  return s;
}

}  // namespace

// Quadrature weights for int_{-1}^{1} |x| p(x) dx over the Lobatto nodes,
// exact for interpolants: the plain product w_j |x_j| only converges
// algebraically because |x| kinks between nodes. Uses the Chebyshev
// expansion of the interpolant and the moments of |x| T_k.
static Vector abs_moment_weights(const Grid1D& g) {
  const int N = g.n_points() - 1;
  // mu_k = int |x| T_k(x) dx = 2 int_0^1 x T_k(x) dx (even k), 0 (odd k);
  // x T_k is a polynomial, integrated exactly by a large bounded rule
  Grid1D fine = cheb_lobatto_grid(N + 8);
  Vector mu = Vector::Zero(N + 1);
  for (int k = 0; k <= N; k += 2) {
    double acc = 0.0;
    for (int j = 0; j < fine.n_points(); ++j) {
      const double x = 0.5 * (fine.nodes[j] + 1.0);  // map to [0,1]
      acc += 0.5 * fine.quad_weights[j] * x * std::cos(k * std::acos(std::clamp(x, -1.0, 1.0)));
    }
    mu[k] = 2.0 * acc;
  }
  // nodal values -> Chebyshev coefficients: a_k = (2 d_k / N) sum_j d_j h_j cos(pi k j / N)
  Vector w(N + 1);
  for (int j = 0; j <= N; ++j) {
    const double dj = (j == 0 || j == N) ? 0.5 : 1.0;
    double acc = 0.0;
    for (int k = 0; k <= N; k += 2) {
      const double dk = (k == 0 || k == N) ? 0.5 : 1.0;
      acc += mu[k] * (2.0 * dk / N) * dj * std::cos(kPi * k * j / N);
    }
    w[j] = acc;
  }
  return w;
}

Shape shape_disk(double R, int M) {
  if (!(R > 0)) throw std::invalid_argument("shape_disk: R must be positive");
  int Mr = M + (M % 2);  // even radial count, nodes straddle the origin
  Grid1D g = cheb_lobatto_grid(Mr - 1);
  Axis rad;
  rad.q = g.nodes * R;
  rad.w = abs_moment_weights(g) * R * R;  // includes the |r| area factor
  Axis ang = periodic_axis(2.0 * kPi, 2 * M);
  Shape s;
  s.label = "D1";
  const int n = static_cast<int>(rad.q.size() * ang.q.size());
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int ir = 0; ir < rad.q.size(); ++ir)
    for (int ia = 0; ia < ang.q.size(); ++ia, ++i) {
      const double r = rad.q[ir], phi = ang.q[ia];
      s.pts(i, 0) = r * std::cos(phi);
      s.pts(i, 1) = r * std::sin(phi);
      // each Cartesian point appears twice under r -> -r, phi -> phi + pi
      s.w[i] = rad.w[ir] * ang.w[ia] * 0.5;
    }
  return s;
}

Shape shape_annulus_exterior(double R, double L, int M) {
  Axis rad = semi_axis(R, L, M);
  Axis ang = periodic_axis(2.0 * kPi, 2 * M);
  return polar_shape("D2", rad, ang);
}

Shape shape_annulus(double R_in, double R_out, int M) {
  if (!(R_out > R_in && R_in >= 0)) throw std::invalid_argument("shape_annulus: bad radii");
  Axis rad = cheb_axis(R_in, R_out, M);
  Axis ang = periodic_axis(2.0 * kPi, 2 * M);
  return polar_shape("D3", rad, ang);
}

Shape shape_sphere_surface(double R, double theta1, double theta2, int M) {
  if (!(R > 0) || !(theta2 > theta1))
    throw std::invalid_argument("shape_sphere_surface: bad parameters");
  Axis th = cheb_axis(theta1, theta2, M);
  Axis ps = periodic_axis(2.0 * kPi, 2 * M);
  Shape s;
  s.label = "S1";
  const int n = static_cast<int>(th.q.size() * ps.q.size());
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int it = 0; it < th.q.size(); ++it)
    for (int ip = 0; ip < ps.q.size(); ++ip, ++i) {
      const double theta = th.q[it], psi = ps.q[ip];
      s.pts(i, 0) = R * std::cos(psi) * std::sin(theta);
      s.pts(i, 1) = R * std::cos(theta);
      s.w[i] = th.w[it] * ps.w[ip] * R * R * std::sin(theta);
    }
  return s;
}

Shape shape_sphere_projection(double R, double theta1, double theta2, int M) {
  if (!(R > 0) || !(theta2 > theta1))
    throw std::invalid_argument("shape_sphere_projection: bad parameters");
  Axis th = cheb_axis(theta1, theta2, M);
  Axis ps = cheb_axis(0.0, kPi, M);
  Shape s;
  s.label = "S2";
  const int n = static_cast<int>(th.q.size() * ps.q.size());
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int it = 0; it < th.q.size(); ++it)
    for (int ip = 0; ip < ps.q.size(); ++ip, ++i) {
      const double theta = th.q[it], psi = ps.q[ip];
      s.pts(i, 0) = R * std::cos(psi) * std::sin(theta);
      s.pts(i, 1) = R * std::cos(theta);
      s.w[i] = th.w[it] * ps.w[ip] * R * R * std::sin(theta) * std::sin(theta) *
               std::sin(psi);
    }
  return s;
}

Shape shape_exterior_upper(double R, double L, int M) {
  Axis rad = semi_axis(R, L, M);
  Axis ang = cheb_axis(0.0, kPi, M);
  Shape s = polar_shape("P1", rad, ang);
  // clip tiny negative y2 from rounded angle endpoints
  for (int i = 0; i < s.size(); ++i)
    if (std::isfinite(s.pts(i, 1)) && std::abs(s.pts(i, 1)) < 1e-13 * std::abs(s.pts(i, 0)))
      s.pts(i, 1) = 0.0;
  return s;
}

namespace {

// Lobe and lower patches share the angle-dependent radial interval
// [R, h/|sin(phi)|], spread with the map length L_r = L(r_d-R)/(3L+r_d-R).
Shape clipped_exterior(std::string label, double R, double L, int M, double phi_lo,
                       double phi_hi, double h) {
  Grid1D ga = cheb_lobatto_grid(std::max(M - 1, 1));
  Grid1D gr = cheb_lobatto_grid(std::max(M - 1, 1));
  Shape s;
  s.label = std::move(label);
  const int n = gr.n_points() * ga.n_points();
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int ir = 0; ir < gr.n_points(); ++ir) {
    for (int ia = 0; ia < ga.n_points(); ++ia, ++i) {
      const double phi = phi_lo + 0.5 * (phi_hi - phi_lo) * (ga.nodes[ia] + 1.0);
      const double wa = ga.quad_weights[ia] * 0.5 * (phi_hi - phi_lo);
      const double sn = std::sin(phi);
      double rd = (std::abs(sn) > 1e-300) ? std::abs(h / sn) : kInf;
      if (rd <= R * (1.0 + 1e-14)) rd = R;  // degenerate edge
      double r, wr;
      if (rd <= R) {
        r = R;
        wr = 0.0;
      } else {
        const double Lr = std::isfinite(rd) ? L * (rd - R) / (3.0 * L + rd - R) : L;
        DomainMap1D m = DomainMap1D::algebraic_finite_skew(R, rd, std::min(Lr, 0.499 * (rd - R)));
        r = m.forward(gr.nodes[ir]);
        wr = gr.quad_weights[ir] * m.derivative(gr.nodes[ir]);
      }
      // points on the clip line y2 = -h land there exactly
      const double y2 = (std::isfinite(r) && std::abs(r - rd) < 1e-12 * rd && std::isfinite(rd))
                            ? -h
                            : r * sn;
      s.pts(i, 0) = std::isfinite(r) ? r * std::cos(phi) : r * ((std::cos(phi) >= 0) ? 1 : -1);
      s.pts(i, 1) = std::isfinite(r) ? y2 : ((sn >= 0) ? r : -r);
      s.w[i] = wr * wa * std::abs(std::isfinite(r) ? r : 0.0);
      if (!std::isfinite(r)) s.w[i] = kInf;
    }
  }
  return s;
}

}  // namespace

Shape shape_exterior_lobe(double R, double L, double h, int sign, int M) {
  if (!(h > 0 && h < R)) throw std::invalid_argument("shape_exterior_lobe: need 0 < h < R");
  const double dphi = std::asin(h / R);  // angular half-extent of the lobe
  if (sign < 0) return clipped_exterior("P2-", R, L, M, kPi, kPi + dphi, h);
  return clipped_exterior("P2+", R, L, M, 2.0 * kPi - dphi, 2.0 * kPi, h);
}

Shape shape_exterior_lower(double R, double L, double h, int M) {
  if (!(h >= R)) throw std::invalid_argument("shape_exterior_lower: need h >= R");
  return clipped_exterior("P3", R, L, M, kPi, 2.0 * kPi, h);
}

namespace {

Shape annulus_clip(std::string label, double R_in, double R_out, double h, int M,
                   double phi_lo, double phi_hi, bool radial_to_line) {
  Grid1D ga = cheb_lobatto_grid(std::max(M - 1, 1));
  Grid1D gr = cheb_lobatto_grid(std::max(M - 1, 1));
  Shape s;
  s.label = std::move(label);
  const int n = gr.n_points() * ga.n_points();
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int ir = 0; ir < gr.n_points(); ++ir) {
    for (int ia = 0; ia < ga.n_points(); ++ia, ++i) {
      const double phi = phi_lo + 0.5 * (phi_hi - phi_lo) * (ga.nodes[ia] + 1.0);
      const double wa = ga.quad_weights[ia] * 0.5 * (phi_hi - phi_lo);
      double rmax = R_out;
      if (radial_to_line) {
        const double sn = std::sin(phi);
        rmax = (std::abs(sn) > 1e-300) ? std::abs(h / sn) : kInf;
        rmax = std::min(rmax, R_out);
        rmax = std::max(rmax, R_in);
      }
      const double dr = rmax - R_in;
      const double r = R_in + 0.5 * dr * (gr.nodes[ir] + 1.0);
      const double wr = gr.quad_weights[ir] * 0.5 * dr;
      double y2 = r * std::sin(phi);
      if (radial_to_line && std::abs(r - rmax) < 1e-12 * std::max(1.0, rmax) && rmax < R_out)
        y2 = -h;
      s.pts(i, 0) = r * std::cos(phi);
      s.pts(i, 1) = y2;
      s.w[i] = wr * wa * r;
    }
  }
  return s;
}

}  // namespace

Shape shape_annulus_lobe(double R_in, double R_out, double h, int sign, int M) {
  if (!(h > 0 && h <= R_in)) throw std::invalid_argument("shape_annulus_lobe: need 0 < h <= R_in");
  const double phi_out = std::acos(std::min(1.0, h / R_out));  // wider
  const double phi_in = std::acos(std::min(1.0, h / R_in));    // narrower
  if (sign > 0)
    return annulus_clip("P4+", R_in, R_out, h, M, 1.5 * kPi + phi_in, 1.5 * kPi + phi_out, true);
  return annulus_clip("P4-", R_in, R_out, h, M, 1.5 * kPi - phi_out, 1.5 * kPi - phi_in, true);
}

Shape shape_annulus_bottom(double R_in, double R_out, double h, int M) {
  if (!(h > R_in && h < R_out))
    throw std::invalid_argument("shape_annulus_bottom: need R_in < h < R_out");
  const double dphi = std::acos(h / R_out);
  return annulus_clip("P5", R_in, R_out, h, M, 1.5 * kPi - dphi, 1.5 * kPi + dphi, true);
}

Shape shape_annulus_arc(double R_in, double R_out, double h, int M) {
  if (!(h >= 0 && h < R_out)) throw std::invalid_argument("shape_annulus_arc: need 0 <= h < R_out");
  const double dphi = std::acos(h / R_out);
  return annulus_clip("P6", R_in, R_out, h, M, dphi - 0.5 * kPi, 1.5 * kPi - dphi, false);
}

Shape shape_ring(double R, int M) {
  if (!(R > 0)) throw std::invalid_argument("shape_ring: R must be positive");
  Axis ang = periodic_axis(2.0 * kPi, 2 * M);
  Shape s;
  s.label = "ring";
  s.pts.resize(ang.q.size(), 2);
  s.w.resize(ang.q.size());
  for (int i = 0; i < ang.q.size(); ++i) {
    s.pts(i, 0) = R * std::cos(ang.q[i]);
    s.pts(i, 1) = R * std::sin(ang.q[i]);
    s.w[i] = ang.w[i] * R;
  }
  return s;
}

Shape shape_rect(double a, double b, double c, double d, int M) {
  if (!(b > a && d > c)) throw std::invalid_argument("shape_rect: degenerate rectangle");
  Axis a1 = cheb_axis(a, b, M);
  Axis a2 = cheb_axis(c, d, M);
  Shape s;
  s.label = "rect";
  const int n = static_cast<int>(a1.q.size() * a2.q.size());
  s.pts.resize(n, 2);
  s.w.resize(n);
  int i = 0;
  for (int i1 = 0; i1 < a1.q.size(); ++i1)
    for (int i2 = 0; i2 < a2.q.size(); ++i2, ++i) {
      s.pts(i, 0) = a1.q[i1];
      s.pts(i, 1) = a2.q[i2];
      s.w[i] = a1.w[i1] * a2.w[i2];
    }
  return s;
}

int Intersection::total_points() const {
  int n = 0;
  for (const auto& p : pieces) n += p.size();
  return n;
}

Intersection assemble_intersection(const SupportSpec& support, double offset, int M,
                                   double L) {
  Intersection in;
  in.support = support;
  in.offset = offset;
  const double y = offset;

  switch (support.kind) {
    case SupportKind::SphereSurface:
    case SupportKind::Disk: {
      const double R = support.R;
      auto build = (support.kind == SupportKind::SphereSurface) ? shape_sphere_surface
                                                                : shape_sphere_projection;
      if (y > R || std::isinf(y)) {
        in.pieces.push_back(build(R, 0.0, kPi, M));
      } else if (y > -R) {
        const double theta2 = 0.5 * kPi + std::asin(std::clamp(y / R, -1.0, 1.0));
        if (theta2 > 1e-14) in.pieces.push_back(build(R, 0.0, theta2, M));
      }
      break;
    }
    case SupportKind::AnnulusExterior: {
      const double R = support.R;
      if (std::isinf(y)) {
        in.pieces.push_back(shape_annulus_exterior(R, L, M));
      } else if (y >= R) {
        in.pieces.push_back(shape_exterior_upper(R, L, M));
        in.pieces.push_back(shape_exterior_lower(R, L, y, M));
      } else if (y > 0.0) {
        in.pieces.push_back(shape_exterior_upper(R, L, M));
        in.pieces.push_back(shape_exterior_lobe(R, L, y, +1, M));
        in.pieces.push_back(shape_exterior_lobe(R, L, y, -1, M));
      } else if (y == 0.0) {
        in.pieces.push_back(shape_exterior_upper(R, L, M));
      } else {
        throw std::invalid_argument("assemble_intersection: exterior support below wall");
      }
      break;
    }
    case SupportKind::AnnulusFinite: {
      const double Ri = support.R_in, Ro = support.R_out;
      if (y >= Ro || std::isinf(y)) {
        in.pieces.push_back(shape_annulus(Ri, Ro, M));
      } else if (y > Ri) {
        in.pieces.push_back(shape_annulus_arc(Ri, Ro, y, M));
        in.pieces.push_back(shape_annulus_bottom(Ri, Ro, y, M));
      } else if (y > 0.0) {
        in.pieces.push_back(shape_annulus_arc(Ri, Ro, y, M));
        in.pieces.push_back(shape_annulus_lobe(Ri, Ro, y, +1, M));
        in.pieces.push_back(shape_annulus_lobe(Ri, Ro, y, -1, M));
      } else if (y == 0.0) {
        in.pieces.push_back(shape_annulus_arc(Ri, Ro, 0.0, M));
      } else {
        throw std::invalid_argument("assemble_intersection: finite annulus below wall");
      }
      break;
    }
    case SupportKind::Circle: {
      if (std::isinf(y) || y > support.R) {
        in.pieces.push_back(shape_ring(support.R, M));
      } else {
        throw std::invalid_argument(
            "assemble_intersection: clipped circle support is not implemented");
      }
      break;
    }
    case SupportKind::DiskFull: {
      if (std::isinf(y) || y > support.R) {
        in.pieces.push_back(shape_disk(support.R, M));
      } else {
        throw std::invalid_argument(
            "assemble_intersection: clipped full-disk support is not implemented");
      }
      break;
    }
    case SupportKind::Everything:
      throw std::invalid_argument(
          "assemble_intersection: unbounded supports are clipped by the source box");
  }
  return in;
}

void write_csv(std::ostream& os, const Shape& s) {
  os << "y1,y2,weight\n";
  for (int i = 0; i < s.size(); ++i)
    os << s.pts(i, 0) << "," << s.pts(i, 1) << "," << s.w[i] << "\n";
}

void write_csv(std::ostream& os, const Intersection& in) {
  os << "piece,y1,y2,weight\n";
  for (const auto& p : in.pieces)
    for (int i = 0; i < p.size(); ++i)
      os << p.label << "," << p.pts(i, 0) << "," << p.pts(i, 1) << "," << p.w[i] << "\n";
}

}  // namespace psdft
