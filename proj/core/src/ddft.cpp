#include "psdft/ddft.hpp"

#include <cmath>

namespace psdft {

DdftSystem::DdftSystem(std::shared_ptr<FluidProblem> prob, bool inertial, double gamma,
                       TimePotential pot, bool log_form)
    : prob_(std::move(prob)),
      inertial_(inertial),
      log_form_(log_form),
      gamma_(gamma),
      pot_(std::move(pot)) {
  const Grid2D& g = prob_->grid().parts[0];
  nd_ = g.size();
  d1_ = g.d1();
  d2_ = g.d2();

  // no-flux constraints at finite domain edges (hard walls)
  auto add_wall = [&](int node, int axis) {
    wall_rows_.push_back(node);
    normal_axis_.push_back(axis);
  };
  const bool y2_lower_wall = std::isfinite(g.g2.map.lower());
  const bool y2_upper_wall = std::isfinite(g.g2.map.upper());
  const bool y1_walls = std::isfinite(g.g1.map.lower()) && g.n1() > 1;
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    if (y2_lower_wall) add_wall(i1 * g.n2() + (g.n2() - 1), 2);  // y2 = lower
    if (y2_upper_wall) add_wall(i1 * g.n2() + 0, 2);             // y2 = upper
  }
  if (y1_walls) {
    for (int i2 = 1; i2 < g.n2() - 1; ++i2) {  // corners keep the y2 constraint
      add_wall(0 * g.n2() + i2, 1);
      add_wall((g.n1() - 1) * g.n2() + i2, 1);
    }
  }
  frozen_rows_ = prob_->pinned_nodes();
}

int DdftSystem::state_size() const { return inertial_ ? 3 * nd_ : nd_; }

Vector DdftSystem::pack(const Vector& n) const {
  Vector y = Vector::Zero(state_size());
  y.head(nd_) = n;
  return y;
}

Vector DdftSystem::sampled_vext(double t) const {
  const Grid2D& g = prob_->grid().parts[0];
  Vector out(nd_);
  for (int i = 0; i < nd_; ++i) {
    if (!pot_.v) {
      out[i] = 0;
      continue;
    }
    const Point2 p = g.point(i);
    double v = (std::isfinite(p.y1) && std::isfinite(p.y2)) ? pot_.v(p.y1, p.y2, t) : 0.0;
    if (!std::isfinite(v)) v = 0.0;
    out[i] = v;
  }
  return out;
}

Vector DdftSystem::grad_vext(double t, int axis) const {
  const Grid2D& g = prob_->grid().parts[0];
  Vector out(nd_);
  const auto& f = (axis == 1) ? pot_.dv_dy1 : pot_.dv_dy2;
  for (int i = 0; i < nd_; ++i) {
    if (!f) {
      out[i] = 0;
      continue;
    }
    const Point2 p = g.point(i);
    double v = (std::isfinite(p.y1) && std::isfinite(p.y2)) ? f(p.y1, p.y2, t) : 0.0;
    if (!std::isfinite(v)) v = 0.0;
    out[i] = v;
  }
  return out;
}

void DdftSystem::flux(double t, const Vector& y, Vector& j1, Vector& j2) const {
  const double T = prob_->spec().T;
  const Vector n = y.head(nd_);
  if (inertial_) {
    j1 = n.cwiseProduct(y.segment(nd_, nd_));
    j2 = n.cwiseProduct(y.segment(2 * nd_, nd_));
    return;
  }
  const Vector m = prob_->excess_mu(n);
  if (log_form_) {
    const Vector u =
        T * n.array().max(1e-300).log().matrix() + m + sampled_vext(t);
    j1 = -n.cwiseProduct(d1_ * u);
    j2 = -n.cwiseProduct(d2_ * u);
  } else {
    j1 = -(T * (d1_ * n) + n.cwiseProduct(d1_ * m) + n.cwiseProduct(grad_vext(t, 1)));
    j2 = -(T * (d2_ * n) + n.cwiseProduct(d2_ * m) + n.cwiseProduct(grad_vext(t, 2)));
  }
}

void DdftSystem::rhs(double t, const Vector& y, Vector& f) const {
  const double T = prob_->spec().T;
  const Vector n = y.head(nd_);

  if (!inertial_) {
    const Vector m = prob_->excess_mu(n);
    Vector q1(nd_), q2(nd_);
    if (log_form_) {
      const Vector u = T * n.array().max(1e-300).log().matrix() + m + sampled_vext(t);
      q1 = n.cwiseProduct(d1_ * u);
      q2 = n.cwiseProduct(d2_ * u);
    } else {
      q1 = T * (d1_ * n) + n.cwiseProduct(d1_ * m) + n.cwiseProduct(grad_vext(t, 1));
      q2 = T * (d2_ * n) + n.cwiseProduct(d2_ * m) + n.cwiseProduct(grad_vext(t, 2));
    }
    f = d1_ * q1 + d2_ * q2;
    // no-flux walls: algebraic rows force the normal flux to zero
    for (size_t k = 0; k < wall_rows_.size(); ++k)
      f[wall_rows_[k]] = (normal_axis_[k] == 1) ? q1[wall_rows_[k]] : q2[wall_rows_[k]];
    for (int i : frozen_rows_) f[i] = 0.0;
    return;
  }

  const Vector vx = y.segment(nd_, nd_);
  const Vector vy = y.segment(2 * nd_, nd_);
  const Vector m = prob_->excess_mu(n);
  const Vector nc = n.array().max(1e-12).matrix();
  Vector gu1(nd_), gu2(nd_);
  if (log_form_) {
    const Vector u = T * nc.array().log().matrix() + m + sampled_vext(t);
    gu1 = d1_ * u;
    gu2 = d2_ * u;
  } else {
    gu1 = T * (d1_ * n).cwiseQuotient(nc) + d1_ * m + grad_vext(t, 1);
    gu2 = T * (d2_ * n).cwiseQuotient(nc) + d2_ * m + grad_vext(t, 2);
  }

  f.resize(3 * nd_);
  f.head(nd_) = -(d1_ * n.cwiseProduct(vx) + d2_ * n.cwiseProduct(vy));
  f.segment(nd_, nd_) =
      -(vx.cwiseProduct(d1_ * vx) + vy.cwiseProduct(d2_ * vx)) - gamma_ * vx - gu1;
  f.segment(2 * nd_, nd_) =
      -(vx.cwiseProduct(d1_ * vy) + vy.cwiseProduct(d2_ * vy)) - gamma_ * vy - gu2;
  // no-penetration walls: normal velocity pinned to zero (algebraic)
  for (size_t k = 0; k < wall_rows_.size(); ++k) {
    const int i = wall_rows_[k];
    if (normal_axis_[k] == 1)
      f[nd_ + i] = vx[i];
    else
      f[2 * nd_ + i] = vy[i];
  }
  for (int i : frozen_rows_) f[i] = 0.0;
}

void DdftSystem::jac(double t, const Vector& y, Matrix& J) const {
  const double T = prob_->spec().T;
  const Vector n = y.head(nd_);
  const Matrix U = prob_->excess_mu_jacobian(n);

  const Vector nc = n.array().max(1e-12).matrix();
  if (!inertial_) {
    const Vector m = prob_->excess_mu(n);
    Matrix dq1(nd_, nd_), dq2(nd_, nd_);
    if (log_form_) {
      // q_d = n Dd u, u = T log n + m + V;
      // dq_d/dn = diag(Dd u) + diag(n) Dd (T/n + U)
      const Vector u = T * nc.array().log().matrix() + m + sampled_vext(t);
      Matrix Ufull = U;
      Ufull += (T * nc.cwiseInverse()).asDiagonal();
      dq1 = Matrix((d1_ * u).asDiagonal()) + n.asDiagonal() * (d1_ * Ufull);
      dq2 = Matrix((d2_ * u).asDiagonal()) + n.asDiagonal() * (d2_ * Ufull);
    } else {
      const Vector g1m = d1_ * m + grad_vext(t, 1);
      const Vector g2m = d2_ * m + grad_vext(t, 2);
      // q_d = T Dd n + n (Dd m + Vd'); dq_d/dn = T Dd + diag(gdm) + diag(n) Dd U
      dq1 = T * d1_ + Matrix(g1m.asDiagonal()) + n.asDiagonal() * (d1_ * U);
      dq2 = T * d2_ + Matrix(g2m.asDiagonal()) + n.asDiagonal() * (d2_ * U);
    }
    J = d1_ * dq1 + d2_ * dq2;
    for (size_t k = 0; k < wall_rows_.size(); ++k) {
      const int i = wall_rows_[k];
      J.row(i) = (normal_axis_[k] == 1) ? dq1.row(i) : dq2.row(i);
    }
    for (int i : frozen_rows_) J.row(i).setZero();
    return;
  }

  const Vector vx = y.segment(nd_, nd_);
  const Vector vy = y.segment(2 * nd_, nd_);
  J = Matrix::Zero(3 * nd_, 3 * nd_);
  // density row: -(D1 diag(vx) + D2 diag(vy)) dn; -(D1 diag(n)) dvx; ...
  J.topLeftCorner(nd_, nd_) =
      -(d1_ * Matrix(vx.asDiagonal()) + d2_ * Matrix(vy.asDiagonal()));
  J.block(0, nd_, nd_, nd_) = -(d1_ * Matrix(n.asDiagonal()));
  J.block(0, 2 * nd_, nd_, nd_) = -(d2_ * Matrix(n.asDiagonal()));

  Matrix dgu1(nd_, nd_), dgu2(nd_, nd_);
  if (log_form_) {
    Matrix Ufull = U;
    Ufull += (T * nc.cwiseInverse()).asDiagonal();
    dgu1 = d1_ * Ufull;
    dgu2 = d2_ * Ufull;
  } else {
    // grad u = T (Dd n)/n + Dd m + Vd'; d/dn = T Dd/n - T diag((Dd n)/n^2) + Dd U
    dgu1 = Matrix(nc.cwiseInverse().asDiagonal()) * (T * d1_) -
           T * Matrix((d1_ * n).cwiseQuotient(nc.cwiseProduct(nc)).asDiagonal()) +
           d1_ * U;
    dgu2 = Matrix(nc.cwiseInverse().asDiagonal()) * (T * d2_) -
           T * Matrix((d2_ * n).cwiseQuotient(nc.cwiseProduct(nc)).asDiagonal()) +
           d2_ * U;
  }
  J.block(nd_, 0, nd_, nd_) = -dgu1;
  J.block(2 * nd_, 0, nd_, nd_) = -dgu2;

  J.block(nd_, nd_, nd_, nd_) = -(Matrix((d1_ * vx).asDiagonal()) +
                                  Matrix(vx.asDiagonal()) * d1_ +
                                  Matrix(vy.asDiagonal()) * d2_) -
                                gamma_ * Matrix::Identity(nd_, nd_);
  J.block(nd_, 2 * nd_, nd_, nd_) = -Matrix((d2_ * vx).asDiagonal());
  J.block(2 * nd_, nd_, nd_, nd_) = -Matrix((d1_ * vy).asDiagonal());
  J.block(2 * nd_, 2 * nd_, nd_, nd_) = -(Matrix((d2_ * vy).asDiagonal()) +
                                          Matrix(vx.asDiagonal()) * d1_ +
                                          Matrix(vy.asDiagonal()) * d2_) -
                                        gamma_ * Matrix::Identity(nd_, nd_);

  for (size_t k = 0; k < wall_rows_.size(); ++k) {
    const int i = wall_rows_[k];
    const int row = (normal_axis_[k] == 1) ? nd_ + i : 2 * nd_ + i;
    J.row(row).setZero();
    J(row, row) = 1.0;
  }
  for (int i : frozen_rows_) J.row(i).setZero();
}

OdeSystem DdftSystem::ode() const {
  OdeSystem sys;
  sys.n = state_size();
  sys.rhs = [this](double t, const Vector& y, Vector& f) { rhs(t, y, f); };
  sys.jacobian = [this](double t, const Vector& y, Matrix& J) { jac(t, y, J); };
  sys.mass = Vector::Ones(sys.n);
  for (size_t k = 0; k < wall_rows_.size(); ++k) {
    const int i = wall_rows_[k];
    if (!inertial_)
      sys.mass[i] = 0.0;
    else
      sys.mass[(normal_axis_[k] == 1 ? nd_ : 2 * nd_) + i] = 0.0;
  }
  return sys;
}

MassLedger mass_audit(const DdftSystem& sys, const OdeTrajectory& traj, const Rect& box,
                      int quad_points) {
  const FluidProblem& prob = sys.problem();
  const Grid2D& g = prob.grid().parts[0];

  // subdomain quadrature: tensor Chebyshev rule + interpolation from the grid
  Grid1D q = cheb_lobatto_grid(quad_points - 1);
  std::vector<double> xq(quad_points), wxq(quad_points), yq(quad_points), wyq(quad_points);
  for (int i = 0; i < quad_points; ++i) {
    xq[i] = box.a + 0.5 * (box.b - box.a) * (q.nodes[i] + 1);
    wxq[i] = 0.5 * (box.b - box.a) * q.quad_weights[i];
    yq[i] = box.c + 0.5 * (box.d - box.c) * (q.nodes[i] + 1);
    wyq[i] = 0.5 * (box.d - box.c) * q.quad_weights[i];
  }
  Matrix IP(quad_points * quad_points, g.size());
  Vector wS(quad_points * quad_points);
  for (int i = 0; i < quad_points; ++i)
    for (int j = 0; j < quad_points; ++j) {
      IP.row(i * quad_points + j) = g.interp_row(xq[i], yq[j]).transpose();
      wS[i * quad_points + j] = wxq[i] * wyq[j];
    }

  // edge quadrature rows: right (x=b, nu=+e1), left (x=a, -e1), top (y=d,
  // +e2), bottom (y=c, -e2)
  const int ne = 2 * quad_points;
  Grid1D qe = cheb_lobatto_grid(ne - 1);
  struct Edge {
    Matrix ip;
    Vector w;
    int axis;
    double sign;
  };
  std::vector<Edge> edges;
  auto make_edge = [&](double fixed, bool vertical, int axis, double sign, double lo,
                       double hi) {
    Edge e;
    e.ip.resize(ne, g.size());
    e.w.resize(ne);
    for (int i = 0; i < ne; ++i) {
      const double s = lo + 0.5 * (hi - lo) * (qe.nodes[i] + 1);
      e.w[i] = 0.5 * (hi - lo) * qe.quad_weights[i];
      e.ip.row(i) =
          (vertical ? g.interp_row(fixed, s) : g.interp_row(s, fixed)).transpose();
    }
    e.axis = axis;
    e.sign = sign;
    edges.push_back(std::move(e));
  };
  make_edge(box.b, true, 1, +1.0, box.c, box.d);
  make_edge(box.a, true, 1, -1.0, box.c, box.d);
  make_edge(box.d, false, 2, +1.0, box.a, box.b);
  make_edge(box.c, false, 2, -1.0, box.a, box.b);

  MassLedger led;
  const size_t ns = traj.t.size();
  led.t = traj.t;
  led.m.resize(ns);
  led.flux_in.resize(ns);
  for (size_t k = 0; k < ns; ++k) {
    const Vector n = sys.density_part(traj.y[k]);
    led.m[k] = wS.dot(IP * n);
    Vector j1, j2;
    sys.flux(traj.t[k], traj.y[k], j1, j2);
    double influx = 0;
    for (const auto& e : edges) {
      const Vector jn = e.ip * ((e.axis == 1) ? j1 : j2);
      influx -= e.sign * e.w.dot(jn);  // inward flux
    }
    led.flux_in[k] = influx;
  }

  // dm/dt by 4th-order central differences on the uniform sample grid
  led.dm_dt.assign(ns, 0.0);
  led.err_rate.assign(ns, 0.0);
  const double dt = (ns > 1) ? led.t[1] - led.t[0] : 1.0;
  for (size_t k = 2; k + 2 < ns; ++k) {
    led.dm_dt[k] =
        (-led.m[k + 2] + 8 * led.m[k + 1] - 8 * led.m[k - 1] + led.m[k - 2]) / (12 * dt);
    led.err_rate[k] = std::abs(led.dm_dt[k] - led.flux_in[k]) / std::max(led.m[k], 1e-300);
    led.max_err_rate = std::max(led.max_err_rate, led.err_rate[k]);
  }
  return led;
}

double total_mass(const FluidProblem& prob, const Vector& n) {
  return quadrature_excess(prob.grid(), n);
}

}  // namespace psdft
