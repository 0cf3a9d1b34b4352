#include "psdft/solver.hpp"

#include "psdft/external_potential.hpp"
#include "psdft/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;
}

BulkModel FluidSpec::bulk() const {
  BulkModel b;
  b.T = T;
  b.R = R;
  b.excess = hard_sphere ? BulkModel::Excess::HardSphere : BulkModel::Excess::None;
  b.attraction = attraction;
  b.r_c = r_c;
  return b;
}

FluidProblem::FluidProblem(FluidSpec spec, CompositeGrid2D density_grid,
                           CompositeGrid2D wd_grid, OperatorCache& cache, int M_fmt,
                           int M_attr)
    : spec_(std::move(spec)), density_(std::move(density_grid)), wd_(std::move(wd_grid)) {
  if (spec_.hard_sphere) {
    w2_ = cache.get(density_, wd_, kernel_hs_w2(spec_.R), M_fmt);
    w3_ = cache.get(density_, wd_, kernel_hs_w3(spec_.R), M_fmt);
    vw2_ = cache.get(density_, wd_, kernel_hs_vw2(spec_.R, false), M_fmt);
    w2r_ = cache.get(wd_, density_, kernel_hs_w2(spec_.R), M_fmt);
    w3r_ = cache.get(wd_, density_, kernel_hs_w3(spec_.R), M_fmt);
    vw2r_ = cache.get(wd_, density_, kernel_hs_vw2(spec_.R, true), M_fmt);
  }
  if (spec_.attraction)
    attr_ = cache.get(density_, density_, kernel_attraction(spec_.r_c), M_attr);

  v_ext_ = Vector::Zero(density_.size());
  if (spec_.v_ext) {
    for (int i = 0; i < density_.size(); ++i) {
      const Point2 p = density_.point(i);
      double v = spec_.v_ext(p.y1, p.y2);
      if (!std::isfinite(v)) v = 0.0;  // far-field limit of a decaying potential
      v_ext_[i] = v;
    }
  }
}

Vector FluidProblem::density_of(const Vector& z) const {
  return (z / spec_.T).array().exp();
}

Vector FluidProblem::z_of_density(const Vector& n) const {
  return spec_.T * n.array().max(1e-300).log();
}

WeightedDensities FluidProblem::weighted(const Vector& n) const {
  WeightedDensities w;
  if (!spec_.hard_sphere) {
    w.n2 = w.n3 = w.vx = w.vy = Vector::Zero(wd_.size());
    return w;
  }
  w.n2 = w2_->apply(n);
  w.n3 = w3_->apply(n);
  w.vx = vw2_->apply(n, 0);
  w.vy = vw2_->apply(n, 1);
  return w;
}

FluidProblem::Partials FluidProblem::partials(const WeightedDensities& w) const {
  Partials p;
  const int nc = wd_.size();
  p.s2.resize(nc);
  p.s3.resize(nc);
  p.svx.resize(nc);
  p.svy.resize(nc);
  for (int i = 0; i < nc; ++i) {
    if (w.n3[i] >= 1.0) {
      const Point2 pt = wd_.point(i);
      std::ostringstream os;
      os << "packing singularity: n3 = " << w.n3[i] << " at (y1,y2) = (" << pt.y1 << ","
         << pt.y2 << ")";
      throw PackingError(os.str());
    }
    const auto d = hs_reduced(spec_.R, w.n2[i], w.n3[i], w.vx[i], w.vy[i]);
    p.s2[i] = d.dn2;
    p.s3[i] = d.dn3;
    p.svx[i] = d.dvx;
    p.svy[i] = d.dvy;
  }
  return p;
}

Vector FluidProblem::excess_mu(const Vector& n) const {
  Vector mu_ex = Vector::Zero(density_.size());
  if (spec_.hard_sphere) {
    const auto w = weighted(n);
    const auto p = partials(w);
    mu_ex += spec_.T * (w2r_->apply(p.s2) + w3r_->apply(p.s3) + vw2r_->apply(p.svx, 0) +
                        vw2r_->apply(p.svy, 1));
  }
  if (spec_.attraction) mu_ex += attr_->apply(n);
  return mu_ex;
}

Matrix FluidProblem::excess_mu_jacobian(const Vector& n) const {
  const int nd = density_.size();
  Matrix J = Matrix::Zero(nd, nd);
  if (spec_.hard_sphere) {
    const auto w = weighted(n);
    const int nc = wd_.size();
    Vector a22(nc), a23(nc), a33(nc), a2x(nc), a2y(nc), a3x(nc), a3y(nc), axx(nc),
        axy(nc), ayy(nc);
    for (int i = 0; i < nc; ++i) {
      const auto d = hs_reduced(spec_.R, w.n2[i], w.n3[i], w.vx[i], w.vy[i]);
      a22[i] = d.d_n2n2;
      a23[i] = d.d_n2n3;
      a33[i] = d.d_n3n3;
      a2x[i] = d.d_n2vx;
      a2y[i] = d.d_n2vy;
      a3x[i] = d.d_n3vx;
      a3y[i] = d.d_n3vy;
      axx[i] = d.d_vxvx;
      axy[i] = d.d_vxvy;
      ayy[i] = d.d_vyvy;
    }
    const Matrix& W2 = w2_->mat(0);
    const Matrix& W3 = w3_->mat(0);
    const Matrix& Vx = vw2_->mat(0);
    const Matrix& Vy = vw2_->mat(1);
    Matrix S(4 * nc, nd);
    S.topRows(nc) = a22.asDiagonal() * W2 + a23.asDiagonal() * W3 +
                    a2x.asDiagonal() * Vx + a2y.asDiagonal() * Vy;
    S.middleRows(nc, nc) = a23.asDiagonal() * W2 + a33.asDiagonal() * W3 +
                           a3x.asDiagonal() * Vx + a3y.asDiagonal() * Vy;
    S.middleRows(2 * nc, nc) = a2x.asDiagonal() * W2 + a3x.asDiagonal() * W3 +
                               axx.asDiagonal() * Vx + axy.asDiagonal() * Vy;
    S.bottomRows(nc) = a2y.asDiagonal() * W2 + a3y.asDiagonal() * W3 +
                       axy.asDiagonal() * Vx + ayy.asDiagonal() * Vy;
    Matrix Rev(nd, 4 * nc);
    Rev.leftCols(nc) = w2r_->mat(0);
    Rev.middleCols(nc, nc) = w3r_->mat(0);
    Rev.middleCols(2 * nc, nc) = vw2r_->mat(0);
    Rev.rightCols(nc) = vw2r_->mat(1);
    J.noalias() += spec_.T * (Rev * S);
  }
  if (spec_.attraction) J += attr_->mat(0);
  return J;
}

Vector FluidProblem::residual(const Vector& z) const {
  const Vector n = density_of(z);
  Vector r = z + excess_mu(n) + v_ext_;
  r.array() -= spec_.mu;
  for (size_t k = 0; k < pin_nodes_.size(); ++k)
    r[pin_nodes_[k]] = z[pin_nodes_[k]] - pin_values_[k];
  return r;
}

void FluidProblem::pin(std::vector<int> nodes, Vector values) {
  pin_nodes_ = std::move(nodes);
  pin_values_ = std::move(values);
}

void FluidProblem::apply_pins(Vector& z) const {
  for (size_t k = 0; k < pin_nodes_.size(); ++k) z[pin_nodes_[k]] = pin_values_[k];
}

IterationReport FluidProblem::picard(Vector& z, const SolverConfig& cfg) const {
  IterationReport rep;
  apply_pins(z);
  int growth_streak = 0;
  double prev = std::numeric_limits<double>::infinity();
  // relaxation ramps from lambda_init toward lambda_final once the switch
  // iteration is past, backing off whenever the residual grows
  double lam = cfg.lambda_init;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Vector r = residual(z);
    const double rn = r.cwiseAbs().maxCoeff();
    rep.residuals.push_back(rn);
    rep.final_residual = rn;
    rep.iterations = it;
    if (rn < cfg.tol) {
      rep.converged = true;
      return rep;
    }
    growth_streak = (rn > prev) ? growth_streak + 1 : 0;
    if (growth_streak >= 50) {
      std::ostringstream os;
      os << "picard diverged: residual grew for 50 consecutive iterations, last = " << rn
         << " at iteration " << it;
      throw std::runtime_error(os.str());
    }
    if (it >= cfg.lambda_switch_iter) {
      if (rn <= prev)
        lam = std::min(1.07 * lam, cfg.lambda_final);
      else
        lam = std::max(0.4 * lam, 0.25 * cfg.lambda_init);
    }
    prev = rn;
    z -= lam * r;
    apply_pins(z);
  }
  rep.converged = false;
  return rep;
}

IterationReport FluidProblem::newton(Vector& z, const SolverConfig& cfg) const {
  IterationReport rep;
  apply_pins(z);
  const int nd = density_.size();
  const int nc = wd_.size();
  const bool hs = spec_.hard_sphere;
  const int ntot = hs ? nd + 4 * nc : nd;

  Vector n = density_of(z);
  WeightedDensities w = weighted(n);

  auto full_residual = [&](const Vector& zz, const WeightedDensities& ww) {
    Vector F(ntot);
    const Vector nn = density_of(zz);
    Vector e0 = zz + v_ext_;
    e0.array() -= spec_.mu;
    if (hs) {
      const auto p = partials(ww);
      e0 += spec_.T * (w2r_->apply(p.s2) + w3r_->apply(p.s3) + vw2r_->apply(p.svx, 0) +
                       vw2r_->apply(p.svy, 1));
    }
    if (spec_.attraction) e0 += attr_->apply(nn);
    for (size_t k = 0; k < pin_nodes_.size(); ++k)
      e0[pin_nodes_[k]] = zz[pin_nodes_[k]] - pin_values_[k];
    F.head(nd) = e0;
    if (hs) {
      F.segment(nd, nc) = ww.n2 - w2_->apply(nn);
      F.segment(nd + nc, nc) = ww.n3 - w3_->apply(nn);
      F.segment(nd + 2 * nc, nc) = ww.vx - vw2_->apply(nn, 0);
      F.segment(nd + 3 * nc, nc) = ww.vy - vw2_->apply(nn, 1);
    }
    return F;
  };

  for (int it = 0; it < cfg.max_iter; ++it) {
    Vector F = full_residual(z, w);
    const double rn = F.head(nd).cwiseAbs().maxCoeff();
    rep.residuals.push_back(rn);
    rep.final_residual = rn;
    rep.iterations = it;
    if (rn < cfg.tol && F.cwiseAbs().maxCoeff() < 100 * cfg.tol) {
      rep.converged = true;
      return rep;
    }

    Matrix J = Matrix::Zero(ntot, ntot);
    const Vector dn_dz = n / spec_.T;
    J.topLeftCorner(nd, nd).setIdentity();
    if (spec_.attraction) J.topLeftCorner(nd, nd) += attr_->mat(0) * dn_dz.asDiagonal();
    if (hs) {
      Vector a22(nc), a23(nc), a33(nc), a2x(nc), a2y(nc), a3x(nc), a3y(nc), axx(nc),
          axy(nc), ayy(nc);
      for (int i = 0; i < nc; ++i) {
        const auto d = hs_reduced(spec_.R, w.n2[i], w.n3[i], w.vx[i], w.vy[i]);
        a22[i] = d.d_n2n2;
        a23[i] = d.d_n2n3;
        a33[i] = d.d_n3n3;
        a2x[i] = d.d_n2vx;
        a2y[i] = d.d_n2vy;
        a3x[i] = d.d_n3vx;
        a3y[i] = d.d_n3vy;
        axx[i] = d.d_vxvx;
        axy[i] = d.d_vxvy;
        ayy[i] = d.d_vyvy;
      }
      auto blockm = [&](const Vector& c2, const Vector& c3, const Vector& cx,
                        const Vector& cy) {
        return (spec_.T *
                (w2r_->mat(0) * c2.asDiagonal() + w3r_->mat(0) * c3.asDiagonal() +
                 vw2r_->mat(0) * cx.asDiagonal() + vw2r_->mat(1) * cy.asDiagonal()))
            .eval();
      };
      J.block(0, nd, nd, nc) = blockm(a22, a23, a2x, a2y);
      J.block(0, nd + nc, nd, nc) = blockm(a23, a33, a3x, a3y);
      J.block(0, nd + 2 * nc, nd, nc) = blockm(a2x, a3x, axx, axy);
      J.block(0, nd + 3 * nc, nd, nc) = blockm(a2y, a3y, axy, ayy);
      J.block(nd, 0, nc, nd) = -(w2_->mat(0) * dn_dz.asDiagonal());
      J.block(nd + nc, 0, nc, nd) = -(w3_->mat(0) * dn_dz.asDiagonal());
      J.block(nd + 2 * nc, 0, nc, nd) = -(vw2_->mat(0) * dn_dz.asDiagonal());
      J.block(nd + 3 * nc, 0, nc, nd) = -(vw2_->mat(1) * dn_dz.asDiagonal());
      J.block(nd, nd, 4 * nc, 4 * nc).setIdentity();
    }
    for (int pnode : pin_nodes_) {
      J.row(pnode).setZero();
      J(pnode, pnode) = 1.0;
    }

    Eigen::PartialPivLU<Matrix> lu(J);
    Vector du = lu.solve(-F);
    if (!du.allFinite()) throw std::runtime_error("newton: singular Jacobian");

    double lam = (it < cfg.newton_full_step_after) ? cfg.newton_lambda_init : 1.0;
    const double r0 = F.cwiseAbs().maxCoeff();
    Vector z_try = z;
    WeightedDensities w_try = w;
    for (int ls = 0; ls <= 5; ++ls) {
      z_try = z + lam * du.head(nd);
      if (hs) {
        w_try.n2 = w.n2 + lam * du.segment(nd, nc);
        w_try.n3 = w.n3 + lam * du.segment(nd + nc, nc);
        w_try.vx = w.vx + lam * du.segment(nd + 2 * nc, nc);
        w_try.vy = w.vy + lam * du.segment(nd + 3 * nc, nc);
        if ((w_try.n3.array() >= 1.0).any()) {
          lam *= 0.5;
          continue;
        }
      }
      if (full_residual(z_try, w_try).cwiseAbs().maxCoeff() < r0 || ls == 5) break;
      lam *= 0.5;
    }
    z = z_try;
    if (hs) w = w_try;
    n = density_of(z);
    apply_pins(z);
  }
  rep.converged = false;
  return rep;
}

double FluidProblem::hs_excess_free_energy(const Vector& n) const {
  if (!spec_.hard_sphere) return 0.0;
  const auto w = weighted(n);
  Vector ups(wd_.size());
  for (int i = 0; i < wd_.size(); ++i) {
    const Point2 p = wd_.point(i);
    if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) {
      ups[i] = 0.0;
      continue;
    }
    ups[i] = hs_reduced(spec_.R, w.n2[i], w.n3[i], w.vx[i], w.vy[i]).phi;
  }
  return spec_.T * quadrature_excess(wd_, ups);
}

double FluidProblem::grand_potential_excess(const Vector& z, const Vector& n_ref) const {
  const Vector n = density_of(z);
  const BulkModel bulk = spec_.bulk();
  const double p_ref = bulk.pressure(n_ref[0]);

  auto f_hs_of = [&](double nb) {
    if (!spec_.hard_sphere || nb <= 0) return 0.0;
    return spec_.T * hs_reduced(spec_.R, 4 * kPi * spec_.R * spec_.R * nb,
                                (4.0 / 3.0) * kPi * std::pow(spec_.R, 3) * nb, 0, 0)
                         .phi;
  };

  Vector attr_term = Vector::Zero(density_.size());
  if (spec_.attraction) attr_term = 0.5 * n.cwiseProduct(attr_->apply(n));

  Vector id(density_.size());
  for (int i = 0; i < density_.size(); ++i) {
    const Point2 p = density_.point(i);
    if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) {
      id[i] = 0.0;
      continue;
    }
    id[i] = spec_.T * n[i] * (std::log(std::max(n[i], 1e-300)) - 1.0) +
            (v_ext_[i] - spec_.mu) * n[i] + attr_term[i] + p_ref + f_hs_of(n_ref[i]);
  }
  double gamma = quadrature_excess(density_, id);

  if (!spec_.hard_sphere) return gamma;
  const auto w = weighted(n);

  if (wd_.id == density_.id) {
    // free interface: one grid, the bulk hard-sphere reference was folded
    // into the density-grid integrand above
    Vector ups(wd_.size());
    for (int i = 0; i < wd_.size(); ++i) {
      const Point2 p = wd_.point(i);
      if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) {
        ups[i] = 0.0;
        continue;
      }
      ups[i] = spec_.T * hs_reduced(spec_.R, w.n2[i], w.n3[i], w.vx[i], w.vy[i]).phi -
               f_hs_of(n_ref[i]);
    }
    return gamma + quadrature_excess(wd_, ups);
  }

  // wall case: full integrand over the strip, bulk-subtracted integrand on
  // the upper half-space, and the analytic reference over (0, R]
  const double f_hs_b = f_hs_of(n_ref[0]);
  int off = 0;
  for (int part = 0; part < wd_.n_parts(); ++part) {
    const Grid2D& g = wd_.parts[part];
    const bool is_strip = std::isfinite(g.g2.map.upper());
    Vector ups(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const Point2 p = g.point(i);
      if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) {
        ups[i] = 0.0;
        continue;
      }
      const int gi = off + i;
      ups[i] = spec_.T * hs_reduced(spec_.R, w.n2[gi], w.n3[gi], w.vx[gi], w.vy[gi]).phi -
               (is_strip ? 0.0 : f_hs_b);
    }
    gamma += quadrature_excess(g, ups);
    off += g.size();
  }
  gamma -= f_hs_b * spec_.R;
  return gamma;
}

Vector FluidProblem::initial_z(double n_bulk) const {
  const double cap = 0.95 * 6.0 / (8.0 * kPi * std::pow(spec_.R, 3));
  Vector n0(density_.size());
  for (int i = 0; i < density_.size(); ++i)
    n0[i] = std::min(n_bulk * std::exp(-v_ext_[i] / spec_.T), cap);
  Vector z = z_of_density(n0);
  apply_pins(z);
  return z;
}

// ---------------------------------------------------------------------------

PlanarResult planar_interface_1d(PlanarKind kind, const PlanarOptions& opt,
                                 OperatorCache& cache) {
  const int M_fmt = opt.M_fmt > 0 ? opt.M_fmt : default_M_fmt(opt.n2);
  const int M_attr = opt.M_attr > 0 ? opt.M_attr : default_M_attr(opt.n2);

  FluidSpec spec;
  spec.R = 0.5;
  spec.hard_sphere = true;

  PlanarResult out;
  if (kind == PlanarKind::HardSphereWall) {
    spec.T = 1.0;
    spec.attraction = false;
    spec.mu = spec.bulk().mu(opt.n_bulk);
    auto dens = halfspace_grid(1, opt.n2, opt.L1, opt.L2);
    auto wd = composite_weighted_density_grid(1, opt.n2, opt.L1, opt.L2, spec.R);
    auto prob = std::make_shared<FluidProblem>(spec, dens, wd, cache, M_fmt, M_attr);
    Vector z = prob->initial_z(opt.n_bulk);
    out.report = (opt.solver.scheme == SolverConfig::Scheme::Newton)
                     ? prob->newton(z, opt.solver)
                     : prob->picard(z, opt.solver);
    out.problem = prob;
    out.z = z;
    const Vector n = prob->density_of(z);
    out.surface_tension =
        prob->grand_potential_excess(z, Vector::Constant(dens.size(), opt.n_bulk));
    out.contact_density = n[dens.size() - 1];  // y2 = 0 is the last node
    return out;
  }

  spec.T = opt.T;
  spec.attraction = true;
  spec.r_c = opt.r_c;
  const Coexistence cx = coexistence(spec.bulk());
  spec.mu = cx.mu_sat;

  if (kind == PlanarKind::LiquidVapor) {
    auto line = line_grid(opt.n2, opt.L1);
    auto prob = std::make_shared<FluidProblem>(spec, line, line, cache, M_fmt, M_attr);
    Vector n0(line.size());
    for (int i = 0; i < line.size(); ++i) {
      const double y = line.point(i).y2;
      const double s = std::isfinite(y) ? std::tanh(-y / 1.2) : (y > 0 ? -1.0 : 1.0);
      n0[i] = 0.5 * (cx.n_liq + cx.n_vap) + 0.5 * (cx.n_liq - cx.n_vap) * s;
    }
    Vector z = prob->z_of_density(n0);
    out.report = (opt.solver.scheme == SolverConfig::Scheme::Newton)
                     ? prob->newton(z, opt.solver)
                     : prob->picard(z, opt.solver);
    out.problem = prob;
    out.z = z;
    Vector n_ref(line.size());
    for (int i = 0; i < line.size(); ++i) {
      const double y = line.point(i).y2;
      n_ref[i] = (y < 0) ? cx.n_liq : cx.n_vap;
    }
    out.surface_tension = prob->grand_potential_excess(z, n_ref);
    return out;
  }

  const double eps_w = opt.eps_w;
  spec.v_ext = [eps_w](double, double y2) { return wall_potential_93(y2, eps_w); };
  const double n_far = (kind == PlanarKind::WallLiquid) ? cx.n_liq : cx.n_vap;
  auto dens = halfspace_grid(1, opt.n2, opt.L1, opt.L2);
  auto wd = composite_weighted_density_grid(1, opt.n2, opt.L1, opt.L2, spec.R);
  auto prob = std::make_shared<FluidProblem>(spec, dens, wd, cache, M_fmt, M_attr);
  Vector z = prob->initial_z(n_far);
  out.report = (opt.solver.scheme == SolverConfig::Scheme::Newton)
                   ? prob->newton(z, opt.solver)
                   : prob->picard(z, opt.solver);
  out.problem = prob;
  out.z = z;
  const Vector n = prob->density_of(z);
  out.surface_tension =
      prob->grand_potential_excess(z, Vector::Constant(dens.size(), n_far));
  out.contact_density = n[dens.size() - 1];
  return out;
}

double Profile1D::operator()(double y) const {
  const auto& g = problem->grid().parts[0].g2;
  const double yy = y + center;
  if (!std::isfinite(yy)) return yy > 0 ? n_plus() : n_minus();
  if (yy <= g.map.lower()) return n_minus();
  return interpolation_row(g, yy).dot(n);
}

double Profile1D::n_minus() const { return n[n.size() - 1]; }  // lowest y
double Profile1D::n_plus() const { return n[0]; }

Profile1D profile_of(const PlanarResult& r, bool recenter) {
  Profile1D p;
  p.problem = r.problem;
  p.n = r.problem->density_of(r.z);
  p.center = 0.0;
  if (recenter) {
    const double nm = 0.5 * (p.n_minus() + p.n_plus());
    double a = -8.0, b = 8.0;
    auto f = [&](double y) { return p(y) - nm; };
    if (f(a) * f(b) < 0) {
      for (int i = 0; i < 100; ++i) {
        const double m = 0.5 * (a + b);
        if (f(a) * f(m) <= 0)
          b = m;
        else
          a = m;
      }
      p.center = 0.5 * (a + b);
    }
  }
  return p;
}

ContactLineResult contact_line_2d(const ContactLineOptions& opt, OperatorCache& cache) {
  ContactLineResult out;

  PlanarOptions lv;
  lv.n2 = std::max(100, 2 * opt.n);
  lv.L1 = 4.0;
  lv.T = opt.T;
  lv.r_c = opt.r_c;
  lv.solver = opt.solver;
  lv.solver.max_iter = 40000;
  PlanarResult lv_res = planar_interface_1d(PlanarKind::LiquidVapor, lv, cache);
  out.gamma_lv = lv_res.surface_tension;
  out.lv_profile = profile_of(lv_res, true);

  FluidSpec spec;
  spec.R = 0.5;
  spec.hard_sphere = true;
  spec.attraction = true;
  spec.T = opt.T;
  spec.r_c = opt.r_c;
  const Coexistence cx = coexistence(spec.bulk());
  out.coex = cx;
  spec.mu = cx.mu_sat;
  const double eps_w = opt.eps_w;
  spec.v_ext = [eps_w](double, double y2) { return wall_potential_93(y2, eps_w); };

  const int M_fmt = opt.M_fmt > 0 ? opt.M_fmt : default_M_fmt(opt.n);
  const int M_attr = opt.M_attr > 0 ? opt.M_attr : default_M_attr(opt.n);
  auto dens = halfspace_grid(opt.n, opt.n, opt.L1, opt.L2);
  auto wd = composite_weighted_density_grid(opt.n, opt.n, opt.L1, opt.L2, spec.R);
  auto prob = std::make_shared<FluidProblem>(spec, dens, wd, cache, M_fmt, M_attr);

  // far field: tilted 1D interface, liquid on the negative-y1 side
  auto far_density = [&](double y1, double y2) {
    const double s =
        std::isfinite(y1) ? y1 * std::sin(opt.theta) - y2 * std::cos(opt.theta) : y1;
    return out.lv_profile(s);
  };

  std::vector<int> pins;
  std::vector<double> pinvals;
  for (int i = 0; i < dens.size(); ++i) {
    const Point2 p = dens.point(i);
    if (p.y2 > opt.y2max) {
      pins.push_back(i);
      const double nfar =
          std::max(far_density(p.y1, std::isfinite(p.y2) ? p.y2 : opt.y2max), 1e-12);
      pinvals.push_back(spec.T * std::log(nfar));
    }
  }
  prob->pin(pins, Eigen::Map<Vector>(pinvals.data(), pinvals.size()));

  PlanarOptions wopt;
  wopt.n2 = std::max(60, opt.n);
  wopt.T = opt.T;
  wopt.r_c = opt.r_c;
  wopt.eps_w = opt.eps_w;
  wopt.solver = opt.solver;
  PlanarResult wl = planar_interface_1d(PlanarKind::WallLiquid, wopt, cache);
  PlanarResult wv = planar_interface_1d(PlanarKind::WallVapor, wopt, cache);
  Profile1D pl = profile_of(wl), pv = profile_of(wv);

  Vector n0(dens.size());
  for (int i = 0; i < dens.size(); ++i) {
    const Point2 p = dens.point(i);
    const double y2 = std::isfinite(p.y2) ? p.y2 : 1e6;
    const double blend = std::clamp(
        (far_density(p.y1, y2) - cx.n_vap) / std::max(cx.n_liq - cx.n_vap, 1e-12), 0.0,
        1.0);
    n0[i] = std::max(blend * pl(y2) + (1.0 - blend) * pv(y2), 1e-12);
  }
  Vector z = prob->z_of_density(n0);
  out.report = (opt.solver.scheme == SolverConfig::Scheme::Newton)
                   ? prob->newton(z, opt.solver)
                   : prob->picard(z, opt.solver);
  out.problem = prob;
  out.z = z;
  return out;
}

}  // namespace psdft
