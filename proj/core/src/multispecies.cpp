#include "psdft/multispecies.hpp"

#include "psdft/free_energy.hpp"
#include "psdft/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;
}

MixtureResult solve_soft_mixture(const SoftMixtureOptions& opt, OperatorCache& cache) {
  const int ns = static_cast<int>(opt.alpha.size());
  if (static_cast<int>(opt.particles.size()) != ns)
    throw std::invalid_argument("solve_soft_mixture: species count mismatch");

  auto grid = box_grid(opt.n, opt.n, 0.0, opt.box, 0.0, opt.box);
  const int nd = grid.size();

  // pair operators keyed by sigma_ij = (alpha_i + alpha_j) / 2
  std::vector<std::vector<std::shared_ptr<const ConvolutionOperator>>> pair_op(
      ns, std::vector<std::shared_ptr<const ConvolutionOperator>>(ns));
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) {
      const double sigma = 0.5 * (opt.alpha[i] + opt.alpha[j]);
      pair_op[i][j] = cache.get(grid, grid, kernel_gaussian(sigma), opt.M);
    }

  Vector v_ext(nd);
  for (int i = 0; i < nd; ++i) {
    const Point2 p = grid.point(i);
    v_ext[i] = opt.trap_strength *
               ((p.y1 - opt.trap_x) * (p.y1 - opt.trap_x) +
                (p.y2 - opt.trap_y) * (p.y2 - opt.trap_y));
  }

  MixtureResult out;
  out.grid = grid;
  out.n.assign(ns, Vector::Zero(nd));
  out.mu.assign(ns, 0.0);
  out.mass.assign(ns, 0.0);

  const double T = opt.T;
  std::vector<Vector> z(ns);
  for (int k = 0; k < ns; ++k) {
    const double n0 = opt.particles[k] / (opt.box * opt.box);
    z[k] = Vector::Constant(nd, T * std::log(n0));
    out.mu[k] = T * std::log(n0);
  }

  auto species_mass = [&](const Vector& zk) {
    return quadrature_excess(grid, (zk / T).array().exp().matrix());
  };

  // the particle-number constraint is imposed inside the sweep: after each
  // relaxation step every species is rescaled to its target mass (an exact
  // shift of z and mu). The cross-species mu response is strongly coupled,
  // so a nested outside loop converges poorly; see the decisions ledger.
  double resid = kInf, lam = opt.solver.lambda_init;
  double prev = kInf;
  double worst_mass = kInf;
  for (int it = 0; it < opt.solver.max_iter; ++it) {
    std::vector<Vector> dens(ns);
    for (int k = 0; k < ns; ++k) dens[k] = (z[k] / T).array().exp();
    resid = 0;
    for (int k = 0; k < ns; ++k) {
      Vector mean_field = Vector::Zero(nd);
      for (int j = 0; j < ns; ++j) mean_field += pair_op[k][j]->apply(dens[j]);
      Vector r = z[k] + mean_field + v_ext;
      r.array() -= out.mu[k];
      resid = std::max(resid, r.cwiseAbs().maxCoeff());
      z[k] -= lam * r;
    }
    worst_mass = 0;
    for (int k = 0; k < ns; ++k) {
      const double m = species_mass(z[k]);
      if (!std::isfinite(m) || m <= 0)
        throw std::runtime_error("solve_soft_mixture: species mass became invalid");
      worst_mass = std::max(worst_mass, std::abs(m - opt.particles[k]));
      const double shift = T * std::log(opt.particles[k] / m);
      z[k].array() += shift;
      out.mu[k] += shift;
    }
    out.outer_iterations = it + 1;
    if (resid < opt.solver.tol && worst_mass < opt.mass_tol) {
      out.converged = true;
      break;
    }
    if (it >= opt.solver.lambda_switch_iter) {
      if (resid <= prev)
        lam = std::min(1.07 * lam, opt.solver.lambda_final);
      else
        lam = std::max(0.4 * lam, 0.25 * opt.solver.lambda_init);
    }
    prev = resid;
  }

  for (int k = 0; k < ns; ++k) {
    out.n[k] = (z[k] / T).array().exp();
    out.mass[k] = species_mass(z[k]);
  }
  return out;
}

MixtureResult solve_hard_disk_mixture(const HardDiskMixtureOptions& opt,
                                      OperatorCache& cache) {
  const int ns = 2;
  auto grid = plane_grid(opt.n, opt.n, opt.L, opt.L);
  const int nd = grid.size();
  const double T = opt.T, R = opt.R;

  auto w2 = cache.get(grid, grid, kernel_hd_w2(R), opt.M);
  auto w3 = cache.get(grid, grid, kernel_hd_w3(R), opt.M);
  auto v2 = cache.get(grid, grid, kernel_hd_v2(R, false), opt.M);
  auto t2 = cache.get(grid, grid, kernel_hd_t2(R), opt.M);
  auto v2r = cache.get(grid, grid, kernel_hd_v2(R, true), opt.M);
  // scalar and tensor shell weights are even: reversed operators coincide

  // confining background goes into the unbounded part of the potential
  Vector v_bar(nd);
  for (int i = 0; i < nd; ++i) {
    const Point2 p = grid.point(i);
    v_bar[i] = (std::isfinite(p.y1) && std::isfinite(p.y2))
                   ? 0.01 * (p.y1 * p.y1 + p.y2 * p.y2)
                   : kInf;
  }
  // per-species wells
  const double wx1[3] = {-1.0, 0.75, 0.0}, wy1[3] = {0.0, 0.0, 0.75};
  const double wx2[3] = {-0.75, 1.0, 0.0}, wy2[3] = {-0.25, -0.25, 0.75};
  std::vector<Vector> v_wells(ns, Vector::Zero(nd));
  for (int i = 0; i < nd; ++i) {
    const Point2 p = grid.point(i);
    if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) continue;
    for (int l = 0; l < 3; ++l) {
      const double d1 = (p.y1 - wx1[l]) * (p.y1 - wx1[l]) + (p.y2 - wy1[l]) * (p.y2 - wy1[l]);
      const double d2 = (p.y1 - wx2[l]) * (p.y1 - wx2[l]) + (p.y2 - wy2[l]) * (p.y2 - wy2[l]);
      v_wells[0][i] += -3.0 * std::exp(-2.0 * d1);
      v_wells[1][i] += -3.0 * std::exp(-2.0 * d2);
    }
  }

  MixtureResult out;
  out.grid = grid;
  out.n.assign(ns, Vector::Zero(nd));
  out.mu.assign(ns, 0.0);
  out.mass.assign(ns, 0.0);

  auto density_of = [&](const Vector& zk) {
    Vector n(nd);
    for (int i = 0; i < nd; ++i) {
      const double e = (zk[i] - v_bar[i]) / T;
      n[i] = std::isfinite(v_bar[i]) ? std::exp(e) : 0.0;
    }
    return n;
  };

  // ideal-gas start z = T log(c) - wells (bounded everywhere), normalized
  // to the particle number and capped below the packing bound
  const double n_cap = 0.45 / (kPi * R * R);
  std::vector<Vector> z(ns);
  for (int k = 0; k < ns; ++k) {
    Vector z0 = -v_wells[k];
    const double mass0 = quadrature_excess(grid, density_of(z0));
    z0.array() += T * std::log(opt.particles / mass0);
    for (int i = 0; i < nd; ++i)
      if (std::isfinite(v_bar[i]))
        z0[i] = std::min(z0[i], T * std::log(n_cap) + v_bar[i]);
    z[k] = z0;
    out.mu[k] = 0.0;
  }

  double lam = opt.solver.lambda_init;
  double prev = kInf;
  for (int it = 0; it < opt.solver.max_iter; ++it) {
    std::vector<Vector> dens(ns);
    Vector ntot = Vector::Zero(nd);
    for (int k = 0; k < ns; ++k) {
      dens[k] = density_of(z[k]);
      ntot += dens[k];
    }
    // weighted densities of the total density (common radius)
    Vector a2 = w2->apply(ntot);
    Vector a3 = w3->apply(ntot);
    Vector avx = v2->apply(ntot, 0), avy = v2->apply(ntot, 1);
    Vector a11 = t2->apply(ntot, 0), a12 = t2->apply(ntot, 1), a22t = t2->apply(ntot, 2);
    Vector s2(nd), s3(nd), svx(nd), svy(nd), s11(nd), s12(nd), s22(nd);
    for (int i = 0; i < nd; ++i) {
      if (a3[i] >= 1.0)
        throw PackingError("hard-disk packing weighted density reached 1 at node " +
                           std::to_string(i));
      const auto d = hd_reduced(R, a2[i], a3[i], avx[i], avy[i], a11[i], a12[i], a22t[i]);
      s2[i] = d.dn2;
      s3[i] = d.dn3;
      svx[i] = d.dvx;
      svy[i] = d.dvy;
      s11[i] = d.dt11;
      s12[i] = d.dt12;
      s22[i] = d.dt22;
    }
    const Vector mu_ex = T * (w2->apply(s2) + w3->apply(s3) + v2r->apply(svx, 0) +
                              v2r->apply(svy, 1) + t2->apply(s11, 0) + t2->apply(s12, 1) +
                              t2->apply(s22, 2));
    double resid = 0;
    for (int k = 0; k < ns; ++k) {
      Vector r = z[k] + mu_ex + v_wells[k];
      r.array() -= out.mu[k];
      resid = std::max(resid, r.cwiseAbs().maxCoeff());
      z[k] -= lam * r;
    }
    double worst_mass = 0;
    for (int k = 0; k < ns; ++k) {
      const double m = quadrature_excess(grid, density_of(z[k]));
      if (!std::isfinite(m) || m <= 0)
        throw std::runtime_error("solve_hard_disk_mixture: species mass became invalid");
      worst_mass = std::max(worst_mass, std::abs(m - opt.particles));
      const double shift = T * std::log(opt.particles / m);
      z[k].array() += shift;
      out.mu[k] += shift;
    }
    out.outer_iterations = it + 1;
    if (resid < opt.solver.tol && worst_mass < opt.mass_tol) {
      out.converged = true;
      break;
    }
    if (it >= opt.solver.lambda_switch_iter) {
      if (resid <= prev)
        lam = std::min(1.07 * lam, opt.solver.lambda_final);
      else
        lam = std::max(0.4 * lam, 0.25 * opt.solver.lambda_init);
    }
    prev = resid;
  }

  for (int k = 0; k < ns; ++k) {
    out.n[k] = density_of(z[k]);
    out.mass[k] = quadrature_excess(grid, out.n[k]);
  }
  return out;
}

Vector probe_field(const CompositeGrid2D& grid, const Vector& values, double a, double b,
                   double c, double d, int nx, int ny) {
  Vector out(nx * ny);
  for (int i = 0; i < nx; ++i) {
    const double x = (nx > 1) ? a + (b - a) * i / (nx - 1.0) : a;
    for (int j = 0; j < ny; ++j) {
      const double y = (ny > 1) ? c + (d - c) * j / (ny - 1.0) : c;
      out[i * ny + j] = grid.interp_row(x, y).dot(values);
    }
  }
  return out;
}

}  // namespace psdft
