// Acceptance suite: one test case per criterion, each printing a
// PASS/FAIL line with the measured numbers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "psdft/ddft.hpp"
#include "psdft/external_potential.hpp"
#include "psdft/multispecies.hpp"
#include "psdft/observables.hpp"
#include "psdft/solver.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace psdft;

namespace {
constexpr double kPi = std::numbers::pi;

void banner(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[ACCEPTANCE] %02d %-34s : %s  %s\n", idx, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double moment_quadrature_error(int degree, double L) {
  auto wl = make_mapped_grid(cheb_lobatto_grid(degree), DomainMap1D::algebraic_infinite(L));
  Vector f = Vector::Zero(wl.n_points());
  for (int i = 0; i < wl.n_points(); ++i) {
    const double y = wl.phys_nodes[i];
    if (std::isfinite(y)) f[i] = std::sqrt(2.0 / kPi) * y * y * std::exp(-0.5 * y * y);
  }
  return std::abs(quadrature(f, wl) - 2.0);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& logy) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += logy[i];
    sxx += x[i] * x[i];
    sxy += x[i] * logy[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("criterion 01 unbounded quadrature") {
  // error surface over (N, L1)
  const std::vector<int> Ns = {30, 40, 50, 60, 70, 80, 90, 100};
  const std::vector<double> Ls = {0.5, 1.0, 2.0, 3.0, 4.0};
  std::printf("    quadrature error surface (rows N, cols L1=0.5,1,2,3,4):\n");
  std::vector<std::vector<double>> surf(Ns.size(), std::vector<double>(Ls.size()));
  for (size_t i = 0; i < Ns.size(); ++i) {
    std::printf("      N=%3d:", Ns[i]);
    for (size_t j = 0; j < Ls.size(); ++j) {
      surf[i][j] = moment_quadrature_error(Ns[i], Ls[j]);
      std::printf(" %9.2e", surf[i][j]);
    }
    std::printf("\n");
  }

  // substance: exponential decay at L1 = 2 until round-off, below 1e-12 by
  // N = 100, and low sensitivity across L1 in [1, 4]
  const double e50 = surf[2][2], e70 = surf[4][2], e100 = surf[7][2];
  const bool decays = e70 < 1e-2 * e50 && e100 <= 1e-12;
  bool insensitive = true;
  for (size_t i = 0; i < Ns.size(); ++i) {
    double lo = kInf, hi = 0;
    for (size_t j = 1; j < Ls.size(); ++j) {
      lo = std::min(lo, surf[i][j]);
      hi = std::max(hi, surf[i][j]);
    }
    // pre-round-off rows: L1 in [1,4] spans a few orders at most, while
    // the too-small map length is far off the optimum
    if (hi < 1e-13) continue;
    if (hi > 1e4 * std::max(lo, 1e-15)) insensitive = false;
    if (surf[i][0] > 1e-12 && surf[i][0] < 10 * hi) insensitive = false;
  }
  CHECK(decays);
  CHECK(insensitive);

  // verbatim tolerance line: < 1e-12 already at N = 50 and L1 = 2. This is
  // unattainable with the printed Clenshaw-Curtis + algebraic-map quadrature
  // (measured ~8e-9; two independent implementations agree; the tolerance is
  // reached near N = 85). Asserted as stated; see the decisions ledger.
  std::printf("    verbatim check: err(N=50, L1=2) = %.3e (stated < 1e-12, reached at N>=%s)\n",
              e50, "85");
  const bool verbatim = e50 < 1e-12;
  CHECK_MESSAGE(verbatim,
                "spec-defect: quadrature error at N=50, L1=2 is ~8e-9, not < 1e-12");
  char buf[200];
  std::snprintf(buf, sizeof(buf), "err(N=50)=%.2e err(N=100)=%.2e%s", e50, e100,
                verbatim ? "" : " [verbatim N=50 tolerance unattainable, see ledger]");
  banner(1, "unbounded quadrature", decays && insensitive && verbatim, buf);
}

TEST_CASE("criterion 02 operator convergence") {
  auto src = halfspace_grid(20, 20, 2.0, 2.0);
  auto wd = composite_weighted_density_grid(20, 20, 2.0, 2.0);
  const std::vector<int> Ms = {20, 25, 30, 35, 40, 45, 50, 55, 60};

  auto slope_for = [&](const Kernel& k, const CompositeGrid2D& tgt) {
    auto rows = convergence_probe(src, tgt, k, Ms);
    std::vector<double> mid, lg;
    std::printf("    %-10s increments:", k.name.c_str());
    for (const auto& r : rows) {
      std::printf(" %.1e", r.increment);
      if (r.increment > 1e-15) {
        mid.push_back(0.5 * (r.M_lo + r.M_hi));
        lg.push_back(std::log(r.increment));
      }
    }
    const double s = fit_slope(mid, lg);
    std::printf("   slope %.3f\n", s);
    return s;
  };

  const double s_w2 = slope_for(kernel_hs_w2(0.5), wd);
  const double s_w3 = slope_for(kernel_hs_w3(0.5), wd);
  const double s_v = slope_for(kernel_hs_vw2(0.5, false), wd);
  const double s_at = slope_for(kernel_attraction(2.5), src);
  const double s_ainf = slope_for(kernel_attraction(kInf), src);

  bool pass = true;
  for (double s : {s_w2, s_w3, s_v, s_at})
    if (!(s < -0.1)) pass = false;
  // the unbounded tail converges demonstrably slower: at least three times
  // shallower than every FMT weight, and shallower than the cutoff tail
  const double ref_fmt = std::min(std::min(-s_w2, -s_w3), -s_v);
  if (!(-s_ainf < ref_fmt / 3.0 && -s_ainf < -s_at)) pass = false;
  CHECK(s_w2 < -0.1);
  CHECK(s_w3 < -0.1);
  CHECK(s_v < -0.1);
  CHECK(s_at < -0.1);
  CHECK(-s_ainf < ref_fmt / 3.0);
  CHECK(-s_ainf < -s_at);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "slopes w2=%.2f w3=%.2f vw2=%.2f attr=%.2f attr_inf=%.2f",
                s_w2, s_w3, s_v, s_at, s_ainf);
  banner(2, "operator convergence", pass, buf);
}

TEST_CASE("criterion 03 hard-sphere contact theorem") {
  OperatorCache cache;
  PlanarOptions opt;
  opt.n2 = 100;
  opt.L2 = 2.0;
  opt.n_bulk = 0.7151;
  auto res = planar_interface_1d(PlanarKind::HardSphereWall, opt, cache);
  REQUIRE(res.report.converged);
  auto sr = contact_theorem_check(*res.problem, res.z, opt.n_bulk, {});
  const double eta = kPi * opt.n_bulk / 6.0;
  const double spt = opt.n_bulk * (1 + eta + eta * eta) / std::pow(1 - eta, 3);
  const double bp_err = std::abs(sr.beta_p - spt);
  const bool pass = sr.relative_error < 1e-3 && bp_err < 1e-10;
  CHECK(sr.relative_error < 1e-3);
  CHECK(bp_err < 1e-10);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "sum-rule err %.2e, |beta p - SPT| = %.1e", sr.relative_error,
                bp_err);
  banner(3, "hard-sphere contact theorem", pass, buf);
}

TEST_CASE("criterion 04 coexistence") {
  BulkModel m;
  m.T = 0.75;
  m.excess = BulkModel::Excess::HardSphere;
  m.attraction = true;
  m.r_c = 2.5;
  auto c = coexistence(m);
  const double ev = std::abs(c.n_vap - 0.028) / 0.028;
  const double el = std::abs(c.n_liq - 0.622) / 0.622;
  const bool pass = ev < 0.02 && el < 0.02;
  CHECK(ev < 0.02);
  CHECK(el < 0.02);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "n_vap=%.5f n_liq=%.5f (targets 0.028, 0.622)", c.n_vap,
                c.n_liq);
  banner(4, "coexistence", pass, buf);
}

TEST_CASE("criterion 05 sum-rule L2 insensitivity") {
  bool pass = true;
  std::string detail;
  for (double L2 : {0.5, 1.0, 2.0, 3.5}) {
    OperatorCache cache;
    PlanarOptions opt;
    opt.n2 = 100;
    opt.L2 = L2;
    opt.T = 0.75;
    opt.r_c = 2.5;
    opt.eps_w = 0.865;
    auto res = planar_interface_1d(PlanarKind::WallLiquid, opt, cache);
    REQUIRE(res.report.converged);
    const auto cx = coexistence(res.problem->spec().bulk());
    auto dv = [](double y2) { return wall_potential_93_dy(y2, 0.865); };
    auto sr = contact_theorem_check(*res.problem, res.z, cx.n_liq, dv);
    // normalization follows the paper: defect over the contact density
    std::printf("    L2=%.1f: contact-relative sum-rule error %.3e\n", L2,
                sr.relative_error_contact);
    CHECK(sr.relative_error_contact < 5e-4);
    if (!(sr.relative_error_contact < 5e-4)) pass = false;
    detail += (detail.empty() ? "" : ", ") + std::to_string(sr.relative_error_contact);
  }
  banner(5, "sum-rule L2 insensitivity", pass, "errors: " + detail);
}

TEST_CASE("criterion 06 kernel identities") {
  const double rc = 2.5;
  const double cont =
      std::abs(phi2d_attr(std::nextafter(1.0, 0.0), rc) - phi2d_attr(1.0, rc));

  // integral of the projected attraction: inner disk via the sine
  // substitution (smooth integrand), analytic tail
  auto inner_integral = [&]() {
    const int n = 20000;
    const double h = 0.5 * kPi / (2 * n);
    auto f = [&](double u) {
      const double r = std::sin(u);
      return phi2d_attr(r, rc) * r * std::cos(u);
    };
    double acc = f(0.0) + f(0.5 * kPi - 1e-14);
    for (int i = 1; i < 2 * n; ++i) acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return 2 * kPi * acc * h / 3.0;
  };
  const double scale = 1.0 / energy_scale_ratio(rc);
  const double tail = scale * 2 * kPi * kPi *
                      ((63.0 / 576.0) * (std::pow(rc, -9) - 1.0) * (-1.0) -
                       0.5 * (1.0 - std::pow(rc, -3)));
  const double total = inner_integral() + tail;
  const double int_err = std::abs(total + (32.0 / 9.0) * kPi);

  // ball-volume identity for the projected step kernel
  const double R = 0.5;
  double ball = 0;
  {
    const int n = 20000;
    const double h = 0.5 * kPi / (2 * n);
    auto f = [&](double u) {
      const double r = R * std::sin(u);
      return phi2d_omega3(r, R) * r * R * std::cos(u);
    };
    double acc = f(0.0) + f(0.5 * kPi - 1e-14);
    for (int i = 1; i < 2 * n; ++i) acc += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    ball = 2 * kPi * acc * h / 3.0;
  }
  const double ball_err = std::abs(ball - (4.0 / 3.0) * kPi * R * R * R);
  const double ratio_err = std::abs(energy_scale_ratio(2.5) - 0.943502);

  const bool pass = cont < 1e-12 && int_err < 1e-8 && ball_err < 1e-8 && ratio_err < 1e-6;
  CHECK(cont < 1e-12);
  CHECK(int_err < 1e-8);
  CHECK(ball_err < 1e-8);
  CHECK(ratio_err < 1e-6);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "continuity %.1e, attr integral err %.1e, ball err %.1e, ratio err %.1e",
                cont, int_err, ball_err, ratio_err);
  banner(6, "kernel identities", pass, buf);
}

TEST_CASE("criterion 07 contact line force balance") {
  std::vector<double> dpis, errs;
  bool farfield_ok = true;
  double worst_far = 0;
  for (int N : {20, 25, 30}) {
    OperatorCache cache;
    ContactLineOptions opt;
    opt.n = N;
    opt.solver.max_iter = 40000;
    auto res = contact_line_2d(opt, cache);
    REQUIRE(res.report.converged);

    auto dv = [](double y2) { return wall_potential_93_dy(y2, 0.865); };
    const double p_sat = res.problem->spec().bulk().pressure(res.coex.n_liq);
    auto dp = disjoining_pressure(*res.problem, res.z, p_sat, dv);
    auto fb = normal_force_balance(dp, res.gamma_lv, opt.theta);
    dpis.push_back(fb.delta_pi);
    errs.push_back(fb.relative_error);
    std::printf("    N=%d: delta_pi=%.3e  force-balance err=%.3e  gamma_lv=%.5f\n", N,
                fb.delta_pi, fb.relative_error, res.gamma_lv);

    // far-field slices against planar profiles at matching resolution
    PlanarOptions wopt;
    wopt.n2 = N;
    wopt.T = opt.T;
    wopt.r_c = opt.r_c;
    wopt.eps_w = opt.eps_w;
    auto wl = planar_interface_1d(PlanarKind::WallLiquid, wopt, cache);
    auto wv = planar_interface_1d(PlanarKind::WallVapor, wopt, cache);
    const Vector n2d = res.problem->density_of(res.z);
    const auto& g = res.problem->grid().parts[0];
    const Vector nl1 = wl.problem->density_of(wl.z);
    const Vector nv1 = wv.problem->density_of(wv.z);
    // second-outermost finite column on each side (liquid at negative y1)
    for (int i1 : {2, g.n1() - 3}) {
      const double y1 = g.g1.phys_nodes[i1];
      const Vector& ref = (y1 < 0) ? nl1 : nv1;
      for (int i2 = 0; i2 < g.n2(); ++i2) {
        if (!std::isfinite(g.g2.phys_nodes[i2])) continue;
        if (g.g2.phys_nodes[i2] > opt.y2max) continue;
        worst_far = std::max(worst_far, std::abs(n2d[i1 * g.n2() + i2] - ref[i2]));
      }
    }
  }
  if (worst_far >= 1e-3) farfield_ok = false;
  const bool mono_dpi = dpis[1] < dpis[0] && dpis[2] < dpis[1];
  const bool mono_err = errs[1] < errs[0] && errs[2] < errs[1];
  const bool improves = dpis[2] < dpis[0] && errs[2] < errs[0];
  if (!(mono_dpi && mono_err)) {
    // analysis: the plateaus inherit the planar wall-liquid sum-rule
    // defect at matching resolution, whose sign alternates with N at this
    // coarse range; print the underlying 1D curve
    std::printf(
        "    strict monotonicity analysis: planar wall-liquid defect vs N (Pi units)\n");
    OperatorCache cache;
    auto dv = [](double y2) { return wall_potential_93_dy(y2, 0.865); };
    for (int N = 19; N <= 33; N += 2) {
      PlanarOptions wopt;
      wopt.n2 = N;
      wopt.T = 0.75;
      wopt.r_c = 2.5;
      wopt.eps_w = 0.865;
      auto wl = planar_interface_1d(PlanarKind::WallLiquid, wopt, cache);
      const auto cx = coexistence(wl.problem->spec().bulk());
      auto sr = contact_theorem_check(*wl.problem, wl.z, cx.n_liq, dv);
      std::printf("      N=%2d: %+.3e\n", N,
                  0.75 * (sr.contact_density - sr.beta_p - sr.wall_integral));
    }
  }
  CHECK(improves);
  CHECK(farfield_ok);
  // verbatim strict monotone decrease over {20, 25, 30}: the envelope of
  // the plateau error decays but its sign alternates with N, so the strict
  // three-point ordering is not robust; see the decisions ledger
  CHECK(mono_dpi);
  CHECK(mono_err);
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "dPi: %.2e,%.2e,%.2e err: %.2e,%.2e,%.2e far-field %.1e%s", dpis[0],
                dpis[1], dpis[2], errs[0], errs[1], errs[2], worst_far,
                (mono_dpi && mono_err) ? "" : " [strict monotonicity unattainable, see ledger]");
  banner(7, "contact line force balance", mono_dpi && mono_err && farfield_ok, buf);
}

TEST_CASE("criterion 08 ddft mass audit") {
  std::vector<double> over, inert;
  double dtau20 = 0, dend20 = 0;
  for (int N : {20, 30, 40}) {
    OperatorCache cache;
    ContactLineOptions opt;
    opt.n = N;
    opt.solver.max_iter = 40000;
    auto eq = contact_line_2d(opt, cache);
    REQUIRE(eq.report.converged);
    DdftSystem::TimePotential pot;
    pot.v = [](double, double y2, double t) {
      return dynamic_wall_potential(y2, t, 0.865, 1.0, 5.0);
    };
    pot.dv_dy2 = [](double, double y2, double t) {
      return wall_potential_93_dy(y2, 0.865) * dynamic_wall_factor(t, 0.865, 1.0, 5.0);
    };
    for (bool inertial : {false, true}) {
      DdftSystem sys(eq.problem, inertial, 2.0, pot, true);
      OdeOptions oopt;
      oopt.rtol = 1e-7;
      oopt.atol = 1e-10;
      std::vector<double> ts(151);
      for (int i = 0; i < 151; ++i) ts[i] = 15.0 * i / 150.0;
      auto traj = integrate_implicit(sys.ode(), 0.0,
                                     sys.pack(eq.problem->density_of(eq.z)), ts, oopt);
      auto led = mass_audit(sys, traj, Rect{-2, 2, 0, 2});
      std::printf("    N=%d %s: max mass-error rate %.3e (steps %d, jacobians %d)\n", N,
                  inertial ? "inertial " : "overdamped", led.max_err_rate, traj.steps,
                  traj.jacobian_evals);
      std::fflush(stdout);
      (inertial ? inert : over).push_back(led.max_err_rate);
      if (N == 20 && !inertial) {
        const Vector n0 = sys.density_part(traj.y.front());
        for (size_t k = 0; k < traj.t.size(); ++k) {
          const double d = (sys.density_part(traj.y[k]) - n0).cwiseAbs().maxCoeff();
          if (std::abs(traj.t[k] - 5.0) < 0.05) dtau20 = d;
          if (k + 1 == traj.t.size()) dend20 = d;
        }
      }
    }
  }
  const bool mono_over = over[1] < over[0] && over[2] < over[1];
  const bool mono_inert = inert[1] < inert[0] && inert[2] < inert[1];
  const bool relaxes = dend20 < dtau20;
  CHECK(mono_over);
  CHECK(mono_inert);
  CHECK(relaxes);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "overdamped %.1e>%.1e>%.1e, inertial %.1e>%.1e>%.1e",
                over[0], over[1], over[2], inert[0], inert[1], inert[2]);
  banner(8, "ddft mass audit", mono_over && mono_inert && relaxes, buf);
}

TEST_CASE("criterion 09 multispecies spectral convergence") {
  // gaussian soft mixture in the box
  auto probe_all = [](const MixtureResult& r, double a, double b, double c, double d) {
    std::vector<Vector> out;
    for (const auto& nk : r.n) out.push_back(probe_field(r.grid, nk, a, b, c, d, 100, 100));
    return out;
  };

  bool pass = true;
  std::string detail;
  {
    std::vector<std::vector<Vector>> probes;
    std::vector<double> mass_defect;
    for (int N : {30, 40, 50, 60}) {
      OperatorCache cache;
      SoftMixtureOptions opt;
      opt.n = N;
      auto res = solve_soft_mixture(opt, cache);
      REQUIRE(res.converged);
      probes.push_back(probe_all(res, 0, 10, 0, 10));
      double md = 0;
      for (size_t k = 0; k < res.mass.size(); ++k)
        md = std::max(md, std::abs(res.mass[k] - opt.particles[k]));
      mass_defect.push_back(md);
      // at the trap center the smaller species piles highest
      if (N == 50) {
        const double m0 = res.grid.interp_row(8.0, 7.0).dot(res.n[0]);
        const double m1 = res.grid.interp_row(8.0, 7.0).dot(res.n[1]);
        const double m2 = res.grid.interp_row(8.0, 7.0).dot(res.n[2]);
        CHECK(m0 > m1);
        CHECK(m1 > m2);
        if (!(m0 > m1 && m1 > m2)) pass = false;
      }
    }
    std::vector<double> incs;
    for (size_t i = 1; i < probes.size(); ++i) {
      double num = 0, den = 0;
      for (size_t k = 0; k < probes[i].size(); ++k) {
        num = std::max(num, (probes[i][k] - probes[i - 1][k]).norm());
        den = std::max(den, probes.back()[k].norm());
      }
      incs.push_back(num / den);
    }
    std::printf("    gaussian increments:");
    for (double v : incs) std::printf(" %.3e", v);
    std::printf("  mass defect %.1e\n", mass_defect.back());
    CHECK(incs[1] < 0.5 * incs[0]);
    CHECK(incs[2] < 0.5 * incs[1]);
    CHECK(mass_defect.back() < 1e-8 * 20.0);
    if (!(incs[1] < 0.5 * incs[0] && incs[2] < 0.5 * incs[1])) pass = false;
    detail += "gauss incs " + std::to_string(incs[0]) + ">" + std::to_string(incs[1]) +
              ">" + std::to_string(incs[2]);
  }
  {
    std::vector<std::vector<Vector>> probes;
    std::vector<double> mass_defect;
    for (int N : {16, 24, 32, 40}) {
      OperatorCache cache;
      HardDiskMixtureOptions opt;
      opt.n = N;
      auto res = solve_hard_disk_mixture(opt, cache);
      REQUIRE(res.converged);
      probes.push_back(probe_all(res, -2, 2, -2, 2));
      double md = 0;
      for (size_t k = 0; k < res.mass.size(); ++k)
        md = std::max(md, std::abs(res.mass[k] - opt.particles));
      mass_defect.push_back(md);
    }
    std::vector<double> incs;
    for (size_t i = 1; i < probes.size(); ++i) {
      double num = 0, den = 0;
      for (size_t k = 0; k < probes[i].size(); ++k) {
        num = std::max(num, (probes[i][k] - probes[i - 1][k]).norm());
        den = std::max(den, probes.back()[k].norm());
      }
      incs.push_back(num / den);
    }
    std::printf("    hard-disk increments:");
    for (double v : incs) std::printf(" %.3e", v);
    std::printf("  mass defect %.1e\n", mass_defect.back());
    CHECK(incs[1] < 0.5 * incs[0]);
    CHECK(incs[2] < 0.5 * incs[1]);
    CHECK(mass_defect.back() < 1e-8 * 10.0);
    if (!(incs[1] < 0.5 * incs[0] && incs[2] < 0.5 * incs[1])) pass = false;
  }
  banner(9, "multispecies convergence", pass, detail);
}

TEST_CASE("criterion 10 property suites") {
  bool pass = true;
  // finite-difference agreement of the free-energy partials
  {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const double n2 = u(rng) * 2.5, n3 = u(rng) * 0.9;
      const double vx = (u(rng) - 0.5) * 0.8, vy = (u(rng) - 0.5) * 0.8;
      auto d = hs_reduced(0.5, n2, n3, vx, vy);
      const double h = 1e-6;
      auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max(1.0, std::abs(b));
      };
      worst = std::max(worst, rel(d.dn2, (hs_reduced(0.5, n2 + h, n3, vx, vy).phi -
                                          hs_reduced(0.5, n2 - h, n3, vx, vy).phi) /
                                             (2 * h)));
      worst = std::max(worst, rel(d.dn3, (hs_reduced(0.5, n2, n3 + h, vx, vy).phi -
                                          hs_reduced(0.5, n2, n3 - h, vx, vy).phi) /
                                             (2 * h)));
      worst = std::max(worst, rel(d.dvx, (hs_reduced(0.5, n2, n3, vx + h, vy).phi -
                                          hs_reduced(0.5, n2, n3, vx - h, vy).phi) /
                                             (2 * h)));
      const double t11 = (u(rng) - 0.5) * 0.4, t12 = (u(rng) - 0.5) * 0.4,
                   t22 = (u(rng) - 0.5) * 0.4;
      auto hd = hd_reduced(0.5, n2, n3, vx, vy, t11, t12, t22);
      worst = std::max(
          worst, rel(hd.dt12, (hd_reduced(0.5, n2, n3, vx, vy, t11, t12 + h, t22).phi -
                               hd_reduced(0.5, n2, n3, vx, vy, t11, t12 - h, t22).phi) /
                                  (2 * h)));
    }
    std::printf("    free-energy partials vs finite differences: worst %.2e\n", worst);
    CHECK(worst < 1e-5);
    if (!(worst < 1e-5)) pass = false;
  }

  // jacobian-vector products of the Euler-Lagrange residual
  {
    OperatorCache cache;
    FluidSpec spec;
    spec.T = 0.75;
    spec.hard_sphere = true;
    spec.attraction = true;
    spec.r_c = 2.5;
    spec.mu = coexistence(spec.bulk()).mu_sat;
    spec.v_ext = [](double, double y2) { return wall_potential_93(y2, 0.865); };
    auto dens = halfspace_grid(1, 40, 2.0, 2.0);
    auto wd = composite_weighted_density_grid(1, 40, 2.0, 2.0);
    FluidProblem prob(spec, dens, wd, cache, 30, 40);
    Vector z = prob.initial_z(0.62);
    const Vector n = prob.density_of(z);
    const Matrix U = prob.excess_mu_jacobian(n);
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      Vector v(dens.size());
      for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      const double h = 1e-6;
      const Vector fd = (prob.residual(z + h * v) - prob.residual(z - h * v)) / (2 * h);
      const Vector an = v + U * (n.cwiseProduct(v) / spec.T);
      worst = std::max(worst,
                       (fd - an).cwiseAbs().maxCoeff() / an.cwiseAbs().maxCoeff());
    }
    std::printf("    jacobian-vector vs directional differences: worst %.2e\n", worst);
    CHECK(worst < 1e-5);
    if (!(worst < 1e-5)) pass = false;
  }

  // spectral identity for the vector weight
  {
    OperatorCache cache;
    auto src = halfspace_grid(30, 36, 2.0, 2.0);
    auto wd = composite_weighted_density_grid(30, 36, 2.0, 2.0);
    Vector n = src.sample([](double y1, double y2) {
      return std::exp(-0.3 * (y1 * y1 + (y2 - 2.0) * (y2 - 2.0)));
    });
    auto op3 = build_operator(src, wd, kernel_hs_w3(0.5), 40);
    auto opv = build_operator(src, wd, kernel_hs_vw2(0.5, false), 40);
    Vector n3 = op3.apply(n);
    Vector v1 = opv.apply(n, 0), v2 = opv.apply(n, 1);
    double worst = 0;
    int off = 0;
    for (const auto& part : wd.parts) {
      Matrix D1 = part.d1(), D2 = part.d2();
      Vector g1 = D1 * n3.segment(off, part.size());
      Vector g2 = D2 * n3.segment(off, part.size());
      for (int i = 0; i < part.size(); ++i) {
        const Point2 p = part.point(i);
        if (!std::isfinite(p.y1) || !std::isfinite(p.y2)) continue;
        if (std::abs(p.y1) > 4.0 || p.y2 > 6.0) continue;
        worst = std::max(worst, std::abs(v1[off + i] + g1[i]));
        worst = std::max(worst, std::abs(v2[off + i] + g2[i]));
      }
      off += part.size();
    }
    std::printf("    vector weight vs negative packing gradient: worst %.2e\n", worst);
    CHECK(worst < 1e-4);
    if (!(worst < 1e-4)) pass = false;
  }

  // intersection areas against a 1e7-sample hit-or-miss oracle
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uy(0.05, 2.2);
    double worst = 0;
    for (int trial = 0; trial < 4; ++trial) {
      const double y = uy(rng);
      auto in = assemble_intersection({SupportKind::AnnulusFinite, 0, 1.0, 2.5}, y, 40);
      double area = 0;
      for (const auto& piece : in.pieces)
        for (int i = 0; i < piece.size(); ++i)
          if (std::isfinite(piece.w[i])) area += piece.w[i];
      // oracle
      std::mt19937 mc(1234 + trial);
      std::uniform_real_distribution<double> ux(-2.6, 2.6);
      long hits = 0;
      const long nsamp = 10000000;
      for (long s = 0; s < nsamp; ++s) {
        const double x1 = ux(mc), x2 = ux(mc);
        if (x2 <= -y) continue;
        const double r = std::hypot(x1, x2);
        if (r >= 1.0 && r <= 2.5) ++hits;
      }
      const double mc_area = 5.2 * 5.2 * static_cast<double>(hits) / nsamp;
      worst = std::max(worst, std::abs(area - mc_area) / mc_area);
    }
    std::printf("    intersection areas vs monte carlo: worst relative %.2e\n", worst);
    CHECK(worst < 1e-3);
    if (!(worst < 1e-3)) pass = false;
  }

  banner(10, "property suites", pass, "");
}
