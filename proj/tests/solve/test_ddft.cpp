#include "doctest.h"
#include "psdft/ddft.hpp"
#include "psdft/external_potential.hpp"

#include <cmath>
#include <numbers>

using namespace psdft;
namespace {
constexpr double kPi = std::numbers::pi;
OperatorCache g_cache;

std::vector<double> times(double t_end, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_end * i / (n - 1.0);
  return t;
}
}  // namespace

TEST_CASE("linear test equation") {
  OdeSystem sys;
  sys.n = 1;
  sys.mass = Vector::Ones(1);
  sys.rhs = [](double, const Vector& y, Vector& f) { f = -y; };
  sys.jacobian = [](double, const Vector&, Matrix& J) { J = -Matrix::Ones(1, 1); };
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-13;
  auto traj = integrate_implicit(sys, 0.0, Vector::Ones(1), times(5.0, 26), opt);
  REQUIRE(traj.t.size() == 26);
  CHECK(std::abs(traj.y.back()[0] - std::exp(-5.0)) < 1e-8);
}

TEST_CASE("ideal gas in a harmonic trap relaxes like an ornstein-uhlenbeck process") {
  // overdamped ideal dynamics of a gaussian stays gaussian:
  // d(variance)/dt = 2 (T - k variance)
  FluidSpec spec;
  spec.T = 1.0;
  spec.hard_sphere = false;
  spec.attraction = false;
  auto line = line_grid(50, 3.0);
  auto prob = std::make_shared<FluidProblem>(spec, line, line, g_cache, 20, 20);

  DdftSystem::TimePotential pot;
  pot.v = [](double, double y2, double) { return 0.5 * y2 * y2; };
  pot.dv_dy2 = [](double, double y2, double) { return y2; };
  DdftSystem sys(prob, false, 0.0, pot);

  const double s0 = 0.25;  // initial variance
  Vector n0 = line.sample([&](double, double y2) {
    return std::exp(-0.5 * y2 * y2 / s0) / std::sqrt(2 * kPi * s0);
  });
  OdeOptions opt;
  opt.rtol = 1e-8;
  opt.atol = 1e-11;
  auto traj = integrate_implicit(sys.ode(), 0.0, sys.pack(n0), times(1.0, 21), opt);

  for (size_t k = 0; k < traj.t.size(); k += 5) {
    const Vector n = sys.density_part(traj.y[k]);
    Vector m0v(line.size()), m2v(line.size());
    for (int i = 0; i < line.size(); ++i) {
      const double y = line.point(i).y2;
      m0v[i] = std::isfinite(y) ? n[i] : 0.0;
      m2v[i] = std::isfinite(y) ? n[i] * y * y : 0.0;
    }
    const double mass = quadrature_excess(line, m0v);
    const double var = quadrature_excess(line, m2v) / mass;
    const double exact = 1.0 - (1.0 - s0) * std::exp(-2.0 * traj.t[k]);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    CHECK(std::abs(var - exact) < 1e-4);
  }
}

TEST_CASE("equilibrium wall profile is a fixed point of both dynamics") {
  PlanarOptions opt;
  opt.n2 = 50;
  opt.T = 0.75;
  opt.r_c = 2.5;
  opt.eps_w = 0.865;
  opt.solver.tol = 1e-11;
  auto eq = planar_interface_1d(PlanarKind::WallLiquid, opt, g_cache);
  REQUIRE(eq.report.converged);
  const Vector n_eq = eq.problem->density_of(eq.z);

  DdftSystem::TimePotential pot;
  pot.v = [](double, double y2, double) { return wall_potential_93(y2, 0.865); };
  pot.dv_dy2 = [](double, double y2, double) { return wall_potential_93_dy(y2, 0.865); };

  // log-form dynamics: u is constant at the converged nodes, so the
  // equilibrium is an exact fixed point up to differentiation round-off
  DdftSystem od(eq.problem, false, 0.0, pot, true);
  Vector f(od.state_size());
  od.ode().rhs(0.0, od.pack(n_eq), f);
  const double scale = n_eq.maxCoeff();
  CHECK(f.cwiseAbs().maxCoeff() / scale < 1e-5);

  DdftSystem in(eq.problem, true, 2.0, pot, true);
  Vector fi(in.state_size());
  in.ode().rhs(0.0, in.pack(n_eq), fi);
  CHECK(fi.cwiseAbs().maxCoeff() / scale < 1e-5);

  // integrating the overdamped system leaves the state unchanged
  OdeOptions oopt;
  auto traj = integrate_implicit(od.ode(), 0.0, od.pack(n_eq), times(10.0, 11), oopt);
  CHECK((od.density_part(traj.y.back()) - n_eq).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("closed slit conserves mass and descends the free energy") {
  // hard walls at both ends, time-independent confinement after a quench
  FluidSpec spec;
  spec.T = 1.0;
  spec.hard_sphere = false;
  spec.attraction = false;
  auto box = box_grid(1, 40, 0.0, 5.0, 0.0, 5.0);
  // 1 x n grid: the second direction is the slit axis
  auto prob = std::make_shared<FluidProblem>(spec, box, box, g_cache, 20, 20);

  DdftSystem::TimePotential pot;
  pot.v = [](double, double y2, double) { return 0.7 * (y2 - 2.0) * (y2 - 2.0); };
  pot.dv_dy2 = [](double, double y2, double) { return 1.4 * (y2 - 2.0); };
  DdftSystem sys(prob, false, 0.0, pot);

  Vector n0 = box.sample([](double, double y2) {
    return 0.2 + 0.1 * std::exp(-2.0 * (y2 - 3.5) * (y2 - 3.5));
  });
  OdeOptions opt;
  opt.rtol = 1e-8;
  opt.atol = 1e-11;
  auto traj = integrate_implicit(sys.ode(), 0.0, sys.pack(n0), times(4.0, 21), opt);

  const double m0 = total_mass(*prob, sys.density_part(traj.y.front()));
  for (const auto& y : traj.y) {
    CHECK(std::abs(total_mass(*prob, sys.density_part(y)) - m0) < 1e-8 * m0);
  }

  // free energy (with the static potential) is non-increasing
  auto omega = [&](const Vector& n) {
    double acc = 0;
    for (int i = 0; i < box.size(); ++i) {
      const double y2 = box.point(i).y2;
      const double v = 0.7 * (y2 - 2.0) * (y2 - 2.0);
      acc += box.weight(i) * (n[i] * (std::log(n[i]) - 1.0) + v * n[i]);
    }
    return acc;
  };
  double prev = omega(sys.density_part(traj.y.front()));
  for (size_t k = 1; k < traj.y.size(); ++k) {
    const double cur = omega(sys.density_part(traj.y[k]));
    CHECK(cur <= prev + 1e-8);
    prev = cur;
  }
}

TEST_CASE("dynamic wall potential anchors") {
  CHECK(dynamic_wall_potential(1.0, 0.0, 0.865, 1.0, 5.0) ==
        doctest::Approx(wall_potential_93(1.0, 0.865)));
  CHECK(dynamic_wall_factor(2.5, 0.865, 1.0, 5.0) ==
        doctest::Approx(1.0 + 1.0 / 0.865));
  CHECK(dynamic_wall_potential(1.0, 7.0, 0.865, 1.0, 5.0) ==
        doctest::Approx(wall_potential_93(1.0, 0.865)));
}

TEST_CASE("inertial dynamics approaches the overdamped limit at large friction") {
  // ideal gas in a closed slit: overdamped flow in rescaled time matches
  // high-friction inertial dynamics
  FluidSpec spec;
  spec.T = 1.0;
  spec.hard_sphere = false;
  auto line = box_grid(1, 40, 0.0, 6.0, 0.0, 6.0);
  auto prob = std::make_shared<FluidProblem>(spec, line, line, g_cache, 20, 20);
  DdftSystem::TimePotential pot;
  pot.v = [](double, double y2, double) { return 0.5 * (y2 - 3.0) * (y2 - 3.0); };
  pot.dv_dy2 = [](double, double y2, double) { return y2 - 3.0; };

  Vector n0 = line.sample([](double, double y2) {
    return std::exp(-0.5 * (y2 - 3.6) * (y2 - 3.6)) / std::sqrt(2 * kPi) + 1e-4;
  });

  const double gamma = 50.0;
  const double t_in = 10.0;  // inertial horizon; overdamped time t_in/gamma
  DdftSystem inert(prob, true, gamma, pot);
  OdeOptions opt;
  opt.rtol = 1e-7;
  opt.atol = 1e-10;
  auto traj_in = integrate_implicit(inert.ode(), 0.0, inert.pack(n0), times(t_in, 6), opt);

  DdftSystem over(prob, false, 0.0, pot);
  auto traj_od =
      integrate_implicit(over.ode(), 0.0, over.pack(n0), times(t_in / gamma, 6), opt);

  const Vector ni = inert.density_part(traj_in.y.back());
  const Vector no = over.density_part(traj_od.y.back());
  CHECK((ni - no).cwiseAbs().maxCoeff() < 1e-2);
}
