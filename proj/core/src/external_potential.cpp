#include "psdft/external_potential.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wall_potential_93(double y2, double eps_w) {
  if (y2 <= -1.0) return std::numeric_limits<double>::infinity();
  const double u = 1.0 / (y2 + 1.0);
  const double u3 = u * u * u;
  return 4.0 * kPi * eps_w * (u3 * u3 * u3 / 45.0 - u3 / 6.0);
}

double wall_potential_93_dy(double y2, double eps_w) {
  if (y2 <= -1.0) return std::numeric_limits<double>::infinity();
  const double u = 1.0 / (y2 + 1.0);
  const double u4 = u * u * u * u;
  return 4.0 * kPi * eps_w * (-u4 * u4 * u * u / 5.0 + 0.5 * u4);
}

double dynamic_wall_factor(double t, double eps_w, double d_eps, double tau) {
  if (t >= tau) return 1.0;
  return 1.0 + (d_eps / eps_w) * std::sin(kPi * t / tau);
}

double dynamic_wall_potential(double y2, double t, double eps_w, double d_eps, double tau) {
  return wall_potential_93(y2, eps_w) * dynamic_wall_factor(t, eps_w, d_eps, tau);
}

}  // namespace psdft
