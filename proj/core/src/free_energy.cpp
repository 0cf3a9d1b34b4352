#include "psdft/free_energy.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;

void check_packing(double n3, const char* who) {
  if (!(n3 < 1.0))
    throw PackingError(std::string(who) + ": packing weighted density n3 = " +
                       std::to_string(n3) + " >= 1");
}
}  // namespace

HsDerivs hs_free_energy_density(const HsWeights& n) {
  check_packing(n.n3, "hs_free_energy_density");
  const double a = 1.0 - n.n3;
  const double v1v2 = n.v1x * n.v2x + n.v1y * n.v2y;
  const double v2v2 = n.v2x * n.v2x + n.v2y * n.v2y;
  HsDerivs d;
  d.phi = -n.n0 * std::log(a) + n.n1 * n.n2 / a +
          n.n2 * n.n2 * n.n2 / (24.0 * kPi * a * a) - v1v2 / a -
          n.n2 * v2v2 / (8.0 * kPi * a * a);
  d.dn0 = -std::log(a);
  d.dn1 = n.n2 / a;
  d.dn2 = n.n1 / a + n.n2 * n.n2 / (8.0 * kPi * a * a) - v2v2 / (8.0 * kPi * a * a);
  d.dn3 = n.n0 / a + n.n1 * n.n2 / (a * a) + n.n2 * n.n2 * n.n2 / (12.0 * kPi * a * a * a) -
          v1v2 / (a * a) - n.n2 * v2v2 / (4.0 * kPi * a * a * a);
  d.dv1x = -n.v2x / a;
  d.dv1y = -n.v2y / a;
  d.dv2x = -n.v1x / a - n.n2 * n.v2x / (4.0 * kPi * a * a);
  d.dv2y = -n.v1y / a - n.n2 * n.v2y / (4.0 * kPi * a * a);
  return d;
}

HsReduced hs_reduced(double R, double n2, double n3, double vx, double vy) {
  check_packing(n3, "hs_reduced");
  const double a = 1.0 - n3;
  const double s = 4.0 * kPi * R;        // v1 = v2 / s, n1 = n2 / s
  const double s2 = 4.0 * kPi * R * R;   // n0 = n2 / s2
  const double vv = vx * vx + vy * vy;

  HsReduced r;
  r.phi = -(n2 / s2) * std::log(a) + n2 * n2 / (s * a) +
          n2 * n2 * n2 / (24.0 * kPi * a * a) - vv / (s * a) -
          n2 * vv / (8.0 * kPi * a * a);

  r.dn2 = -std::log(a) / s2 + 2.0 * n2 / (s * a) + n2 * n2 / (8.0 * kPi * a * a) -
          vv / (8.0 * kPi * a * a);
  r.dn3 = n2 / (s2 * a) + n2 * n2 / (s * a * a) + n2 * n2 * n2 / (12.0 * kPi * a * a * a) -
          vv / (s * a * a) - n2 * vv / (4.0 * kPi * a * a * a);
  r.dvx = -2.0 * vx / (s * a) - n2 * vx / (4.0 * kPi * a * a);
  r.dvy = -2.0 * vy / (s * a) - n2 * vy / (4.0 * kPi * a * a);

  r.d_n2n2 = 2.0 / (s * a) + n2 / (4.0 * kPi * a * a);
  r.d_n2n3 = 1.0 / (s2 * a) + 2.0 * n2 / (s * a * a) + n2 * n2 / (4.0 * kPi * a * a * a) -
             vv / (4.0 * kPi * a * a * a);
  r.d_n3n3 = n2 / (s2 * a * a) + 2.0 * n2 * n2 / (s * a * a * a) +
             n2 * n2 * n2 / (4.0 * kPi * a * a * a * a) - 2.0 * vv / (s * a * a * a) -
             3.0 * n2 * vv / (4.0 * kPi * a * a * a * a);
  r.d_n2vx = -vx / (4.0 * kPi * a * a);
  r.d_n2vy = -vy / (4.0 * kPi * a * a);
  r.d_n3vx = -2.0 * vx / (s * a * a) - n2 * vx / (2.0 * kPi * a * a * a);
  r.d_n3vy = -2.0 * vy / (s * a * a) - n2 * vy / (2.0 * kPi * a * a * a);
  const double iso = -2.0 / (s * a) - n2 / (4.0 * kPi * a * a);
  r.d_vxvx = iso;
  r.d_vyvy = iso;
  r.d_vxvy = 0.0;
  return r;
}

HdReduced hd_reduced(double R, double n2, double n3, double vx, double vy, double t11,
                     double t12, double t22) {
  check_packing(n3, "hd_reduced");
  const double a = 1.0 - n3;
  const double s0 = 2.0 * kPi * R;  // n0 = n2 / s0
  const double vv = vx * vx + vy * vy;
  const double tt = t11 * t11 + 2.0 * t12 * t12 + t22 * t22;  // Frobenius

  HdReduced r;
  const double quad = (19.0 / 12.0) * n2 * n2 - (5.0 / 12.0) * vv - (7.0 / 6.0) * tt;
  r.phi = -(n2 / s0) * std::log(a) + quad / (4.0 * kPi * a);
  r.dn2 = -std::log(a) / s0 + (19.0 / 24.0) * n2 / (kPi * a);
  r.dn3 = n2 / (s0 * a) + quad / (4.0 * kPi * a * a);
  r.dvx = -(5.0 / 24.0) * vx / (kPi * a);
  r.dvy = -(5.0 / 24.0) * vy / (kPi * a);
  r.dt11 = -(7.0 / 12.0) * t11 / (kPi * a);
  r.dt12 = -(7.0 / 6.0) * t12 / (kPi * a);
  r.dt22 = -(7.0 / 12.0) * t22 / (kPi * a);
  return r;
}

}  // namespace psdft
