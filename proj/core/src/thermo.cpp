#include "psdft/thermo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;
}

double BulkModel::mean_field_integral() const {
  return attraction ? -(32.0 / 9.0) * kPi : 0.0;
}

double BulkModel::max_density() const {
  switch (excess) {
    case Excess::HardSphere:
      return 0.999 * 6.0 / (8.0 * kPi * R * R * R);  // n3 = (4/3) pi R^3 n < 1
    case Excess::HardDisk:
      return 0.999 / (kPi * R * R);
    case Excess::None:
      return 1e6;
  }
  return 1e6;
}

double BulkModel::f(double n) const {
  double val = T * n * (std::log(n) - 1.0);
  if (excess == Excess::HardSphere) {
    const double n2 = 4.0 * kPi * R * R * n;
    const double n3 = (4.0 / 3.0) * kPi * R * R * R * n;
    val += T * hs_reduced(R, n2, n3, 0.0, 0.0).phi;
  } else if (excess == Excess::HardDisk) {
    const double n2 = 2.0 * kPi * R * n;
    const double n3 = kPi * R * R * n;
    const double t = kPi * R * R * R * n;
    val += T * hd_reduced(R, n2, n3, 0.0, 0.0, t, 0.0, t).phi;
  }
  val += 0.5 * mean_field_integral() * n * n;
  return val;
}

double BulkModel::mu(double n) const {
  double val = T * std::log(n);
  if (excess == Excess::HardSphere) {
    const double i2 = 4.0 * kPi * R * R;
    const double i3 = (4.0 / 3.0) * kPi * R * R * R;
    const auto d = hs_reduced(R, i2 * n, i3 * n, 0.0, 0.0);
    val += T * (d.dn2 * i2 + d.dn3 * i3);
  } else if (excess == Excess::HardDisk) {
    const double i2 = 2.0 * kPi * R;
    const double i3 = kPi * R * R;
    const double it = kPi * R * R * R;
    const auto d = hd_reduced(R, i2 * n, i3 * n, 0.0, 0.0, it * n, 0.0, it * n);
    val += T * (d.dn2 * i2 + d.dn3 * i3 + (d.dt11 + d.dt22) * it);
  }
  val += mean_field_integral() * n;
  return val;
}

double BulkModel::pressure(double n) const { return n * mu(n) - f(n); }

double BulkModel::dmu_dn(double n) const {
  const double h = std::max(1e-9, 1e-7 * n);
  return (mu(n + h) - mu(n - h)) / (2.0 * h);
}

double BulkModel::density_from_mu(double mu_target, int branch) const {
  const double lo = 1e-12, hi = max_density();
  const int nscan = 4000;
  std::vector<double> roots;
  double nprev = lo, fprev = mu(lo) - mu_target;
  for (int i = 1; i <= nscan; ++i) {
    const double t = static_cast<double>(i) / nscan;
    // geometric near zero, linear above; resolves the dilute branch
    const double n = lo * std::pow(hi / lo, t);
    const double fv = mu(n) - mu_target;
    if (fprev == 0.0) roots.push_back(nprev);
    if (fprev * fv < 0.0) {
      double a = nprev, b = n;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if ((mu(m) - mu_target) * (mu(a) - mu_target) <= 0.0)
          b = m;
        else
          a = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    nprev = n;
    fprev = fv;
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "density_from_mu: no root for mu = " << mu_target << " in (" << lo << ", " << hi
       << ")";
    throw std::runtime_error(os.str());
  }
  if (branch <= 0) return roots.front();
  return roots.back();
}

Coexistence coexistence(const BulkModel& model) {
  if (!model.attraction && model.excess != BulkModel::Excess::None)
    throw std::runtime_error("coexistence: purely repulsive fluid has a single phase");

  // spinodal bracket: sign changes of dmu/dn
  const double hi = model.max_density();
  const int nscan = 2000;
  double sp1 = -1, sp2 = -1;
  double nprev = 1e-6, dprev = model.dmu_dn(nprev);
  for (int i = 1; i <= nscan; ++i) {
    const double n = 1e-6 + (hi - 1e-6) * i / nscan;
    const double d = model.dmu_dn(n);
    if (dprev > 0 && d < 0) sp1 = n;
    if (dprev < 0 && d > 0) sp2 = n;
    nprev = n;
    dprev = d;
  }
  if (sp1 < 0 || sp2 < 0)
    throw std::runtime_error("coexistence: no spinodal region found (above critical temperature)");

  double nv = 0.5 * sp1, nl = 0.5 * (sp2 + hi);
  auto P = [&](double n) { return model.pressure(n); };
  auto M = [&](double n) { return model.mu(n); };
  for (int it = 0; it < 200; ++it) {
    const double f1 = P(nv) - P(nl);
    const double f2 = M(nv) - M(nl);
    if (std::abs(f1) < 1e-13 && std::abs(f2) < 1e-13) break;
    const double h1 = std::max(1e-10, 1e-7 * nv), h2 = std::max(1e-10, 1e-7 * nl);
    const double a = (P(nv + h1) - P(nv - h1)) / (2 * h1);
    const double b = -(P(nl + h2) - P(nl - h2)) / (2 * h2);
    const double c = (M(nv + h1) - M(nv - h1)) / (2 * h1);
    const double d = -(M(nl + h2) - M(nl - h2)) / (2 * h2);
    const double det = a * d - b * c;
    if (det == 0.0) throw std::runtime_error("coexistence: singular Newton step");
    double dv = (f1 * d - f2 * b) / det;
    double dl = (a * f2 - c * f1) / det;
    // keep iterates inside the physical branches
    dv = std::clamp(dv, -0.5 * nv, 0.5 * (sp1 - nv) + 0.5 * nv);
    nv = std::clamp(nv - dv, 1e-10, sp1);
    nl = std::clamp(nl - dl, sp2, hi);
  }
  Coexistence c;
  c.n_vap = nv;
  c.n_liq = nl;
  c.mu_sat = 0.5 * (model.mu(nv) + model.mu(nl));
  c.p_sat = 0.5 * (model.pressure(nv) + model.pressure(nl));
  const double res = std::abs(model.pressure(nv) - model.pressure(nl)) +
                     std::abs(model.mu(nv) - model.mu(nl));
  if (res > 1e-10)
    throw std::runtime_error("coexistence: Newton residual " + std::to_string(res) +
                             " above tolerance");
  return c;
}

}  // namespace psdft
