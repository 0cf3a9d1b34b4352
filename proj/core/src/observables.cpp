#include "psdft/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace psdft {

namespace {

// quadrature of f(y2) n(y1_line, y2) along one wall-normal grid line
double line_integral(const Grid2D& g, const Vector& values, int i1) {
  double acc = 0;
  for (int i2 = 0; i2 < g.n2(); ++i2) {
    const double w = g.g2.phys_quad_weights[i2];
    const double v = values[i1 * g.n2() + i2];
    if (!std::isfinite(w)) {
      if (v == 0.0) continue;
      throw std::runtime_error("line_integral: non-decaying integrand at infinity");
    }
    acc += w * v;
  }
  return acc;
}

}  // namespace

SumRuleReport contact_theorem_check(const FluidProblem& prob, const Vector& z,
                                    double n_bulk,
                                    const std::function<double(double)>& dv_dy2) {
  const Grid2D& g = prob.grid().parts[0];
  const Vector n = prob.density_of(z);
  SumRuleReport rep;
  rep.contact_density = n[g.n2() - 1];  // y2 = 0 node of the first line
  rep.beta_p = prob.spec().bulk().pressure(n_bulk) / prob.spec().T;
  rep.wall_integral = 0;
  if (dv_dy2) {
    Vector integrand(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const double y2 = g.point(i).y2;
      integrand[i] = std::isfinite(y2) ? n[i] * dv_dy2(y2) : 0.0;
    }
    rep.wall_integral = line_integral(g, integrand, 0) / prob.spec().T;
  }
  const double defect = std::abs(rep.contact_density - rep.beta_p - rep.wall_integral);
  rep.relative_error = defect / rep.beta_p;
  rep.relative_error_contact = defect / rep.contact_density;
  return rep;
}

DisjoiningPressure disjoining_pressure(const FluidProblem& prob, const Vector& z,
                                       double p_bulk,
                                       const std::function<double(double)>& dv_dy2) {
  const Grid2D& g = prob.grid().parts[0];
  const Vector n = prob.density_of(z);
  DisjoiningPressure out;
  out.p_bulk = p_bulk;
  std::vector<double> y1s, pis;
  Vector integrand(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double y2 = g.point(i).y2;
    integrand[i] = (std::isfinite(y2) && dv_dy2) ? n[i] * dv_dy2(y2) : 0.0;
  }
  for (int i1 = 0; i1 < g.n1(); ++i1) {
    const double y1 = g.g1.phys_nodes[i1];
    if (!std::isfinite(y1)) continue;
    const double wall_term = line_integral(g, integrand, i1);
    const double contact = n[i1 * g.n2() + (g.n2() - 1)];
    y1s.push_back(y1);
    pis.push_back(-wall_term + prob.spec().T * contact - p_bulk);
  }
  out.y1 = Eigen::Map<Vector>(y1s.data(), y1s.size());
  out.Pi = Eigen::Map<Vector>(pis.data(), pis.size());
  return out;
}

ForceBalance normal_force_balance(const DisjoiningPressure& dp, double gamma_lv,
                                  double theta) {
  const double denom = gamma_lv * std::sin(theta);
  if (denom == 0.0)
    throw std::invalid_argument("normal_force_balance: gamma_lv sin(theta) vanishes");
  const int n = static_cast<int>(dp.Pi.size());
  const int tail = std::max(1, n / 10);
  // node ordering follows the descending computational grid: index 0 is the
  // largest finite y1, the last index the smallest
  double plus = 0, minus = 0;
  for (int i = 0; i < tail; ++i) plus += dp.Pi[i] / tail;
  for (int i = n - tail; i < n; ++i) minus += dp.Pi[i] / tail;
  ForceBalance fb;
  fb.delta_pi = std::max(std::abs(plus), std::abs(minus));

  // trapezoid over the thresholded region on the nonuniform y1 nodes
  // (nodes descend in y1)
  double acc = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = dp.y1[i + 1], b = dp.y1[i];
    const double fa = dp.Pi[i + 1], fb_ = dp.Pi[i];
    if (std::abs(fa) > 2 * fb.delta_pi && std::abs(fb_) > 2 * fb.delta_pi)
      acc += 0.5 * (fa + fb_) * (b - a);
  }
  fb.integral = acc;
  fb.relative_error = std::abs(1.0 + fb.integral / denom);
  return fb;
}

double young_angle(double gamma_wv, double gamma_wl, double gamma_lv) {
  const double c = (gamma_wv - gamma_wl) / gamma_lv;
  if (!(gamma_lv > 0) || std::abs(c) > 1.0)
    throw std::runtime_error("young_angle: no partial wetting for these tensions");
  return std::acos(c);
}

}  // namespace psdft
