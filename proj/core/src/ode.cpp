#include "psdft/ode.hpp"

#include <cmath>
#include <stdexcept>

namespace psdft {

namespace {

struct Stepper {
  const OdeSystem& sys;
  const OdeOptions& opt;
  Matrix Jf;           // current rhs Jacobian
  Eigen::PartialPivLU<Matrix> lu;
  double lu_alpha = -1;  // alpha/h the factorization was built with
  bool have_jf = false;
  int jac_evals = 0, lu_count = 0;

  explicit Stepper(const OdeSystem& s, const OdeOptions& o) : sys(s), opt(o) {}

  void refresh_jacobian(double t, const Vector& y) {
    if (!Jf.size()) Jf.resize(sys.n, sys.n);
    sys.jacobian(t, y, Jf);
    ++jac_evals;
    have_jf = true;
    lu_alpha = -1;
  }

  void factorize(double alpha_over_h) {
    Matrix A = -Jf;
    for (int i = 0; i < sys.n; ++i) A(i, i) += sys.mass[i] * alpha_over_h;
    lu.compute(A);
    lu_alpha = alpha_over_h;
    ++lu_count;
  }

  // solve F(y) = mass*(alpha0*y - rhs_const)/h - f(t,y) = 0 (diff rows)
  //           and -f(t,y) = 0 (algebraic rows)
  bool solve_stage(double t, double alpha0, double h, const Vector& rhs_const,
                   const Vector& ypred, Vector& y) {
    y = ypred;
    Vector f(sys.n), F(sys.n);
    const double alpha_over_h = alpha0 / h;
    if (!have_jf) refresh_jacobian(t, y);
    if (std::abs(lu_alpha - alpha_over_h) > 0.08 * std::abs(alpha_over_h) || lu_alpha < 0)
      factorize(alpha_over_h);
    double prev_norm = -1;
    for (int it = 0; it < 10; ++it) {
      sys.rhs(t, y, f);
      for (int i = 0; i < sys.n; ++i)
        F[i] = sys.mass[i] * (alpha0 * y[i] - rhs_const[i]) / h - f[i];
      Vector dy = lu.solve(-F);
      if (!dy.allFinite()) return false;
      y += dy;
      double wn = 0;
      for (int i = 0; i < sys.n; ++i)
        wn = std::max(wn, std::abs(dy[i]) / (opt.atol + opt.rtol * std::abs(y[i])));
      if (wn < 0.05) return true;
      if (prev_norm > 0 && wn > 0.9 * prev_norm && it >= 2) return false;  // stalling
      prev_norm = wn;
    }
    return false;
  }
};

}  // namespace

OdeTrajectory integrate_implicit(const OdeSystem& sys, double t0, Vector y0,
                                 const std::vector<double>& sample_times,
                                 const OdeOptions& opt) {
  OdeTrajectory out;
  if (sample_times.empty()) return out;
  const double t_end = sample_times.back();

  Stepper st(sys, opt);
  double t = t0;
  double h = opt.h_init;
  Vector y = std::move(y0);
  Vector y_prev;   // one accepted step back
  Vector y_prev2;  // two accepted steps back
  double h_prev = 0, h_prev2 = 0;
  bool have_three = false;

  // the stepper lands exactly on every sample time so recorded states are
  // actual solutions, not interpolants
  size_t isample = 0;
  if (sample_times.front() <= t0 + 1e-12) {
    out.t.push_back(t0);
    out.y.push_back(y);
    ++isample;
  }

  st.refresh_jacobian(t, y);
  bool have_two = false;
  int since_jac = 0;

  for (int step = 0; step < opt.max_steps && t < t_end - 1e-12; ++step) {
    h = std::min(h, t_end - t);
    h = std::min(h, opt.h_max);
    if (isample < sample_times.size() && t + h > sample_times[isample] - 1e-12)
      h = sample_times[isample] - t;

    Vector y_new(sys.n);
    bool ok = false;
    double err = 2.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      if (!have_two) {
        // backward Euler start
        Vector rhs_const = y;  // alpha0 = 1: F = (y_new - y)/h - f
        ok = st.solve_stage(t + h, 1.0, h, rhs_const, y, y_new);
        if (ok) {
          // error estimate by comparing against the trapezoidal corrector
          Vector f0(sys.n), f1(sys.n);
          sys.rhs(t, y, f0);
          sys.rhs(t + h, y_new, f1);
          err = 0;
          for (int i = 0; i < sys.n; ++i) {
            if (sys.mass[i] == 0.0) continue;
            const double e = 0.5 * h * std::abs(f1[i] - f0[i]);
            err = std::max(err, e / (opt.atol + opt.rtol * std::abs(y_new[i])));
          }
        }
      } else {
        const double rho = h / h_prev;
        const double a0 = (1 + 2 * rho) / (1 + rho);
        const double a1 = -(1 + rho);
        const double a2 = rho * rho / (1 + rho);
        // quadratic predictor through the last three states; the
        // predictor-corrector difference is then a genuine O(h^3) local
        // error measure (a linear predictor would throttle the step to
        // resolve h^2 ybar'' instead)
        Vector ypred;
        if (have_three) {
          const double t1 = -h_prev, t2 = -(h_prev + h_prev2);
          Vector d01 = (y - y_prev) / (0.0 - t1);
          Vector d12 = (y_prev - y_prev2) / (t1 - t2);
          Vector d012 = (d01 - d12) / (0.0 - t2);
          ypred = y + h * d01 + h * (h - t1) * d012;
        } else {
          ypred = y + rho * (y - y_prev);
        }
        Vector rhs_const = -(a1 * y + a2 * y_prev);
        ok = st.solve_stage(t + h, a0, h, rhs_const, ypred, y_new);
        if (ok) {
          err = 0;
          const double c = have_three ? 0.25 : 1.0 / 3.0;
          for (int i = 0; i < sys.n; ++i) {
            if (sys.mass[i] == 0.0) continue;
            const double e = c * std::abs(y_new[i] - ypred[i]);
            err = std::max(err, e / (opt.atol + opt.rtol * std::abs(y_new[i])));
          }
        }
      }

      if (ok && err <= 1.0) break;
      if (!ok) {
        if (since_jac > 0) {
          st.refresh_jacobian(t, y);
          since_jac = 0;
          continue;
        }
        h *= 0.3;
      } else {
        h *= std::clamp(0.85 * std::pow(err, -1.0 / 3.0), 0.15, 0.9);
      }
      if (h < opt.h_min)
        throw std::runtime_error("integrate_implicit: step size underflow at t = " +
                                 std::to_string(t));
    }
    if (!ok || err > 1.0)
      throw std::runtime_error("integrate_implicit: cannot complete step at t = " +
                               std::to_string(t));

    if (isample < sample_times.size() && std::abs(t + h - sample_times[isample]) < 1e-10) {
      out.t.push_back(sample_times[isample]);
      out.y.push_back(y_new);
      ++isample;
    }
    if (have_two) {
      y_prev2 = y_prev;
      h_prev2 = h_prev;
      have_three = true;
    }
    y_prev = y;
    h_prev = h;
    y = y_new;
    t += h;
    have_two = true;
    ++out.steps;
    ++since_jac;
    if (since_jac > 25) {
      st.refresh_jacobian(t, y);
      since_jac = 0;
    }
    h *= std::clamp(0.85 * std::pow(std::max(err, 1e-10), -1.0 / 3.0), 0.3, 2.5);
  }
  if (t < t_end - 1e-9)
    throw std::runtime_error("integrate_implicit: step budget exhausted at t = " +
                             std::to_string(t));
  out.jacobian_evals = st.jac_evals;
  out.lu_factorizations = st.lu_count;
  return out;
}

}  // namespace psdft
