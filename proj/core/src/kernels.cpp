#include "psdft/kernels.hpp"

#include <cmath>
#include <numbers>

namespace psdft {

namespace {
constexpr double kPi = std::numbers::pi;

// Taylor coefficients of the inner branch of phi2d_attr in powers of r^2
// (exact rationals; the closed form cancels catastrophically below r ~ 0.5).
constexpr double kInnerSeries[] = {
    -48.0 / 55.0,
    -24.0 / 91.0,
    -2.0 / 15.0,
    -15.0 / 187.0,
    -105.0 / 1976.0,
    -3.0 / 80.0,
    -693.0 / 25024.0,
    -1287.0 / 60800.0,
    -715.0 / 43008.0,
    -36465.0 / 2732032.0,
    -138567.0 / 12697600.0,
    -29393.0 / 3244032.0,
    -289731.0 / 38010880.0,
    -3900225.0 / 601358336.0,
    -1671525.0 / 299892736.0,
    -5816907.0 / 1203765248.0,
    -901620585.0 / 213540405248.0,
    -12964479.0 / 3489660928.0,
};
constexpr double kSeriesRadius = 0.45;

double phi2d_attr_inner(double r) {
  if (r < kSeriesRadius) {
    const double s = r * r;
    double acc = 0.0;
    double p = 1.0;
    for (double c : kInnerSeries) {
      acc += c * p;
      p *= s;
    }
    return acc;
  }
  const double r2 = r * r;
  const double r10 = r2 * r2 * r2 * r2 * r2;
  const double t1 = 3.0 * std::sqrt(std::max(0.0, 1.0 - r2)) / (160.0 * r10) *
                    (-105.0 - 70.0 * r2 - 56.0 * r2 * r2 + 112.0 * r2 * r2 * r2 +
                     64.0 * r2 * r2 * r2 * r2);
  const double t2 = -3.0 * std::asin(std::min(r, 1.0)) / (32.0 * r10 * r) *
                    (32.0 * r2 * r2 * r2 - 21.0);
  return t1 + t2;
}

double phi2d_attr_outer(double r) {
  const double r5 = r * r * r * r * r;
  return kPi * (63.0 / (64.0 * r5 * r5 * r) - 1.5 / r5);
}

}  // namespace

double phi_attr(double r, double r_c) {
  if (r <= 1.0) return 0.0;
  if (r >= r_c) return 0.0;
  const double ir6 = 1.0 / (r * r * r * r * r * r);
  return 4.0 * (ir6 * ir6 - ir6);
}

double energy_scale_ratio(double r_c) {
  if (!(r_c > 1.0)) {
    if (r_c == 1.0) return 1.0 - (9.0 / 32.0) * kPi * (1.0 - 7.0 / 32.0);
    throw std::invalid_argument("energy_scale_ratio: r_c must be >= 1");
  }
  if (std::isinf(r_c)) return 1.0;
  const double ir3 = 1.0 / (r_c * r_c * r_c);
  return 1.0 - (9.0 / 32.0) * kPi * (ir3 - 7.0 / 32.0 * ir3 * ir3 * ir3);
}

double phi2d_attr(double r, double r_c) {
  if (r >= r_c) return 0.0;
  const double scale = 1.0 / energy_scale_ratio(r_c);  // eps / eps_D
  if (r < 1.0) return scale * phi2d_attr_inner(r);
  return scale * phi2d_attr_outer(r);
}

double phi2d_omega3(double r, double R) {
  if (r >= R) return 0.0;
  return 2.0 * std::sqrt(std::max(0.0, R * R - r * r));
}

double gaussian_pair(double r, double sigma) {
  return 2.0 * std::exp(-r * r / (sigma * sigma));
}

Kernel kernel_hs_w2(double R) {
  Kernel k;
  k.name = "w2";
  k.ncomp = 1;
  KernelPiece p;
  p.support = {SupportKind::SphereSurface, R};
  p.eval = [](double, double, double* out) { out[0] = 1.0; };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hs_w3(double R) {
  Kernel k;
  k.name = "w3";
  k.ncomp = 1;
  KernelPiece p;
  p.support = {SupportKind::Disk, R};
  p.eval = [R](double y1, double y2, double* out) {
    out[0] = phi2d_omega3(std::hypot(y1, y2), R);
  };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hs_vw2(double R, bool reversed) {
  Kernel k;
  k.name = reversed ? "vw2_rev" : "vw2";
  k.ncomp = 2;
  const double s = reversed ? 1.0 : -1.0;  // chi(-y) = -(y/|y|) on the shell
  KernelPiece p;
  p.support = {SupportKind::SphereSurface, R};
  p.eval = [R, s](double y1, double y2, double* out) {
    out[0] = s * y1 / R;
    out[1] = s * y2 / R;
  };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hd_w2(double R) {
  Kernel k;
  k.name = "hd_w2";
  k.ncomp = 1;
  KernelPiece p;
  p.support = {SupportKind::Circle, R};
  p.eval = [](double, double, double* out) { out[0] = 1.0; };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hd_w3(double R) {
  Kernel k;
  k.name = "hd_w3";
  k.ncomp = 1;
  KernelPiece p;
  p.support = {SupportKind::DiskFull, R};
  p.eval = [](double, double, double* out) { out[0] = 1.0; };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hd_v2(double R, bool reversed) {
  Kernel k;
  k.name = reversed ? "hd_v2_rev" : "hd_v2";
  k.ncomp = 2;
  const double s = reversed ? 1.0 : -1.0;  // weight is the bare vector r on the shell
  KernelPiece p;
  p.support = {SupportKind::Circle, R};
  p.eval = [s](double y1, double y2, double* out) {
    out[0] = s * y1;
    out[1] = s * y2;
  };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_hd_t2(double R) {
  Kernel k;
  k.name = "hd_t2";
  k.ncomp = 3;
  KernelPiece p;
  p.support = {SupportKind::Circle, R};
  p.eval = [](double y1, double y2, double* out) {
    out[0] = y1 * y1;
    out[1] = y1 * y2;
    out[2] = y2 * y2;
  };
  k.pieces.push_back(std::move(p));
  return k;
}

Kernel kernel_attraction(double r_c) {
  Kernel k;
  k.name = std::isinf(r_c) ? "attr_inf" : "attr";
  k.ncomp = 1;
  KernelPiece core;
  core.support = {SupportKind::Disk, 1.0};
  core.eval = [r_c](double y1, double y2, double* out) {
    out[0] = phi2d_attr(std::hypot(y1, y2), r_c);
  };
  k.pieces.push_back(std::move(core));
  KernelPiece tail;
  if (std::isinf(r_c)) {
    tail.support = {SupportKind::AnnulusExterior, 1.0};
  } else {
    tail.support.kind = SupportKind::AnnulusFinite;
    tail.support.R_in = 1.0;
    tail.support.R_out = r_c;
  }
  // evaluate the smooth tail branch on the whole closed annulus; the
  // truncation jump sits on the patch boundary and stays outside it
  const double scale = 1.0 / energy_scale_ratio(r_c);
  tail.eval = [scale](double y1, double y2, double* out) {
    out[0] = scale * phi2d_attr_outer(std::max(1.0, std::hypot(y1, y2)));
  };
  k.pieces.push_back(std::move(tail));
  return k;
}

Kernel kernel_gaussian(double sigma) {
  Kernel k;
  k.name = "gauss_" + std::to_string(sigma);
  k.ncomp = 1;
  KernelPiece p;
  p.support.kind = SupportKind::Everything;
  p.eval = [sigma](double y1, double y2, double* out) {
    out[0] = gaussian_pair(std::hypot(y1, y2), sigma);
  };
  k.pieces.push_back(std::move(p));
  return k;
}

}  // namespace psdft
