#include "doctest.h"
#include "psdft/shapes.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace psdft;
namespace {
constexpr double kPi = std::numbers::pi;

double finite_weight_sum(const Shape& s) {
  double a = 0;
  for (int i = 0; i < s.size(); ++i)
    if (std::isfinite(s.w[i])) a += s.w[i];
  return a;
}

double intersection_area(const Intersection& in) {
  double a = 0;
  for (const auto& p : in.pieces) a += finite_weight_sum(p);
  return a;
}

// area of {y2 > -y} within a disk of radius R
double disk_cap_area(double R, double y) {
  if (y >= R) return kPi * R * R;
  if (y <= -R) return 0.0;
  return kPi * R * R - (R * R * std::acos(y / R) - y * std::sqrt(R * R - y * y));
}

double annulus_cap_area(double Ri, double Ro, double y) {
  return disk_cap_area(Ro, y) - disk_cap_area(Ri, y);
}

// spherical zone above the plane y2 = -y
double sphere_cap_area(double R, double y) {
  if (y >= R) return 4.0 * kPi * R * R;
  if (y <= -R) return 0.0;
  return 2.0 * kPi * R * (R + y);
}

double mc_area(const SupportSpec& s, double y, int nsamp, unsigned seed) {
  std::mt19937 rng(seed);
  double lo = -3.0, hi = 3.0;
  if (s.kind == SupportKind::AnnulusFinite) lo = -s.R_out - 0.1, hi = s.R_out + 0.1;
  if (s.kind == SupportKind::Disk) lo = -s.R - 0.1, hi = s.R + 0.1;
  std::uniform_real_distribution<double> u(lo, hi);
  int hits = 0;
  for (int i = 0; i < nsamp; ++i) {
    const double y1 = u(rng), y2 = u(rng);
    if (y2 <= -y) continue;
    const double r = std::hypot(y1, y2);
    bool in = false;
    if (s.kind == SupportKind::Disk) in = r <= s.R;
    if (s.kind == SupportKind::AnnulusFinite) in = r >= s.R_in && r <= s.R_out;
    hits += in ? 1 : 0;
  }
  return (hi - lo) * (hi - lo) * static_cast<double>(hits) / nsamp;
}

}  // namespace

TEST_CASE("full shape measures") {
  CHECK(finite_weight_sum(shape_disk(1.0, 20)) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(finite_weight_sum(shape_annulus(1.0, 2.5, 20)) ==
        doctest::Approx(kPi * (2.5 * 2.5 - 1.0)).epsilon(1e-10));
  CHECK(finite_weight_sum(shape_sphere_surface(1.0, 0.0, kPi, 20)) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-10));
  CHECK(finite_weight_sum(shape_sphere_projection(1.0, 0.0, kPi, 24)) ==
        doctest::Approx(kPi).epsilon(1e-10));
  CHECK(finite_weight_sum(shape_ring(0.5, 10)) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(finite_weight_sum(shape_rect(0, 2, -1, 3, 8)) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("sphere and disk caps at random offsets") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uy(-0.49, 1.2);
  const double R = 0.5;
  for (int trial = 0; trial < 10; ++trial) {
    const double y = uy(rng);
    auto s1 = assemble_intersection({SupportKind::SphereSurface, R}, y, 30);
    CHECK(intersection_area(s1) == doctest::Approx(sphere_cap_area(R, y)).epsilon(1e-8));
    auto s2 = assemble_intersection({SupportKind::Disk, R}, y, 40);
    CHECK(intersection_area(s2) == doctest::Approx(disk_cap_area(R, y)).epsilon(5e-7));
    for (const auto& p : s2.pieces)
      for (int i = 0; i < p.size(); ++i) CHECK(p.pts(i, 1) >= -y - 1e-12);
  }
  CHECK(assemble_intersection({SupportKind::Disk, R}, -0.6, 20).pieces.empty());
  CHECK(assemble_intersection({SupportKind::SphereSurface, R}, -0.5, 20).pieces.empty());
}

TEST_CASE("finite annulus cases match segment formulas and monte carlo") {
  const double Ri = 1.0, Ro = 2.5;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uy(0.01, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double y = uy(rng);
    auto in = assemble_intersection({SupportKind::AnnulusFinite, 0, Ri, Ro}, y, 40);
    const double exact = annulus_cap_area(Ri, Ro, y);
    CHECK(intersection_area(in) == doctest::Approx(exact).epsilon(2e-8));
    for (const auto& p : in.pieces)
      for (int i = 0; i < p.size(); ++i) CHECK(p.pts(i, 1) >= -y - 1e-12);
  }
  // case boundaries hit exactly
  for (double y : {Ri, Ro, 0.5, 2.0}) {
    auto in = assemble_intersection({SupportKind::AnnulusFinite, 0, Ri, Ro}, y, 40);
    CHECK(intersection_area(in) == doctest::Approx(annulus_cap_area(Ri, Ro, y)).epsilon(2e-8));
  }
  // spot check against a hit-or-miss oracle
  const double y = 0.5;
  auto in = assemble_intersection({SupportKind::AnnulusFinite, 0, Ri, Ro}, y, 40);
  CHECK(intersection_area(in) ==
        doctest::Approx(mc_area({SupportKind::AnnulusFinite, 0, Ri, Ro}, y, 2000000, 5))
            .epsilon(3e-3));
}

TEST_CASE("table-5 style piece lists") {
  auto full = assemble_intersection({SupportKind::SphereSurface, 0.5}, 1.0, 10);
  REQUIRE(full.pieces.size() == 1);
  CHECK(full.pieces[0].label == "S1");

  auto lobes = assemble_intersection({SupportKind::AnnulusFinite, 0, 1.0, 2.5}, 0.5, 10);
  REQUIRE(lobes.pieces.size() == 3);
  CHECK(lobes.pieces[0].label == "P6");
  CHECK(lobes.pieces[1].label == "P4+");
  CHECK(lobes.pieces[2].label == "P4-");

  auto mid = assemble_intersection({SupportKind::AnnulusFinite, 0, 1.0, 2.5}, 1.7, 10);
  REQUIRE(mid.pieces.size() == 2);
  CHECK(mid.pieces[0].label == "P6");
  CHECK(mid.pieces[1].label == "P5");

  auto ext = assemble_intersection({SupportKind::AnnulusExterior, 1.0}, 0.5, 10);
  REQUIRE(ext.pieces.size() == 3);
  CHECK(ext.pieces[0].label == "P1");
  CHECK(ext.pieces[1].label == "P2+");
  CHECK(ext.pieces[2].label == "P2-");
  for (const auto& p : ext.pieces)
    for (int i = 0; i < p.size(); ++i)
      if (std::isfinite(p.w[i])) CHECK(p.pts(i, 1) >= -0.5 - 1e-12);

  auto ext0 = assemble_intersection({SupportKind::AnnulusExterior, 1.0}, 0.0, 10);
  REQUIRE(ext0.pieces.size() == 1);
  CHECK(ext0.pieces[0].label == "P1");
}

TEST_CASE("exterior pieces integrate a decaying profile") {
  // r^-5 over {r >= 1} n {y2 > -h}: reference from dense polar quadrature
  auto exact = [](double h) {
    const int nr = 20000, na = 720;
    double acc = 0;
    for (int ia = 0; ia < na; ++ia) {
      const double phi = 2 * kPi * (ia + 0.5) / na;
      for (int ir = 0; ir < nr; ++ir) {
        const double r = 1.0 + 60.0 * std::pow((ir + 0.5) / nr, 3.0);
        const double dr = 60.0 * 3.0 * std::pow((ir + 0.5) / nr, 2.0) / nr;
        if (r * std::sin(phi) > -h) acc += std::pow(r, -5.0) * r * dr * (2 * kPi / na);
      }
    }
    return acc;
  };
  for (double h : {0.3, 1.5}) {
    auto in = assemble_intersection({SupportKind::AnnulusExterior, 1.0}, h, 50, 1.0);
    double acc = 0;
    for (const auto& p : in.pieces)
      for (int i = 0; i < p.size(); ++i) {
        if (!std::isfinite(p.w[i])) continue;
        const double r = std::hypot(p.pts(i, 0), p.pts(i, 1));
        acc += p.w[i] * std::pow(std::max(r, 1.0), -5.0);
      }
    CHECK(acc == doctest::Approx(exact(h)).epsilon(5e-4));
  }
}

TEST_CASE("quadratic polynomials on bounded shapes") {
  // integrals of 1, y1^2, y2^2 against closed forms
  auto quad = [](const Shape& s, auto&& f) {
    double a = 0;
    for (int i = 0; i < s.size(); ++i) a += s.w[i] * f(s.pts(i, 0), s.pts(i, 1));
    return a;
  };
  auto y1sq = [](double a, double) { return a * a; };
  auto y2sq = [](double, double b) { return b * b; };
  const double R = 1.3;
  auto d1 = shape_disk(R, 30);
  CHECK(quad(d1, y1sq) == doctest::Approx(kPi * std::pow(R, 4) / 4).epsilon(1e-10));
  CHECK(quad(d1, y2sq) == doctest::Approx(kPi * std::pow(R, 4) / 4).epsilon(1e-10));
  auto d3 = shape_annulus(0.7, 2.0, 30);
  const double m4 = kPi * (std::pow(2.0, 4) - std::pow(0.7, 4)) / 4;
  CHECK(quad(d3, y1sq) == doctest::Approx(m4).epsilon(1e-10));
  auto s1 = shape_sphere_surface(R, 0, kPi, 30);
  CHECK(quad(s1, y1sq) == doctest::Approx(4 * kPi * std::pow(R, 4) / 3).epsilon(1e-10));
  CHECK(quad(s1, y2sq) == doctest::Approx(4 * kPi * std::pow(R, 4) / 3).epsilon(1e-10));

  // annular sector: compare lobe-family patches against refined versions
  for (auto mk : {+1, -1}) {
    auto lo = shape_annulus_lobe(1.0, 2.5, 0.6, mk, 24);
    auto hi = shape_annulus_lobe(1.0, 2.5, 0.6, mk, 60);
    CHECK(quad(lo, y1sq) == doctest::Approx(quad(hi, y1sq)).epsilon(1e-9));
    CHECK(quad(lo, y2sq) == doctest::Approx(quad(hi, y2sq)).epsilon(1e-9));
  }
}

TEST_CASE("invalid shape parameters are rejected") {
  CHECK_THROWS(shape_disk(-1.0, 10));
  CHECK_THROWS(shape_annulus(2.0, 1.0, 10));
  CHECK_THROWS(shape_exterior_lobe(1.0, 1.0, 1.5, +1, 10));  // h >= R
  CHECK_THROWS(shape_annulus_bottom(1.0, 2.5, 0.5, 10));     // h <= R_in
  CHECK_THROWS(assemble_intersection({SupportKind::Circle, 0.5}, 0.2, 10));
}
