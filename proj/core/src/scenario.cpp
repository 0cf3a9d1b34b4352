#include "psdft/scenario.hpp"

#include "psdft/ddft.hpp"
#include "psdft/external_potential.hpp"
#include "psdft/io.hpp"
#include "psdft/multispecies.hpp"
#include "psdft/observables.hpp"
#include "psdft/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psdft {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_keys(const json& obj, const std::string& path,
                const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown key '" + path + "." + it.key() + "'");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T dflt) {
  if (!obj.contains(key)) return dflt;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for key '" + key + "'");
  }
}

double require_num(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing required key '" + path + "." + key + "'");
  if (!obj.at(key).is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
  return obj.at(key).get<double>();
}

struct Numerics {
  int N1 = 1, N2 = 60;
  double L1 = 2.0, L2 = 2.0;
  int M_fmt = 0, M_attr = 0;  // 0: defaults 20+N/4, 20+N/2
  SolverConfig solver;
};

Numerics parse_numerics(const json& j, int default_n1, double default_l1) {
  Numerics n;
  n.N1 = default_n1;
  n.L1 = default_l1;
  if (j.is_null()) return n;
  check_keys(j, "numerics",
             {"N1", "N2", "L1", "L2", "M_fmt", "M_attr", "scheme", "tol", "max_iter",
              "lambda_init", "lambda_final", "lambda_switch_iter"});
  n.N1 = get_or(j, "N1", n.N1);
  n.N2 = get_or(j, "N2", n.N2);
  n.L1 = get_or(j, "L1", n.L1);
  n.L2 = get_or(j, "L2", n.L2);
  n.M_fmt = get_or(j, "M_fmt", 0);
  n.M_attr = get_or(j, "M_attr", 0);
  const std::string scheme = get_or<std::string>(j, "scheme", "picard");
  if (scheme == "picard")
    n.solver.scheme = SolverConfig::Scheme::Picard;
  else if (scheme == "newton")
    n.solver.scheme = SolverConfig::Scheme::Newton;
  else
    throw ConfigError("numerics.scheme must be 'picard' or 'newton'");
  n.solver.tol = get_or(j, "tol", n.solver.tol);
  n.solver.max_iter = get_or(j, "max_iter", n.solver.max_iter);
  n.solver.lambda_init = get_or(j, "lambda_init", n.solver.lambda_init);
  n.solver.lambda_final = get_or(j, "lambda_final", n.solver.lambda_final);
  n.solver.lambda_switch_iter = get_or(j, "lambda_switch_iter", n.solver.lambda_switch_iter);
  return n;
}

json report_of(const IterationReport& rep) {
  json r;
  r["converged"] = rep.converged;
  r["iterations"] = rep.iterations;
  r["final_residual"] = rep.final_residual;
  // keep the history compact: every tenth residual plus the last
  json hist = json::array();
  for (size_t i = 0; i < rep.residuals.size(); i += 10) hist.push_back(rep.residuals[i]);
  if (!rep.residuals.empty()) hist.push_back(rep.residuals.back());
  r["residual_history"] = hist;
  return r;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << j.dump(2) << "\n";
}

int scenario_wall_1d(const json& cfg, const std::string& scen, const fs::path& outdir,
                     const RunFlags& flags) {
  const json num_j = cfg.contains("numerics") ? cfg.at("numerics") : json();
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  Numerics num = parse_numerics(num_j, 1, 2.0);

  PlanarOptions opt;
  opt.n2 = num.N2;
  opt.L1 = num.L1;
  opt.L2 = num.L2;
  opt.solver = num.solver;
  opt.M_fmt = num.M_fmt > 0 ? num.M_fmt : -1;
  opt.M_attr = num.M_attr > 0 ? num.M_attr : -1;

  OperatorCache cache;
  PlanarResult res;
  json summary;
  std::function<double(double)> dv;
  double n_far = 0;

  if (scen == "hs-wall-1d") {
    check_keys(phy, "physics", {"n_bulk"});
    opt.n_bulk = require_num(phy, "physics", "n_bulk");
    res = planar_interface_1d(PlanarKind::HardSphereWall, opt, cache);
    n_far = opt.n_bulk;
  } else {
    check_keys(phy, "physics", {"T", "r_c", "eps_w", "phase"});
    opt.T = require_num(phy, "physics", "T");
    opt.r_c = get_or(phy, "r_c", 2.5);
    opt.eps_w = get_or(phy, "eps_w", 0.865);
    const std::string phase = get_or<std::string>(phy, "phase", "liquid");
    const PlanarKind kind =
        (phase == "vapor") ? PlanarKind::WallVapor : PlanarKind::WallLiquid;
    res = planar_interface_1d(kind, opt, cache);
    const auto cx = coexistence(res.problem->spec().bulk());
    n_far = (phase == "vapor") ? cx.n_vap : cx.n_liq;
    const double ew = opt.eps_w;
    dv = [ew](double y2) { return wall_potential_93_dy(y2, ew); };
    summary["coexistence"] = {{"mu_sat", cx.mu_sat}, {"n_vap", cx.n_vap}, {"n_liq", cx.n_liq}};
  }
  if (!res.report.converged) {
    std::cerr << "solver did not converge: residual " << res.report.final_residual << "\n";
    return 3;
  }

  const Vector n = res.problem->density_of(res.z);
  const auto wd = res.problem->weighted(n);
  write_profile_csv((outdir / "profile.csv").string(), res.problem->grid(), {"density"},
                    {n});
  write_profile_csv((outdir / "weighted_densities.csv").string(), res.problem->wd_grid(),
                    {"n2", "n3", "v2y"}, {wd.n2, wd.n3, wd.vy});

  const auto sum_rule = contact_theorem_check(*res.problem, res.z, n_far, dv);
  summary["scenario"] = scen;
  summary["solver"] = report_of(res.report);
  summary["surface_tension"] = res.surface_tension;
  summary["contact_density"] = sum_rule.contact_density;
  summary["beta_p"] = sum_rule.beta_p;
  summary["sum_rule_relative_error"] = sum_rule.relative_error;
  write_json((outdir / "summary.json").string(), summary);

  if (flags.dump_operators)
    dump_operator(outdir.string(), "w3", res.problem->op_w3(), true);
  return 0;
}

int scenario_lv_1d(const json& cfg, const fs::path& outdir) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  check_keys(phy, "physics", {"T", "r_c"});
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 1, 2.0);
  PlanarOptions opt;
  opt.n2 = num.N2;
  opt.L1 = num.L1;
  opt.T = require_num(phy, "physics", "T");
  opt.r_c = get_or(phy, "r_c", 2.5);
  opt.solver = num.solver;
  OperatorCache cache;
  auto res = planar_interface_1d(PlanarKind::LiquidVapor, opt, cache);
  if (!res.report.converged) return 3;
  write_profile_csv((outdir / "profile.csv").string(), res.problem->grid(), {"density"},
                    {res.problem->density_of(res.z)});
  json summary;
  summary["scenario"] = "lv-interface-1d";
  summary["solver"] = report_of(res.report);
  summary["gamma_lv"] = res.surface_tension;
  write_json((outdir / "summary.json").string(), summary);
  return 0;
}

int scenario_contact_line(const json& cfg, const fs::path& outdir) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  check_keys(phy, "physics", {"T", "r_c", "eps_w", "theta_deg", "y2max"});
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 30, 4.0);
  ContactLineOptions opt;
  opt.n = num.N2;
  opt.L1 = num.L1;
  opt.L2 = num.L2;
  opt.T = require_num(phy, "physics", "T");
  opt.r_c = get_or(phy, "r_c", 2.5);
  opt.eps_w = get_or(phy, "eps_w", 0.865);
  opt.theta = get_or(phy, "theta_deg", 90.0) * kPi / 180.0;
  opt.y2max = get_or(phy, "y2max", 25.0);
  opt.solver = num.solver;
  if (num.M_fmt > 0) opt.M_fmt = num.M_fmt;
  if (num.M_attr > 0) opt.M_attr = num.M_attr;

  OperatorCache cache;
  auto res = contact_line_2d(opt, cache);
  if (!res.report.converged) return 3;

  const Vector n = res.problem->density_of(res.z);
  write_profile_csv((outdir / "profile2d.csv").string(), res.problem->grid(), {"density"},
                    {n});

  const double ew = opt.eps_w;
  auto dv = [ew](double y2) { return wall_potential_93_dy(y2, ew); };
  const double p_sat = res.problem->spec().bulk().pressure(res.coex.n_liq);
  auto dp = disjoining_pressure(*res.problem, res.z, p_sat, dv);
  write_table_csv((outdir / "disjoining.csv").string(), {"y1", "Pi"}, {dp.y1, dp.Pi});

  auto fb = normal_force_balance(dp, res.gamma_lv, opt.theta);

  PlanarOptions wopt;
  wopt.n2 = std::max(60, opt.n);
  wopt.T = opt.T;
  wopt.r_c = opt.r_c;
  wopt.eps_w = opt.eps_w;
  wopt.solver = opt.solver;
  auto wl = planar_interface_1d(PlanarKind::WallLiquid, wopt, cache);
  auto wv = planar_interface_1d(PlanarKind::WallVapor, wopt, cache);

  json summary;
  summary["scenario"] = "contact-line-2d";
  summary["solver"] = report_of(res.report);
  summary["gamma_lv"] = res.gamma_lv;
  summary["gamma_wl"] = wl.surface_tension;
  summary["gamma_wv"] = wv.surface_tension;
  try {
    summary["young_theta_deg"] =
        young_angle(wv.surface_tension, wl.surface_tension, res.gamma_lv) * 180.0 / kPi;
  } catch (const std::exception& e) {
    summary["young_theta_deg"] = nullptr;
  }
  summary["delta_pi"] = fb.delta_pi;
  summary["force_balance_error"] = fb.relative_error;
  write_json((outdir / "report.json").string(), summary);
  return 0;
}

int scenario_multispecies(const json& cfg, const std::string& scen, const fs::path& outdir) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 50, 4.0);
  OperatorCache cache;
  MixtureResult res;
  if (scen == "multispecies-box") {
    check_keys(phy, "physics", {"T", "alpha", "particles", "box"});
    SoftMixtureOptions opt;
    opt.n = num.N2;
    opt.T = get_or(phy, "T", 1.0);
    opt.box = get_or(phy, "box", 10.0);
    opt.alpha = get_or(phy, "alpha", opt.alpha);
    opt.particles = get_or(phy, "particles", opt.particles);
    if (num.M_fmt > 0) opt.M = num.M_fmt;
    opt.solver = num.solver;
    res = solve_soft_mixture(opt, cache);
  } else {
    check_keys(phy, "physics", {"T", "particles"});
    HardDiskMixtureOptions opt;
    opt.n = num.N2;
    opt.L = num.L1;
    opt.T = get_or(phy, "T", 1.0);
    opt.particles = get_or(phy, "particles", 10.0);
    if (num.M_fmt > 0) opt.M = num.M_fmt;
    opt.solver = num.solver;
    res = solve_hard_disk_mixture(opt, cache);
  }
  if (!res.converged) return 3;

  std::vector<std::string> names;
  for (size_t k = 0; k < res.n.size(); ++k) names.push_back("n" + std::to_string(k));
  write_profile_csv((outdir / "profiles.csv").string(), res.grid, names, res.n);
  json summary;
  summary["scenario"] = scen;
  summary["outer_iterations"] = res.outer_iterations;
  summary["mu"] = res.mu;
  summary["mass"] = res.mass;
  write_json((outdir / "summary.json").string(), summary);
  return 0;
}

int scenario_ddft(const json& cfg, const fs::path& outdir) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  check_keys(phy, "physics",
             {"T", "r_c", "eps_w", "d_eps_w", "tau", "theta_deg", "inertial", "gamma",
              "t_end", "samples"});
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 20, 4.0);

  ContactLineOptions copt;
  copt.n = num.N2;
  copt.L1 = num.L1;
  copt.L2 = num.L2;
  copt.T = require_num(phy, "physics", "T");
  copt.r_c = get_or(phy, "r_c", 2.5);
  copt.eps_w = get_or(phy, "eps_w", 0.865);
  copt.solver = num.solver;
  if (num.M_fmt > 0) copt.M_fmt = num.M_fmt;
  if (num.M_attr > 0) copt.M_attr = num.M_attr;

  const bool inertial = get_or(phy, "inertial", false);
  const double gamma = get_or(phy, "gamma", 2.0);
  const double d_eps = get_or(phy, "d_eps_w", 1.0);
  const double tau = get_or(phy, "tau", 5.0);
  const double t_end = get_or(phy, "t_end", 3.0 * tau);
  const int nsamp = get_or(phy, "samples", 76);

  OperatorCache cache;
  auto eq = contact_line_2d(copt, cache);
  if (!eq.report.converged) return 3;

  const double ew = copt.eps_w;
  DdftSystem::TimePotential pot;
  pot.v = [ew, d_eps, tau](double, double y2, double t) {
    return dynamic_wall_potential(y2, t, ew, d_eps, tau);
  };
  pot.dv_dy2 = [ew, d_eps, tau](double, double y2, double t) {
    return wall_potential_93_dy(y2, ew) * dynamic_wall_factor(t, ew, d_eps, tau);
  };
  DdftSystem sys(eq.problem, inertial, gamma, pot, true);

  std::vector<double> samples(nsamp);
  for (int i = 0; i < nsamp; ++i) samples[i] = t_end * i / (nsamp - 1.0);
  OdeOptions oopt;
  auto traj = integrate_implicit(sys.ode(), 0.0,
                                 sys.pack(eq.problem->density_of(eq.z)), samples, oopt);
  auto ledger = mass_audit(sys, traj, Rect{-2, 2, 0, 2});

  json manifest;
  manifest["scenario"] = "ddft-wall";
  manifest["inertial"] = inertial;
  manifest["steps"] = traj.steps;
  manifest["times"] = ledger.t;
  manifest["subdomain_mass"] = ledger.m;
  manifest["boundary_influx"] = ledger.flux_in;
  manifest["mass_error_rate"] = ledger.err_rate;
  manifest["max_mass_error_rate"] = ledger.max_err_rate;
  write_json((outdir / "manifest.json").string(), manifest);

  for (size_t k = 0; k < traj.t.size(); k += std::max<size_t>(1, traj.t.size() / 8)) {
    char name[64];
    std::snprintf(name, sizeof(name), "density_t%07.3f.csv", traj.t[k]);
    write_profile_csv((outdir / name).string(), eq.problem->grid(), {"density"},
                      {sys.density_part(traj.y[k])});
  }
  return 0;
}

int scenario_convergence(const json& cfg, const fs::path& outdir, const RunFlags& flags) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  check_keys(phy, "physics", {"T", "r_c", "eps_w", "phase", "n_bulk", "kind", "N_list"});
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 1, 2.0);
  const std::string kind = get_or<std::string>(phy, "kind", "hs");
  std::vector<int> Ns = get_or(phy, "N_list", std::vector<int>{50, 75, 100, 125, 150});

  std::vector<double> errs(Ns.size()), incs(Ns.size(), 0.0);
  std::vector<Profile1D> profs(Ns.size());
#ifdef _OPENMP
  omp_set_nested(0);
#endif
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, flags.jobs)) if (flags.jobs > 1)
#endif
  for (size_t i = 0; i < Ns.size(); ++i) {
    try {
      OperatorCache cache;
      PlanarOptions opt;
      opt.n2 = Ns[i];
      opt.solver = num.solver;
      PlanarResult res;
      std::function<double(double)> dv;
      double nfar = 0;
      if (kind == "hs") {
        opt.n_bulk = get_or(phy, "n_bulk", 0.7151);
        res = planar_interface_1d(PlanarKind::HardSphereWall, opt, cache);
        nfar = opt.n_bulk;
      } else {
        opt.T = get_or(phy, "T", 0.75);
        opt.r_c = get_or(phy, "r_c", 2.5);
        opt.eps_w = get_or(phy, "eps_w", 0.865);
        const std::string phase = get_or<std::string>(phy, "phase", "liquid");
        res = planar_interface_1d(
            phase == "vapor" ? PlanarKind::WallVapor : PlanarKind::WallLiquid, opt, cache);
        const auto cx = coexistence(res.problem->spec().bulk());
        nfar = (phase == "vapor") ? cx.n_vap : cx.n_liq;
        const double ew = opt.eps_w;
        dv = [ew](double y2) { return wall_potential_93_dy(y2, ew); };
      }
      errs[i] = contact_theorem_check(*res.problem, res.z, nfar, dv).relative_error;
      profs[i] = profile_of(res);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // max incremental change of the profile between consecutive N, probed on
  // a fixed fine axis
  for (size_t i = 1; i < Ns.size(); ++i) {
    double worst = 0;
    for (int j = 0; j <= 400; ++j) {
      const double y = 20.0 * j / 400.0;
      worst = std::max(worst, std::abs(profs[i](y) - profs[i - 1](y)));
    }
    incs[i] = worst;
  }

  Vector Nv(Ns.size()), ev(Ns.size()), iv(Ns.size());
  for (size_t i = 0; i < Ns.size(); ++i) {
    Nv[i] = Ns[i];
    ev[i] = errs[i];
    iv[i] = incs[i];
  }
  write_table_csv((outdir / "convergence.csv").string(),
                  {"N", "sum_rule_error", "profile_increment"}, {Nv, ev, iv});
  return 0;
}

int scenario_operator_probe(const json& cfg, const fs::path& outdir) {
  const json phy = cfg.contains("physics") ? cfg.at("physics") : json();
  check_keys(phy, "physics", {"kernel", "r_c", "M_list"});
  Numerics num =
      parse_numerics(cfg.contains("numerics") ? cfg.at("numerics") : json(), 20, 2.0);
  const std::string kname = get_or<std::string>(phy, "kernel", "w3");
  const double rc = get_or(phy, "r_c", 2.5);
  std::vector<int> Ms = get_or(phy, "M_list", std::vector<int>{10, 20, 30, 40, 50, 60});

  Kernel kernel;
  if (kname == "w2")
    kernel = kernel_hs_w2(0.5);
  else if (kname == "w3")
    kernel = kernel_hs_w3(0.5);
  else if (kname == "vw2")
    kernel = kernel_hs_vw2(0.5, false);
  else if (kname == "attr")
    kernel = kernel_attraction(rc);
  else
    throw ConfigError("physics.kernel must be one of w2, w3, vw2, attr");

  auto src = halfspace_grid(num.N1 > 1 ? num.N1 : num.N2, num.N2, num.L1, num.L2);
  auto wd = composite_weighted_density_grid(num.N1 > 1 ? num.N1 : num.N2, num.N2, num.L1,
                                            num.L2);
  const auto& tgt = (kname == "attr") ? src : wd;
  auto rows = convergence_probe(src, tgt, kernel, Ms);
  Vector Mlo(rows.size()), Mhi(rows.size()), inc(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    Mlo[i] = rows[i].M_lo;
    Mhi[i] = rows[i].M_hi;
    inc[i] = rows[i].increment;
  }
  write_table_csv((outdir / "operator_increments.csv").string(),
                  {"M_lo", "M_hi", "increment"}, {Mlo, Mhi, inc});
  return 0;
}

int dispatch(const json& cfg, const RunFlags& flags) {
  check_keys(cfg, "", {"scenario", "numerics", "physics", "output"});
  if (!cfg.contains("scenario")) throw ConfigError("missing required key 'scenario'");
  const std::string scen = cfg.at("scenario").get<std::string>();

  fs::path outdir = "psdft_out";
  if (cfg.contains("output")) {
    check_keys(cfg.at("output"), "output", {"directory", "formats"});
    outdir = get_or<std::string>(cfg.at("output"), "directory", outdir.string());
  }
  if (!flags.output_dir.empty()) outdir = flags.output_dir;
  fs::create_directories(outdir);

  if (scen == "hs-wall-1d" || scen == "bh-wall-1d")
    return scenario_wall_1d(cfg, scen, outdir, flags);
  if (scen == "lv-interface-1d") return scenario_lv_1d(cfg, outdir);
  if (scen == "contact-line-2d") return scenario_contact_line(cfg, outdir);
  if (scen == "multispecies-box" || scen == "multispecies-hd")
    return scenario_multispecies(cfg, scen, outdir);
  if (scen == "ddft-wall") return scenario_ddft(cfg, outdir);
  if (scen == "convergence-study") return scenario_convergence(cfg, outdir, flags);
  if (scen == "operator-probe") return scenario_operator_probe(cfg, outdir);
  throw ConfigError("unknown scenario '" + scen + "'");
}

}  // namespace

int run_scenario_text(const std::string& config_text, const RunFlags& flags) {
  json cfg;
  try {
    cfg = json::parse(config_text);
  } catch (const json::exception& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  }
  try {
    return dispatch(cfg, flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  }
}

int run_scenario_file(const std::string& config_path, const RunFlags& flags) {
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "cannot read config file: " << config_path << "\n";
    return 2;
  }
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return run_scenario_text(text, flags);
}

std::string normalize_config(const std::string& config_text) {
  json cfg = json::parse(config_text);
  return cfg.dump(2);
}

}  // namespace psdft
