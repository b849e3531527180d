/// @file axns.cpp
/// @brief Command-line driver: simulation plus the verification battery.
///
/// Exit codes: 0 all requested checks pass, 1 a check failed or the
/// simulation aborted, 2 usage or I/O error.

#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "axns/checkpoint.hpp"
#include "axns/config.hpp"
#include "axns/errors.hpp"
#include "axns/evolution.hpp"
#include "axns/initial_data.hpp"
#include "axns/manufactured.hpp"
#include "axns/norms.hpp"
#include "axns/verification.hpp"

namespace {

using namespace axns;

int run_simulate(const std::string& config_path) {
  const RunConfig cfg = load_config(config_path);
  const GridPtr grid = make_grid_from(cfg);
  auto [gamma0, omega0] = make_initial(cfg, grid);
  Evolver ev(grid, make_evolution_config(cfg));
  std::printf("simulate: %zux%zu grid, t_end=%g, cadence=%g\n", grid->n_r,
              grid->n_z, cfg.t_end, cfg.cadence);
  const Trajectory traj = ev.run(gamma0, omega0);
  save_trajectory(traj, cfg.output_dir);
  save_config(cfg, cfg.output_dir + "/config.txt");
  std::printf("simulate: wrote %zu slices to %s\n", traj.slices(),
              cfg.output_dir.c_str());
  if (!traj.error.empty()) {
    std::printf("simulate: run aborted early: %s\n", traj.error.c_str());
    return 1;
  }
  return 0;
}

int run_verify_swirl(const std::string& traj_dir) {
  const Trajectory traj = load_trajectory(traj_dir);
  const SwirlCheckReport rep =
      check_swirl_bounds(traj, default_swirl_tolerance(*traj.grid));
  std::printf("verify-swirl: slices=%zu s0=%.6g tol=%.3g\n", traj.slices(),
              rep.s0, rep.eps_tol);
  std::printf("  max sup increase       %+.3e  [%s]\n", rep.max_sup_increase,
              rep.sup_monotone ? "ok" : "FAIL");
  std::printf("  max L2 increase        %+.3e  [%s]\n", rep.max_l2_increase,
              rep.lp_monotone ? "ok" : "FAIL");
  std::printf("  max L4 increase        %+.3e\n", rep.max_l4_increase);
  std::printf("  max pointwise excess   %+.3e  [%s]\n",
              rep.max_pointwise_excess,
              rep.pointwise_envelope ? "ok" : "FAIL");
  std::printf("verify-swirl: %s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

void print_theorem(const TheoremCheck& check) {
  std::printf("  resolution %s, proxy monotone in R: %s\n",
              check.resolution.c_str(), check.proxy_monotone ? "yes" : "NO");
  for (const BoundReport& b : check.reports)
    std::printf(
        "  R=%-5g measured=%.6e proxy=%.6e ratio=%.6e clip=%.3f [%s]\n",
        b.R, b.measured, b.proxy, b.ratio, b.parts.clip_frac,
        b.pass ? "ok" : "FAIL");
}

int run_verify_thm1(const std::string& traj_dir, const std::string& part,
                    const std::vector<double>& radii, double ceiling,
                    const std::string& fine_dir) {
  const Trajectory traj = load_trajectory(traj_dir);
  const bool part_i = part == "i";
  const TheoremCheck check = part_i
                                 ? check_theorem_i(traj, radii, ceiling)
                                 : check_theorem_ii(traj, radii, ceiling);
  std::printf("verify-thm1 --part %s (ceiling %.3g):\n", part.c_str(),
              ceiling);
  print_theorem(check);
  bool pass = check.pass;
  if (!fine_dir.empty()) {
    const Trajectory fine = load_trajectory(fine_dir);
    const TheoremCheck fc = part_i ? check_theorem_i(fine, radii, ceiling)
                                   : check_theorem_ii(fine, radii, ceiling);
    print_theorem(fc);
    const bool stable = refinement_stable(check, fc);
    std::printf("  refinement stable within factor 2: %s\n",
                stable ? "yes" : "NO");
    pass = pass && fc.pass && stable;
  }
  std::printf("verify-thm1: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_verify_scaling(const std::vector<double>& ks, std::size_t nodes,
                       std::size_t n_t) {
  const AnalyticFlow flow = manufactured_analytic_flow();
  const HollowCylinder D = hollow_cylinder(1.0, 4.0, 1.0);
  bool pass = true;
  for (double k : ks) {
    const ScalingCheck c = check_scaling(flow, k, D, nodes, nodes, n_t);
    const double tol = k == 1.0 ? 0.0 : 1e-8;
    const double worst =
        std::max({c.rel_l2_velocity, c.rel_kb, c.rel_l2_vorticity,
                  c.max_node_map_error, c.rel_sup_swirl});
    const bool ok = worst <= tol;
    std::printf(
        "verify-scaling k=%-6g v:%.2e kb:%.2e w:%.2e nodes:%.2e swirl:%.2e "
        "[%s]\n",
        k, c.rel_l2_velocity, c.rel_kb, c.rel_l2_vorticity,
        c.max_node_map_error, c.rel_sup_swirl, ok ? "ok" : "FAIL");
    pass = pass && ok;
  }
  std::printf("verify-scaling: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_moser_ladder(const std::string& traj_dir, int depth) {
  const Trajectory traj = load_trajectory(traj_dir);
  const AnnularGrid& g = *traj.grid;

  // Swirl envelope over the outermost ladder region, then the shifted
  // positive part of omega slice by slice.
  std::vector<ScalarField> v_theta;
  v_theta.reserve(traj.slices());
  for (const ScalarField& ga : traj.gamma) {
    ScalarField vt(traj.grid);
    for (std::size_t i = 0; i < g.n_r; ++i)
      for (std::size_t j = 0; j < g.n_z; ++j)
        vt(i, j) = ga(i, j) / g.r(i);
    v_theta.push_back(std::move(vt));
  }
  SampleSeries vt_series;
  vt_series.times.resize(traj.slices());
  for (std::size_t k = 0; k < traj.slices(); ++k)
    vt_series.times[k] = traj.analysis_time(k);
  for (const ScalarField& f : v_theta) vt_series.fields.push_back(&f);

  const ParabolicCylinder outer = parabolic_cylinder(1.0, 4.0, 1.0);
  const double s0 = max_abs(traj.gamma.front());
  const LambdaReport lam = lambda_report(vt_series, outer, s0);
  std::printf("moser-ladder: lambda=%.6g (cap %.6g, %s)\n", lam.lambda,
              lam.cap, lam.within_cap ? "within cap" : "CAP EXCEEDED");

  std::vector<ScalarField> plus;
  plus.reserve(traj.slices());
  for (const ScalarField& om : traj.omega)
    plus.push_back(omega_bar_split(om, lam.lambda).plus);
  SampleSeries f;
  f.times = vt_series.times;
  for (const ScalarField& p : plus) f.fields.push_back(&p);

  SigmaSchedule sched;
  sched.i_max = depth;
  const MoserLadderReport rep = moser_ladder(f, sched, depth);
  for (const MoserLevel& lv : rep.levels)
    std::printf("  i=%-2d sigma=%.6f p=%-8.4g level=%.8e ratio=%.4f\n", lv.i,
                lv.sigma, lv.p, lv.normalized, lv.ratio_prev);
  std::printf("  ladder estimate %.8e  direct sup^2 %.8e  gap %.3f%%\n",
              rep.sup_sq_estimate, rep.direct_sup_sq, 100.0 * rep.rel_gap);
  const bool pass = lam.within_cap && rep.rel_gap <= 0.05;
  std::printf("moser-ladder: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

int run_helmholtz(double q, int family_size, std::uint64_t seed,
                  std::size_t nodes) {
  const GridPtr grid =
      make_grid(1.0, 4.0, -4.0, 4.0, nodes, 2 * nodes - 1, false);
  const FieldFamilyResult free3 = helmholtz_family(grid, q, family_size, seed);
  std::printf(
      "helmholtz: q=%g family=%d seed=%llu grid=%zux%zu\n", q, family_size,
      static_cast<unsigned long long>(seed), grid->n_r, grid->n_z);
  std::printf("  full-gradient family: max ratio %.6f, scale drift %.3e\n",
              free3.max_ratio, free3.scale_drift);
  const FieldFamilyResult merid = axisym_family(grid, q, family_size, seed);
  std::printf("  meridional family:    max ratio %.6f, scale drift %.3e\n",
              merid.max_ratio, merid.scale_drift);
  bool pass = free3.scale_drift <= 1e-12 && merid.scale_drift <= 1e-12;
  for (double r : free3.ratios) pass = pass && std::isfinite(r);
  for (double r : merid.ratios) pass = pass && std::isfinite(r);
  std::printf("helmholtz: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

// Analytic operator test fields with hand-derived derivatives.
namespace optest {
double f(double r, double z) { return std::sin(2 * r) * std::cos(1.5 * z); }
double lap_f(double r, double z) {
  return 0.25 * (-25.0 * r * std::sin(2 * r) + 8.0 * std::cos(2 * r)) *
         std::cos(1.5 * z) / r;
}
double df_dr(double r, double z) {
  return 2.0 * std::cos(2 * r) * std::cos(1.5 * z);
}
double df_dz(double r, double z) {
  return -1.5 * std::sin(2 * r) * std::sin(1.5 * z);
}
double vr(double r, double z) { return std::sin(2 * r) * std::cos(z); }
double vt(double r, double z) { return 0.5 * r * std::cos(r) * std::sin(z); }
double vz(double r, double z) { return std::cos(2 * r) * std::sin(2 * z); }
double div_v(double r, double z) {
  return 2 * std::cos(2 * r) * std::cos(z) +
         std::sin(2 * r) * std::cos(z) / r +
         2 * std::cos(2 * r) * std::cos(2 * z);
}
double wr(double r, double z) { return -0.5 * r * std::cos(r) * std::cos(z); }
double wt(double r, double z) {
  return (4 * std::cos(z) - 1) * std::sin(2 * r) * std::sin(z);
}
double wz(double r, double z) {
  return 0.5 * (2 * std::cos(r) - r * std::sin(r)) * std::sin(z);
}
}  // namespace optest

// Max error over interior nodes.
double interior_sup_err(const ScalarField& got,
                        double (*exact)(double, double)) {
  const AnnularGrid& g = *got.grid;
  double e = 0;
  for (std::size_t i = 1; i + 1 < g.n_r; ++i)
    for (std::size_t j = 1; j + 1 < g.n_z; ++j)
      e = std::max(e, std::abs(got(i, j) - exact(g.r(i), g.z(j))));
  return e;
}

using OperatorErrors = std::array<double, 7>;

OperatorErrors operator_errors(std::size_t n) {
  const GridPtr grid = make_grid(1.0, 4.0, -4.0, 4.0, n, n, false);
  const ScalarField f = sample_field(grid, optest::f);
  AxisymVectorField v;
  v.v_r = sample_field(grid, optest::vr);
  v.v_theta = sample_field(grid, optest::vt);
  v.v_z = sample_field(grid, optest::vz);
  const VorticityField w = curl(v);
  return {interior_sup_err(laplacian_axisym(f), optest::lap_f),
          interior_sup_err(d_r(f), optest::df_dr),
          interior_sup_err(d_z(f), optest::df_dz),
          interior_sup_err(divergence(v), optest::div_v),
          interior_sup_err(w.omega_r, optest::wr),
          interior_sup_err(w.omega_theta, optest::wt),
          interior_sup_err(w.omega_z, optest::wz)};
}

int run_convergence_operators(int levels) {
  std::vector<OperatorErrors> errs;
  for (int l = 0; l < levels; ++l)
    errs.push_back(operator_errors(64u * (1u << l) + 1u));
  bool pass = true;
  const char* names[] = {"laplacian", "grad_r", "grad_z", "divergence",
                         "curl_r",    "curl_t", "curl_z"};
  for (int c = 0; c < 7; ++c) {
    std::printf("  %-10s", names[c]);
    for (int l = 0; l < levels; ++l) {
      std::printf(" %.3e", errs[l][c]);
      if (l > 0) {
        const double rate = errs[l - 1][c] / errs[l][c];
        std::printf(" (x%.2f)", rate);
        if (rate < 3.2 || rate > 4.8) pass = false;
      }
    }
    std::printf("\n");
  }
  std::printf("convergence (operators): %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

double mms_final_error(std::size_t n_r, std::size_t n_z) {
  const GridPtr grid = make_grid(1.0, 4.0, -4.0, 4.0, n_r, n_z, false);
  EvolutionConfig cfg;
  cfg.t_end = 0.25;
  cfg.cadence = 0.25;
  cfg.source_gamma = &ManufacturedFlow::source_gamma;
  cfg.source_omega = &ManufacturedFlow::source_omega;
  Evolver ev(grid, cfg);
  auto at0 = [](double (*f)(double, double, double)) {
    return [f](double r, double z) { return f(r, z, 0.0); };
  };
  const Trajectory traj = ev.run(sample_field(grid, at0(&ManufacturedFlow::gamma)),
                                 sample_field(grid, at0(&ManufacturedFlow::omega)));
  if (!traj.error.empty()) throw DiscretizationFault(traj.error);
  const ScalarField& ga = traj.gamma.back();
  const ScalarField& om = traj.omega.back();
  const double t = traj.times.back();
  double e = 0;
  const AnnularGrid& g = *grid;
  for (std::size_t i = 0; i < g.n_r; ++i)
    for (std::size_t j = 0; j < g.n_z; ++j) {
      e = std::max(e, std::abs(ga(i, j) -
                               ManufacturedFlow::gamma(g.r(i), g.z(j), t)));
      e = std::max(e, std::abs(om(i, j) -
                               ManufacturedFlow::omega(g.r(i), g.z(j), t)));
    }
  return e;
}

int run_convergence_mms(int levels) {
  std::vector<double> errs;
  for (int l = 0; l < levels; ++l) {
    const std::size_t n = 32u * (1u << l);
    errs.push_back(mms_final_error(n + 1, 2 * n + 1));
    std::printf("  level %d (%zux%zu): Linf error %.6e\n", l, n + 1,
                2 * n + 1, errs.back());
  }
  const double order =
      std::log2(errs.front() / errs.back()) / (levels - 1);
  const bool pass = order >= 1.7 && order <= 2.3;
  std::printf("convergence (forced solution): order %.3f\n", order);
  std::printf("convergence: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axisymmetric swirl flow: simulation and verification"};
  app.require_subcommand(1);

  std::string config_path, traj_dir, fine_dir, part = "i";
  std::vector<double> radii = {0.25, 0.5, 1.0};
  std::vector<double> ks = {1.0, 0.5, 0.25};
  double ceiling = 1e6, q = 2.0;
  int depth = 8, family_size = 50, levels = 3;
  std::size_t nodes = 129, n_t = 64, hh_nodes = 97;
  std::uint64_t seed = 20260816;
  bool mms = false;

  auto* sim = app.add_subcommand("simulate", "run a configured simulation");
  sim->add_option("config", config_path, "config file")->required();

  auto* vsw = app.add_subcommand("verify-swirl",
                                 "maximum-principle checks on a trajectory");
  vsw->add_option("traj", traj_dir, "trajectory directory")->required();

  auto* vth = app.add_subcommand("verify-thm1",
                                 "weighted-vorticity ratio tests");
  vth->add_option("traj", traj_dir, "trajectory directory")->required();
  vth->add_option("--part", part, "i or ii")
      ->check(CLI::IsMember({"i", "ii"}));
  vth->add_option("--radii", radii, "radii R")->delimiter(',');
  vth->add_option("--ceiling", ceiling, "ratio ceiling");
  vth->add_option("--fine", fine_dir, "finer-grid trajectory to compare");

  auto* vsc = app.add_subcommand("verify-scaling",
                                 "closed-form scaling identities");
  vsc->add_option("--k", ks, "scale factors")->delimiter(',');
  vsc->add_option("--nodes", nodes, "quadrature nodes per axis");
  vsc->add_option("--nt", n_t, "time intervals");

  auto* mos = app.add_subcommand("moser-ladder",
                                 "shrinking-cylinder norm ladder");
  mos->add_option("traj", traj_dir, "trajectory directory")->required();
  mos->add_option("--depth", depth, "ladder depth");

  auto* hel = app.add_subcommand("helmholtz",
                                 "gradient-vs-curl ratio families");
  hel->add_option("--q", q, "norm exponent")->required();
  hel->add_option("--family-size", family_size, "number of fields")
      ->required();
  hel->add_option("--seed", seed, "RNG seed")->required();
  hel->add_option("--grid", hh_nodes, "radial nodes (axial is 2n-1)");

  auto* con = app.add_subcommand("convergence", "order-of-accuracy studies");
  con->add_option("--levels", levels, "grid levels")->required();
  con->add_flag("--mms", mms, "forced-solution study instead of operators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return run_simulate(config_path);
    if (*vsw) return run_verify_swirl(traj_dir);
    if (*vth) return run_verify_thm1(traj_dir, part, radii, ceiling, fine_dir);
    if (*vsc) return run_verify_scaling(ks, nodes, n_t);
    if (*mos) return run_moser_ladder(traj_dir, depth);
    if (*hel) return run_helmholtz(q, family_size, seed, hh_nodes);
    if (*con) return mms ? run_convergence_mms(levels)
                         : run_convergence_operators(levels);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
