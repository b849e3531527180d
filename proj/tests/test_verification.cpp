/// @file test_verification.cpp
/// @brief Verification-layer checks: proxy arithmetic against re-derived
///        formulas, swirl monotonicity on honest and tampered runs, the
///        weighted-vorticity ratio tests, scaling identities, rescaled
///        equation residuals, and the gradient-vs-curl ratio families.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "axns/errors.hpp"
#include "axns/evolution.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"
#include "axns/initial_data.hpp"
#include "axns/norms.hpp"
#include "axns/verification.hpp"
#include "harness.hpp"

using namespace axns;
using harness::expect_throw;
using harness::qoi;
using harness::record;

namespace {

bool close(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * (scale > 0 ? scale : 1.0);
}

void test_proxy_arithmetic() {
  ProxyParts p;
  p.R = 0.5;
  p.s0 = 2.25;
  p.k_b = 1.3;
  p.l2_omega_theta = 0.7;
  p.l2_velocity = 2.1;
  p.l2_omega_r = 0.4;
  p.l2_omega_z = 0.9;

  // Re-derive both formulas through a different arithmetic route
  // (sqrt of the fifth power instead of pow 5/2).
  const double base1 = p.k_b * p.k_b + p.R * p.s0;
  const double want1 = std::sqrt(base1 * base1 * base1 * base1 * base1) *
                       (p.l2_omega_theta + std::sqrt(p.R) * p.s0);
  record("first proxy formula", close(b1_proxy(p), want1, 1e-12),
         qoi(b1_proxy(p) - want1, 1e-12 * want1));

  const double kb4 = p.k_b * p.k_b * p.k_b * p.k_b;
  const double base2 =
      (kb4 + p.R * p.R * p.s0 + p.R * p.R) * p.l2_omega_theta *
          p.l2_omega_theta +
      p.R * kb4 + p.l2_velocity * p.l2_velocity + p.R * p.R * p.R;
  const double want2 = std::sqrt(base2 * base2 * base2 * base2 * base2) *
                       (p.l2_omega_r + p.l2_omega_z);
  record("second proxy formula", close(b2_proxy(p), want2, 1e-12),
         qoi(b2_proxy(p) - want2, 1e-12 * want2));

  // Degenerate input collapses both proxies to zero.
  ProxyParts z;
  z.R = 0.5;
  record("zero ingredients give zero proxies",
         b1_proxy(z) == 0.0 && b2_proxy(z) == 0.0);
}

/// Small Dirichlet run on the reference box used by the swirl checks.
Trajectory small_reference_run() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 33, 65, false);
  EvolutionConfig cfg;
  cfg.t_end = 0.0625;
  cfg.cadence = 0.03125;
  Evolver ev(g, cfg);
  return ev.run(sample_field(g, reference_gamma0), ScalarField(g));
}

void test_swirl_bounds() {
  const Trajectory traj = small_reference_run();
  record("reference run completes", traj.complete(), traj.error);

  const SwirlCheckReport ok = check_swirl_bounds(traj, 1e-6);
  record("honest run passes the swirl check", ok.pass);
  record("honest run sup never increases", ok.max_sup_increase <= 0.0,
         qoi(ok.max_sup_increase, 0.0));
  record("honest run stays inside the pointwise envelope",
         ok.pointwise_envelope && ok.max_pointwise_excess <= 0.0,
         qoi(ok.max_pointwise_excess, 0.0));
  record("report carries the initial sup", ok.s0 == 2.25);

  const double tol = default_swirl_tolerance(*traj.grid);
  record("default tolerance scales with h^2",
         close(tol, 1e-8 + 12.0 * 0.125 * 0.125, 1e-12), qoi(tol, 0.0));

  // Inflating a later slice must break monotonicity. Diffusion shaves the
  // sup by roughly a third per slice here, so the bump has to exceed that.
  Trajectory grown = traj;
  for (double& x : grown.gamma.back().v) x *= 2.0;
  const SwirlCheckReport bad1 = check_swirl_bounds(grown, 1e-6);
  record("inflated slice fails the sup check",
         !bad1.pass && !bad1.sup_monotone && bad1.max_sup_increase > 0.0);

  // A single-node spike past s0 must break the pointwise envelope.
  Trajectory spiked = traj;
  spiked.gamma[1](16, 32) += 3.0;
  const SwirlCheckReport bad2 = check_swirl_bounds(spiked, 1e-6);
  record("spiked node fails the pointwise envelope",
         !bad2.pass && !bad2.pointwise_envelope &&
             bad2.max_pointwise_excess > 0.0);

  Trajectory stub = traj;
  stub.times.resize(1);
  stub.gamma.resize(1);
  stub.omega.resize(1);
  expect_throw<RegionNotCovered>("one slice cannot show monotonicity",
                                 [&] { check_swirl_bounds(stub, 1e-6); });
}

/// Wider tiny run covering the proxy regions for small radii.
Trajectory small_wide_run() {
  const GridPtr g = make_grid(0.2, 4.5, -4.5, 4.5, 44, 93, false);
  EvolutionConfig cfg;
  cfg.t_end = 0.25;
  cfg.cadence = 0.0625;
  Evolver ev(g, cfg);
  return ev.run(sample_field(g, wide_gamma0), ScalarField(g));
}

void test_theorem_checks() {
  const Trajectory traj = small_wide_run();
  record("wide run completes", traj.complete(), traj.error);

  const std::vector<double> radii = {0.25, 0.5};
  const TheoremCheck t1 = check_theorem_i(traj, radii, 1e6);
  record("peak-vorticity check passes both radii",
         t1.pass && t1.reports.size() == 2);
  record("peak-vorticity reports carry the claim name",
         t1.reports[0].claim == "peak-vorticity-r5" &&
             t1.reports[1].R == 0.5);
  record("resolution string names the grid", t1.resolution == "44x93");
  bool finite_pos = true;
  for (const BoundReport& b : t1.reports)
    finite_pos = finite_pos && std::isfinite(b.ratio) && b.ratio > 0.0 &&
                 b.measured > 0.0 && b.proxy > 0.0 && b.ceiling == 1e6;
  record("peak-vorticity ratios are finite and positive", finite_pos,
         qoi(t1.reports[0].ratio, 1e6));
  record("proxy grows with the radius",
         t1.proxy_monotone &&
             t1.reports[0].proxy <= t1.reports[1].proxy);
  record("proxy ingredients are populated",
         t1.reports[0].parts.s0 == max_abs(traj.gamma.front()) &&
             t1.reports[0].parts.k_b > 0.0 &&
             t1.reports[0].parts.l2_omega_theta > 0.0 &&
             t1.reports[0].parts.clip_frac == 0.0);

  const TheoremCheck t2 = check_theorem_ii(traj, radii, 1e6);
  record("meridional check passes both radii",
         t2.pass && t2.reports.size() == 2 &&
             t2.reports[0].claim == "meridional-vorticity-r10");
  bool clip_seen = true;
  for (const BoundReport& b : t2.reports)
    clip_seen = clip_seen && b.parts.clip_frac > 0.0 &&
                b.parts.clip_frac < 1.0;
  record("wide proxy regions record their clipped share", clip_seen,
         qoi(t2.reports[0].parts.clip_frac, 1.0));
  bool aux_ok = true;
  for (const BoundReport& b : t2.reports)
    aux_ok = aux_ok && b.aux_h_sup > 0.0 &&
             b.measured >= b.aux_h_sup * (1.0 - 1e-12) &&
             b.measured <= 2.0 * b.aux_h_sup * (1.0 + 1e-12);
  record("component sup brackets the summed sup", aux_ok);
  record("meridional proxy ingredients are populated",
         t2.reports[0].parts.l2_velocity > 0.0 &&
             t2.reports[0].parts.l2_omega_r > 0.0 &&
             t2.reports[0].parts.l2_omega_z > 0.0);

  // An identically zero trajectory yields zero-over-zero ratios, reported
  // as zero and passing.
  Trajectory zero;
  zero.grid = traj.grid;
  zero.t_end = 0.25;
  zero.cadence = 0.125;
  zero.times = {0.0, 0.125, 0.25};
  zero.gamma.assign(3, ScalarField(traj.grid));
  zero.omega.assign(3, ScalarField(traj.grid));
  const TheoremCheck tz = check_theorem_i(zero, {0.5}, 1e6);
  record("zero trajectory reports a zero ratio",
         tz.pass && tz.reports[0].ratio == 0.0 &&
             tz.reports[0].measured == 0.0 && tz.reports[0].proxy == 0.0);

  expect_throw<ValidationError>("empty radius list is rejected", [&] {
    check_theorem_i(traj, {}, 1e6);
  });
  expect_throw<ValidationError>("negative radius is rejected", [&] {
    check_theorem_i(traj, {-0.5}, 1e6);
  });
}

void test_refinement_stability() {
  auto mk = [](std::vector<double> ratios) {
    TheoremCheck c;
    for (double r : ratios) {
      BoundReport b;
      b.ratio = r;
      c.reports.push_back(b);
    }
    return c;
  };
  record("ratios within the factor are stable",
         refinement_stable(mk({1.0, 0.3}), mk({1.7, 0.2}), 2.0));
  record("a ratio beyond the factor is unstable",
         !refinement_stable(mk({1.0}), mk({2.5}), 2.0));
  record("zero pairs are stable", refinement_stable(mk({0.0}), mk({0.0})));
  record("zero against nonzero is unstable",
         !refinement_stable(mk({0.0}), mk({1e-3})));
  record("mismatched report counts are unstable",
         !refinement_stable(mk({1.0, 1.0}), mk({1.0})));
}

void test_scaling_identities() {
  const AnalyticFlow flow = manufactured_analytic_flow();
  const HollowCylinder D = hollow_cylinder(2.0, 3.0, 1.0);

  const ScalingCheck c1 = check_scaling(flow, 1.0, D, 65, 65, 16);
  record("k = 1 scaling is bitwise exact",
         c1.rel_l2_velocity == 0.0 && c1.rel_kb == 0.0 &&
             c1.rel_l2_vorticity == 0.0 && c1.max_node_map_error == 0.0 &&
             c1.rel_sup_swirl == 0.0);

  const ScalingCheck c2 = check_scaling(flow, 0.5, D, 65, 65, 16);
  const double worst2 =
      std::max({c2.rel_l2_velocity, c2.rel_kb, c2.rel_l2_vorticity,
                c2.max_node_map_error, c2.rel_sup_swirl});
  record("dyadic k commutes with rounding", worst2 <= 1e-12,
         qoi(worst2, 1e-12));

  const ScalingCheck c3 = check_scaling(flow, 0.75, D, 65, 65, 16);
  const double worst3 = std::max({c3.rel_l2_velocity, c3.rel_kb,
                                  c3.rel_l2_vorticity, c3.rel_sup_swirl});
  record("generic k holds to near roundoff", worst3 <= 1e-10,
         qoi(worst3, 1e-10));
  record("node maps agree for generic k", c3.max_node_map_error <= 1e-9,
         qoi(c3.max_node_map_error, 1e-9));

  expect_throw<ValidationError>("k above one is rejected", [&] {
    check_scaling(flow, 2.0, D, 65, 65, 16);
  });
}

void test_scale_trajectory() {
  const Trajectory traj = small_wide_run();
  const Trajectory s = scale_trajectory(traj, 0.5);

  record("rescaled grid divides extents by k",
         close(s.grid->r_min, 0.4, 1e-15) && close(s.grid->r_max, 9.0, 1e-15) &&
             s.grid->n_r == traj.grid->n_r && s.grid->n_z == traj.grid->n_z);
  bool times_ok = true;
  for (std::size_t k = 0; k < traj.slices(); ++k)
    times_ok = times_ok && s.times[k] == 4.0 * traj.times[k];
  record("rescaled times divide by k^2", times_ok && s.t_end == 1.0 &&
                                             s.cadence == 0.25);
  bool gamma_same = true, omega_scaled = true;
  for (std::size_t k = 0; k < traj.slices(); ++k)
    for (std::size_t m = 0; m < traj.gamma[k].size(); ++m) {
      gamma_same = gamma_same && s.gamma[k].v[m] == traj.gamma[k].v[m];
      omega_scaled =
          omega_scaled && s.omega[k].v[m] == 0.125 * traj.omega[k].v[m];
    }
  record("gamma is carried over unchanged", gamma_same);
  record("omega picks up the k^3 factor exactly", omega_scaled);
  record("diagnostics are dropped by the rescale", s.diagnostics.empty());

  expect_throw<ValidationError>("non-positive k is rejected",
                                [&] { scale_trajectory(traj, 0.0); });
}

void test_rescaled_equations() {
  // Base run on the half-scale box: rescaling by k = 1/2 maps it onto the
  // reference box with times stretched fourfold, so the analysis window
  // (-1, 0] lands on sample times.
  const GridPtr g = make_grid(0.5, 2.0, -2.0, 2.0, 49, 129, false);
  EvolutionConfig cfg;
  cfg.t_end = 0.3125;
  cfg.cadence = 1.0 / 128.0;
  Evolver ev(g, cfg);
  const ScalarField gamma0 = sample_field(g, [](double r, double z) {
    return reference_gamma0(2.0 * r, 2.0 * z);
  });
  const Trajectory traj = ev.run(gamma0, ScalarField(g));
  record("half-scale run completes", traj.complete(), traj.error);

  const ResidualReport rep = check_rescaled_equations(traj, 0.5);
  record("residual report uses the interior slices", rep.slices_used == 32);
  record("rescaled gamma equation residual is small",
         std::isfinite(rep.l2_gamma_residual) &&
             rep.l2_gamma_residual < 2.0,
         qoi(rep.l2_gamma_residual, 2.0));
  record("rescaled omega equation residual is small",
         std::isfinite(rep.l2_omega_residual) &&
             rep.l2_omega_residual < 2.0,
         qoi(rep.l2_omega_residual, 2.0));

  expect_throw<RegionNotCovered>("unscaled run misses the analysis region",
                                 [&] { check_rescaled_equations(traj, 1.0); });
}

void test_gradient_ratios() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);

  // Rigid rotation: |grad v| = sqrt(2), curl = (0, 0, 2), div = 0, so the
  // ratio has the closed form below up to quadrature error in ||r||.
  AxisymVectorField rigid{ScalarField(g),
                          sample_field(g, [](double r, double) { return r; }),
                          ScalarField(g)};
  const double got = helmholtz_ratio(rigid, 2.0);
  const double want =
      std::sqrt(2.0) * std::sqrt(30.0 * M_PI) /
      (2.0 * std::sqrt(120.0 * M_PI) + std::sqrt(16.0 * M_PI * 63.75));
  record("rigid-rotation ratio matches its closed form",
         close(got, want, 1e-3), qoi(got - want, 1e-3 * want));

  const double got_q = helmholtz_ratio(rigid, 10.0 / 3.0);
  record("ratio stays finite at q = 10/3",
         std::isfinite(got_q) && got_q > 0.0, qoi(got_q, 0.0));

  AxisymVectorField none{ScalarField(g), ScalarField(g), ScalarField(g)};
  record("zero field gives a zero ratio", helmholtz_ratio(none, 2.0) == 0.0);
  expect_throw<ValidationError>("q = 1 is rejected",
                                [&] { helmholtz_ratio(rigid, 1.0); });

  // psi = r^2 z gives the linear divergence-free field (-r, 0, 2z):
  // |grad v_r| = 1, |v_r/r| = 1, |grad v_z| = 2, omega_theta = 0, and
  // ||v|| = || sqrt(r^2 + 4 z^2) ||.
  AxisymVectorField merid{
      sample_field(g, [](double r, double) { return -r; }), ScalarField(g),
      sample_field(g, [](double, double z) { return 2.0 * z; })};
  const double got_m = axisym_gradient_ratio(merid, 2.0);
  const double vol23 = 30.0 * M_PI;
  const double want_m =
      4.0 * std::sqrt(vol23) / std::sqrt(3580.0 * M_PI);
  record("meridional ratio matches its closed form",
         close(got_m, want_m, 1e-3), qoi(got_m - want_m, 1e-3 * want_m));

  AxisymVectorField leaky{
      sample_field(g, [](double r, double) { return r; }), ScalarField(g),
      ScalarField(g)};
  expect_throw<DiscretizationFault>(
      "divergent input is rejected by the meridional ratio",
      [&] { axisym_gradient_ratio(leaky, 2.0); });

  // Gradient-matrix norm: for v = 0 the only entry is the fixed -1/r^2
  // shift, whose L^(10/3) over the full region has a closed form (steep
  // integrand r^(-17/3), so use a fine grid); for the linear field
  // (r, 0, -2z) the max entry is the constant 2.
  const GridPtr gf = make_grid(1.0, 4.0, -4.0, 4.0, 193, 513, false);
  AxisymVectorField none_f{ScalarField(gf), ScalarField(gf), ScalarField(gf)};
  const double got_v0 =
      v_matrix_norm(none_f, parabolic_cylinder(1.0, 4.0, 1.0));
  const double want_v0 =
      std::pow(24.0 * M_PI / 7.0 * (1.0 - std::pow(2.0, -28.0 / 3.0)), 0.3);
  record("matrix norm of the bare metric shift", close(got_v0, want_v0, 5e-4),
         qoi(got_v0 - want_v0, 5e-4 * want_v0));

  AxisymVectorField lin{
      sample_field(g, [](double r, double) { return r; }), ScalarField(g),
      sample_field(g, [](double, double z) { return -2.0 * z; })};
  const double got_lin =
      v_matrix_norm(lin, parabolic_cylinder(2.0, 3.0, 1.0), 10.0 / 3.0);
  const double want_lin = 2.0 * std::pow(30.0 * M_PI, 0.3);
  record("matrix norm of a linear field", close(got_lin, want_lin, 1e-3),
         qoi(got_lin - want_lin, 1e-3 * want_lin));
}

void test_trig_fields_and_families() {
  const GridPtr g1 = make_grid(1.0, 4.0, -4.0, 4.0, 49, 97, false);
  const GridPtr g2 = make_grid(1.0, 4.0, -4.0, 4.0, 97, 193, false);

  const TrigField f1 = TrigField::random(*g1, 2026);
  const TrigField f2 = TrigField::random(*g2, 2026);
  bool coeff_same = true;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      coeff_same = coeff_same && f1.c[m][n] == f2.c[m][n];
  for (int m = 0; m < 3; ++m)
    coeff_same = coeff_same && f1.a[m] == f2.a[m] && f1.b[m] == f2.b[m];
  record("trig coefficients depend only on the seed", coeff_same);
  record("trig values agree across resolutions",
         f1.value(2.2, 0.3) == f2.value(2.2, 0.3));
  const TrigField f3 = TrigField::random(*g1, 2027);
  record("different seeds give different fields",
         f1.value(2.2, 0.3) != f3.value(2.2, 0.3));

  const double h = 1e-5;
  const double fd_r = (f1.value(2.2 + h, 0.3) - f1.value(2.2 - h, 0.3)) /
                      (2.0 * h);
  const double fd_z = (f1.value(2.2, 0.3 + h) - f1.value(2.2, 0.3 - h)) /
                      (2.0 * h);
  record("closed-form d_r matches a finite difference",
         std::abs(fd_r - f1.d_r(2.2, 0.3)) <= 1e-6);
  record("closed-form d_z matches a finite difference",
         std::abs(fd_z - f1.d_z(2.2, 0.3)) <= 1e-6);

  const FieldFamilyResult fam = helmholtz_family(g1, 2.0, 5, 99);
  record("family produces one ratio per field", fam.ratios.size() == 5);
  bool fam_ok = true;
  double biggest = 0;
  for (double r : fam.ratios) {
    fam_ok = fam_ok && std::isfinite(r) && r > 0.0;
    biggest = std::max(biggest, r);
  }
  record("family ratios are finite and positive", fam_ok);
  record("max ratio matches the list", fam.max_ratio == biggest);
  record("tripling the field leaves the ratio fixed",
         fam.scale_drift <= 1e-12, qoi(fam.scale_drift, 1e-12));

  const FieldFamilyResult fam2 = helmholtz_family(g1, 2.0, 5, 99);
  bool deterministic = fam2.ratios.size() == fam.ratios.size();
  for (std::size_t k = 0; deterministic && k < fam.ratios.size(); ++k)
    deterministic = fam.ratios[k] == fam2.ratios[k];
  record("family is deterministic for a fixed seed", deterministic);

  const FieldFamilyResult ax = axisym_family(g1, 2.0, 5, 7);
  bool ax_ok = ax.ratios.size() == 5 && ax.scale_drift <= 1e-12;
  for (double r : ax.ratios) ax_ok = ax_ok && std::isfinite(r) && r > 0.0;
  record("streamfunction family stays divergence-free and finite", ax_ok,
         qoi(ax.max_ratio, 0.0));

  expect_throw<ValidationError>("empty family is rejected",
                                [&] { helmholtz_family(g1, 2.0, 0, 1); });
}

}  // namespace

int main() {
  return harness::run("verification", [] {
    test_proxy_arithmetic();
    test_swirl_bounds();
    test_theorem_checks();
    test_refinement_stability();
    test_scaling_identities();
    test_scale_trajectory();
    test_rescaled_equations();
    test_gradient_ratios();
    test_trig_fields_and_families();
  });
}
