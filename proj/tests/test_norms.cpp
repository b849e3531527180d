/// @file test_norms.cpp
/// @brief Space-time norms against closed-form values, window selection,
///        envelope functionals, positive-part splitting, cutoff constants,
///        exponent series limits, and the shrinking-cylinder norm ladder.

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

/// Uniform sample times from t_lo to 0 inclusive (dyadic spacing).
std::vector<double> uniform_times(double t_lo, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k)
    t[k] = t_lo * (1.0 - static_cast<double>(k) / static_cast<double>(n - 1));
  t.back() = 0.0;
  return t;
}

/// Series of n slices all viewing the same field.
SampleSeries constant_series(const ScalarField& f, double t_lo,
                             std::size_t n) {
  SampleSeries s;
  s.times = uniform_times(t_lo, n);
  s.fields.assign(n, &f);
  return s;
}

void test_select_window() {
  const std::vector<double> times = {-1.0, -0.75, -0.5, -0.25, 0.0};

  const WindowSlices w = select_window(times, -0.5, 0.0);
  record("window picks the trailing slice range", w.k_lo == 2 && w.k_hi == 4);
  record("window weights are the trapezoid rule",
         close(w.w_t[0], 0.125, 1e-15) && close(w.w_t[1], 0.25, 1e-15) &&
             close(w.w_t[2], 0.125, 1e-15));
  double sum = 0;
  for (double x : w.w_t) sum += x;
  record("window weights sum to the duration", close(sum, 0.5, 1e-14));

  const WindowSlices w2 = select_window(times, -0.25, 0.0);
  record("two-slice window is accepted", w2.count() == 2);

  expect_throw<RegionNotCovered>("window reaching before the data throws",
                                 [&] { select_window(times, -2.0, 0.0); });
  expect_throw<RegionNotCovered>("window endpoint off the sample times throws",
                                 [&] { select_window(times, -0.3, 0.0); });
  expect_throw<RegionNotCovered>("empty window throws",
                                 [&] { select_window(times, 0.0, 0.0); });
  expect_throw<RegionNotCovered>("a single sample time is never enough", [&] {
    select_window(std::vector<double>{0.0}, -1.0, 0.0);
  });
}

void test_lp_norms_against_closed_forms() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  const ScalarField one(g, 1.0);
  const SampleSeries s = constant_series(one, -1.0, 5);
  const ParabolicCylinder box = parabolic_cylinder(1.0, 4.0, 1.0);

  // On a node-aligned region the 2*pi*r trapezoid integrates constants
  // exactly: the space-time L^p of 1 is measure^(1/p), measure = 120*pi.
  const double vol = 120.0 * M_PI;
  record("L1 of unity is the space-time measure",
         close(lp_norm(s, box, 1.0), vol, 1e-12),
         qoi(lp_norm(s, box, 1.0) - vol, 1e-12 * vol));
  record("L2 of unity is sqrt(measure)",
         close(lp_norm(s, box, 2.0), 19.416259125556993, 1e-12));
  record("L4 of unity is measure^(1/4)",
         close(lp_norm(s, box, 4.0), std::pow(vol, 0.25), 1e-12));
  record("sup norm of unity is one",
         lp_norm(s, box, std::numeric_limits<double>::infinity()) == 1.0);

  // A huge exponent must neither overflow nor lose the answer: the result
  // of L^p on a constant is measure^(1/p) -> 1.
  const double huge = lp_norm(s, box, 1e6);
  record("p = 1e6 stays finite and near the sup", close(huge, 1.0, 1e-4),
         qoi(huge, 1.0));

  expect_throw<ValidationError>("p below one is rejected",
                                [&] { lp_norm(s, box, 0.5); });

  const HollowCylinder mid = hollow_cylinder(2.0, 3.0, 1.0);
  record("spatial L2 of unity on the middle shell",
         close(spatial_lp_norm(one, mid, 2.0), std::sqrt(30.0 * M_PI), 1e-12));
  record("spatial sup of unity is one",
         spatial_lp_norm(one, mid,
                         std::numeric_limits<double>::infinity()) == 1.0);

  // The reference swirl profile peaks at exactly 2.25 on nodes of this
  // grid, inside the middle shell, so the masked sup is bitwise 2.25.
  const ScalarField gamma0 = sample_field(g, reference_gamma0);
  record("masked sup lands on the sampled peak",
         spatial_lp_norm(gamma0, mid,
                         std::numeric_limits<double>::infinity()) == 2.25);

  // Zero data never trips the log-space accumulation.
  const ScalarField zero(g);
  record("L2 of the zero field is zero",
         spatial_lp_norm(zero, mid, 2.0) == 0.0);
}

void test_linf_l2_and_lambda() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  const HollowCylinder mid = hollow_cylinder(2.0, 3.0, 1.0);

  const ScalarField one(g, 1.0), two(g, 2.0), three(g, 3.0);
  SampleSeries s;
  s.times = {-1.0, -0.5, 0.0};
  s.fields = {&one, &two, &three};
  record("sup-in-time of the spatial L2 picks the largest slice",
         close(linf_l2(s, mid), 3.0 * std::sqrt(30.0 * M_PI), 1e-12));

  // v_theta from the reference profile: gamma0/r maximizes at r = 2 where
  // (r-1)(4-r)/r has its stationary point, value 1 at the sin peaks.
  const ScalarField vth = sample_field(
      g, [](double r, double z) { return reference_gamma0(r, z) / r; });
  const SampleSeries sv = constant_series(vth, -1.0, 5);
  const ParabolicCylinder region = parabolic_cylinder(2.0, 3.0, 1.0);
  const double lam = lambda_sup(sv, region);
  record("swirl envelope over the middle shell", close(lam, 1.0, 1e-12),
         qoi(lam - 1.0, 1e-12));

  const LambdaReport rep = lambda_report(sv, region, 2.25);
  record("envelope cap is s0 over the inner radius",
         close(rep.cap, 1.125, 1e-15));
  record("envelope sits within its cap", rep.within_cap);

  ScalarField bad = vth;
  bad(30, 80) = std::numeric_limits<double>::quiet_NaN();
  const SampleSeries sb = constant_series(bad, -1.0, 5);
  expect_throw<NegativeLambda>("NaN data is rejected by the envelope",
                               [&] { lambda_sup(sb, region); });
}

void test_omega_bar_split() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 33, 65, false);
  const ScalarField w = sample_field(g, [](double r, double z) {
    return std::sin(2.0 * r) * std::cos(0.7 * z);
  });
  const double lam = 0.7;
  const OmegaBarPair pair = omega_bar_split(w, lam);

  bool lower_ok = true, diff_ok = true, min_ok = true;
  for (std::size_t m = 0; m < w.size(); ++m) {
    lower_ok = lower_ok && pair.plus.v[m] >= lam && pair.minus.v[m] >= lam;
    diff_ok = diff_ok &&
              std::abs((pair.plus.v[m] - pair.minus.v[m]) - w.v[m]) <= 1e-14;
    min_ok = min_ok && std::min(pair.plus.v[m], pair.minus.v[m]) == lam;
  }
  record("both shifted parts dominate the shift", lower_ok);
  record("difference of the parts recovers the field", diff_ok);
  record("the smaller part equals the shift exactly", min_ok);

  expect_throw<NegativeLambda>("negative shift is rejected",
                               [&] { omega_bar_split(w, -0.1); });
}

void test_cutoffs() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  const double s1 = 0.875, s2 = 0.75;
  const CutoffPair c = make_cutoff(g, s1, s2, 0.5);

  record("gradient-ratio constant at delta = 1/2",
         close(c.c_phi, 0.75, 1e-6), qoi(c.c_phi, 0.75));
  const double u_star = 1.0 - 1.0 / std::sqrt(10.0);
  const double c_eta_exact = 12.0 * u_star * u_star * u_star *
                             (3.0 - 2.0 * u_star) * (1.0 - u_star);
  record("time-ramp constant matches its closed form",
         close(c.c_eta, c_eta_exact, 1e-9), qoi(c.c_eta - c_eta_exact, 1e-9));

  const CutoffPair c34 = make_cutoff(g, s1, s2, 0.75);
  record("gradient-ratio constant at delta = 3/4",
         close(c34.c_phi, std::sqrt(3.0), 1e-6),
         qoi(c34.c_phi, std::sqrt(3.0)));

  // Plateau, support, and range. C(sigma2) = {2 <= r <= 3, |z| <= 3};
  // C(sigma1) = {1.5 <= r <= 3.5, |z| <= 3.5}.
  record("phi is one on the inner cylinder",
         c.phi_value(2.0, 0.0) == 1.0 && c.phi_value(3.0, -3.0) == 1.0 &&
             c.phi_value(2.5, 2.9) == 1.0);
  record("phi vanishes outside the outer cylinder",
         c.phi_value(1.4, 0.0) == 0.0 && c.phi_value(3.6, 0.0) == 0.0 &&
             c.phi_value(2.5, 3.6) == 0.0);
  const double mid_phi = c.phi_value(1.75, 0.0);
  record("phi transitions across the shell", mid_phi > 0.0 && mid_phi < 1.0);

  // Sampled field agrees with the closed form at a node.
  record("sampled phi equals the closed form nodewise",
         c.phi.v[g->idx(20, 80)] == c.phi_value(g->r(20), g->z(80)));

  // a.e. gradient bound |grad phi| <= (c_phi/(s1-s2)) phi^delta, scanned on
  // a fine lattice of evaluation points.
  double worst = 0;
  for (int a = 0; a <= 400; ++a)
    for (int b = 0; b <= 400; ++b) {
      const double r = 1.0 + 3.0 * a / 400.0;
      const double z = -4.0 + 8.0 * b / 400.0;
      const double p = c.phi_value(r, z);
      if (p <= 0.0) continue;
      worst = std::max(worst,
                       c.phi_grad_mag(r, z) / std::pow(p, c.delta));
    }
  const double bound = c.c_phi / (s1 - s2);
  record("gradient ratio respects its constant",
         worst <= bound * (1.0 + 1e-9), qoi(worst, bound));

  // Time ramp: endpoints, monotone range, derivative bound, and a finite
  // difference cross-check of eta_prime in the transition.
  record("eta endpoints",
         c.eta(-s1 * s1) == 0.0 && c.eta(-s2 * s2) == 1.0 &&
             c.eta(0.0) == 1.0 && c.eta(-0.9) == 0.0);
  double worst_eta = 0;
  for (int a = 0; a <= 1000; ++a) {
    const double t = -s1 * s1 + (s1 * s1) * a / 1000.0;
    worst_eta = std::max(worst_eta, std::abs(c.eta_prime(t)));
  }
  const double eta_bound = c.c_eta / (s1 * s1 - s2 * s2);
  record("eta derivative respects its constant",
         worst_eta <= eta_bound * (1.0 + 1e-9), qoi(worst_eta, eta_bound));
  record("eta derivative also obeys the coarser square bound",
         worst_eta <= c.c_eta / ((s1 - s2) * (s1 - s2)) * (1.0 + 1e-9));
  const double tm = -0.5 * (s1 * s1 + s2 * s2), h = 1e-6;
  const double fd = (c.eta(tm + h) - c.eta(tm - h)) / (2.0 * h);
  record("eta_prime matches a finite difference",
         close(fd, c.eta_prime(tm), 1e-6), qoi(fd - c.eta_prime(tm), 1e-6));

  expect_throw<BadSigmaOrder>("swapped sigmas are rejected",
                              [&] { make_cutoff(g, 0.75, 0.875); });
  expect_throw<BadSigmaOrder>("sigma2 below 5/8 is rejected",
                              [&] { make_cutoff(g, 0.9, 0.6); });
  expect_throw<DeltaOutOfRange>("delta beyond 3/4 is rejected",
                                [&] { make_cutoff(g, s1, s2, 0.8); });
  expect_throw<DeltaOutOfRange>("delta zero is rejected",
                                [&] { make_cutoff(g, s1, s2, 0.0); });
}

void test_exponent_series() {
  const double g53 = 5.0 / 3.0;
  struct Case {
    SeriesKind kind;
    double want;
    double first;  // expected first partial sum
  };
  const Case cases[] = {
      {SeriesKind::kGeometric, 1.5, 0.6},
      {SeriesKind::kShifted, 2.5, 1.0},
      {SeriesKind::kWeightedJPlus1, 8.75, 2.0},
      {SeriesKind::kTwiceJMinus1, 7.5, 0.0},
      {SeriesKind::kFourJMinus1, 15.0, 0.0},
  };
  const char* names[] = {"geometric", "shifted", "weighted j+1",
                         "twice j-1", "four j-1"};
  int idx = 0;
  for (const Case& cs : cases) {
    const SeriesResult r = exponent_series(g53, cs.kind, 200);
    record(std::string("series limit: ") + names[idx],
           close(r.limit, cs.want, 1e-12), qoi(r.limit - cs.want, 1e-12));
    record(std::string("series first term: ") + names[idx],
           close(r.partial.front(), cs.first, 1e-12));
    record(std::string("series partial sums converge: ") + names[idx],
           std::abs(r.partial.back() - r.limit) < 1e-10 &&
               std::abs(r.partial[39] - r.limit) < 1e-6);
    bool monotone = true;
    for (std::size_t k = 1; k < r.partial.size(); ++k)
      monotone = monotone && r.partial[k] >= r.partial[k - 1];
    record(std::string("series partial sums are monotone: ") + names[idx],
           monotone);
    ++idx;
  }

  const SeriesResult r2 = exponent_series(2.0, SeriesKind::kGeometric, 60);
  record("geometric limit at gamma = 2", close(r2.limit, 1.0, 1e-15));

  expect_throw<GammaNotGreaterThanOne>("gamma = 1 is rejected", [] {
    exponent_series(1.0, SeriesKind::kGeometric, 10);
  });
  expect_throw<GammaNotGreaterThanOne>("gamma below 1 is rejected", [] {
    exponent_series(0.5, SeriesKind::kShifted, 10);
  });
  expect_throw<ValidationError>("zero terms are rejected", [] {
    exponent_series(2.0, SeriesKind::kGeometric, 0);
  });
}

void test_moser_ladder() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  const SigmaSchedule sched{8};

  // Constant input: every level of the measure-normalized ladder equals
  // the constant squared, and the direct sup agrees exactly.
  const ScalarField two(g, 2.0);
  const SampleSeries s2 = constant_series(two, -1.0, 33);
  const MoserLadderReport rep2 = moser_ladder(s2, sched);
  record("ladder depth is the full schedule", rep2.levels.size() == 9);
  bool all_four = true, ratios_one = true, sigmas_ok = true;
  for (const MoserLevel& lev : rep2.levels) {
    all_four = all_four && close(lev.normalized, 4.0, 1e-12);
    ratios_one = ratios_one && close(lev.ratio_prev, 1.0, 1e-12);
    sigmas_ok = sigmas_ok && lev.sigma == sched.sigma(lev.i);
  }
  record("constant 2 gives 4 at every level", all_four);
  record("constant input has unit level ratios", ratios_one);
  record("levels carry the schedule sigmas", sigmas_ok);
  record("level exponents follow 2*gamma^i",
         close(rep2.levels[0].p, 2.0, 1e-15) &&
             close(rep2.levels[8].p, 2.0 * std::pow(5.0 / 3.0, 8.0), 1e-12));
  record("outermost level weight is the full space-time measure",
         close(rep2.levels[0].weight, 120.0 * M_PI, 1e-12));
  record("constant ladder matches the direct sup",
         close(rep2.sup_sq_estimate, 4.0, 1e-12) &&
             close(rep2.direct_sup_sq, 4.0, 1e-12) && rep2.rel_gap <= 1e-12);

  const ScalarField one(g, 1.0);
  const MoserLadderReport rep1 =
      moser_ladder(constant_series(one, -1.0, 33), sched);
  record("constant 1 gives 1 at every level",
         close(rep1.sup_sq_estimate, 1.0, 1e-12) && rep1.rel_gap <= 1e-12);

  // A gently varying strictly positive sample: the deepest level should
  // approximate the direct sup^2 within a few percent.
  std::vector<double> times = uniform_times(-1.0, 33);
  std::vector<ScalarField> slices;
  slices.reserve(times.size());
  for (double t : times) {
    slices.push_back(sample_field(g, [t](double r, double z) {
      return 2.0 + 0.04 * std::sin(r) * std::cos(z) * std::exp(0.1 * t);
    }));
  }
  SampleSeries sv;
  sv.times = times;
  for (const ScalarField& f : slices) sv.fields.push_back(&f);
  const MoserLadderReport repv = moser_ladder(sv, sched);
  record("smooth positive sample closes the ladder gap",
         repv.rel_gap <= 0.05, qoi(repv.rel_gap, 0.05));
  bool finite_levels = true;
  for (const MoserLevel& lev : repv.levels)
    finite_levels = finite_levels && std::isfinite(lev.normalized) &&
                    lev.normalized > 0;
  record("smooth sample levels stay finite and positive", finite_levels);

  // Strict positivity is enforced on the outermost region.
  ScalarField touched = two;
  touched(30, 80) = 0.0;
  expect_throw<NonPositiveField>("a zero node inside the region throws", [&] {
    moser_ladder(constant_series(touched, -1.0, 33), sched);
  });

  // Too coarse a cadence near the deepest window is refused.
  expect_throw<RegionNotCovered>("too few trailing slices throw", [&] {
    moser_ladder(constant_series(two, -1.0, 17), sched);
  });
}

void test_trajectory_series_views() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 33, 65, false);
  Trajectory traj;
  traj.grid = g;
  traj.t_end = 0.0625;
  traj.cadence = 0.03125;
  traj.times = {0.0, 0.03125, 0.0625};
  traj.gamma.assign(3, ScalarField(g, 1.0));
  traj.omega.assign(3, ScalarField(g, 2.0));

  const SampleSeries sg = gamma_series(traj);
  const SampleSeries so = omega_series(traj);
  record("gamma series shifts to the analysis frame",
         sg.times[0] == -0.0625 && sg.times[1] == -0.03125 &&
             sg.times[2] == 0.0);
  record("series views alias the stored slices",
         sg.fields[1] == &traj.gamma[1] && so.fields[2] == &traj.omega[2]);
}

}  // namespace

int main() {
  return harness::run("norms", [] {
    test_select_window();
    test_lp_norms_against_closed_forms();
    test_linf_l2_and_lambda();
    test_omega_bar_split();
    test_cutoffs();
    test_exponent_series();
    test_moser_ladder();
    test_trajectory_series_views();
  });
}
