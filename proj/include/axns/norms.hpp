#pragma once
/// @file norms.hpp
/// @brief Space-time norms over cylindrical regions, the swirl envelope
///        functionals, positive-part splitting, cutoff pairs, exponent
///        series, and the shrinking-cylinder norm ladder.
///
/// Conventions shared by everything here:
///  - Time samples are uniformly spaced field slices; analysis windows are
///    trailing intervals (t_lo, t_hi] whose endpoints must land on sample
///    times (within 1e-9 relative slack). Quadrature in time is trapezoidal
///    over the window; the slice at the open endpoint carries the usual
///    trapezoid half-weight, since the half-open/closed distinction has no
///    effect on integrals or on sups of continuous fields.
///  - Spatial quadrature comes from RegionMask (2*pi*r trapezoid).
///  - All p-th power accumulation runs in log space (factor out the max,
///    exponentiate differences), so arbitrarily large p neither overflows
///    nor loses the leading digits.

#include <cstddef>
#include <functional>
#include <vector>

#include "axns/evolution.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"

namespace axns {

/// Non-owning time series of field slices at strictly increasing times.
struct SampleSeries {
  std::vector<double> times;
  std::vector<const ScalarField*> fields;

  std::size_t size() const { return times.size(); }
};

/// Views of a trajectory's stored slices with times shifted to the analysis
/// frame (final slice at time 0, windows trail into the past).
SampleSeries gamma_series(const Trajectory& traj);
SampleSeries omega_series(const Trajectory& traj);

/// Slice range and trapezoid weights covering the window (t_lo, t_hi].
struct WindowSlices {
  std::size_t k_lo = 0, k_hi = 0;  // inclusive index range into times
  std::vector<double> w_t;         // per-slice weights, sum = t_hi - t_lo

  std::size_t count() const { return k_hi - k_lo + 1; }
};

/// Select the slices covering [t_lo, t_hi]. Throws RegionNotCovered when the
/// times do not reach both endpoints (within slack) or fewer than two slices
/// fall inside.
WindowSlices select_window(const std::vector<double>& times, double t_lo,
                           double t_hi);

/// Space-time L^p norm of |f| over the region: p in [1, inf]; pass
/// INFINITY for the sup. allow_clip forwards to the region mask so regions
/// wider than the grid integrate over the covered part.
double lp_norm(const SampleSeries& f, const ParabolicCylinder& region,
               double p, bool allow_clip = false);

/// Spatial-only L^q norm of |f| over a cylinder (q in [1, inf]).
double spatial_lp_norm(const ScalarField& f, const HollowCylinder& cyl,
                       double q, bool allow_clip = false);

/// sup over the window (-R^2, 0] of the spatial L2 norm over the cylinder:
/// the velocity-envelope constant K_b when f is the meridional speed |b|.
double linf_l2(const SampleSeries& f, const HollowCylinder& cyl,
               bool allow_clip = false);

/// Sup of |f| over the region (the swirl envelope Lambda when f is v_theta).
/// Throws NegativeLambda if the data contain NaN.
double lambda_sup(const SampleSeries& f, const ParabolicCylinder& region,
                  bool allow_clip = false);

/// lambda_sup together with its a-priori cap sup|gamma(0)| / inner radius:
/// the swirl envelope of a decaying flow can never exceed the cap.
struct LambdaReport {
  double lambda = 0;
  double cap = 0;  // s0 / (A*R)
  bool within_cap = false;
};
LambdaReport lambda_report(const SampleSeries& v_theta,
                           const ParabolicCylinder& region, double s0,
                           bool allow_clip = false);

/// Shifted positive/negative parts: plus = omega + lambda where omega >= 0,
/// else lambda; minus = -omega + lambda where omega <= 0, else lambda. Both
/// outputs are >= lambda everywhere, min(plus, minus) = lambda nodewise and
/// plus - minus = omega nodewise. Throws NegativeLambda for lambda < 0.
struct OmegaBarPair {
  ScalarField plus, minus;
};
OmegaBarPair omega_bar_split(const ScalarField& omega, double lambda);

/// Smooth cutoff pair localizing the shrinking cylinders: phi in space, eta
/// in time. With u the normalized distance into the transition shell between
/// C(sigma1) and C(sigma2) (regions at R = 1) and h(u) = u^2*(3-2u) the C^1
/// cubic ramp, phi = h(u)^2. Then phi = 1 on C(sigma2), phi = 0 outside
/// C(sigma1), 0 <= phi <= 1, and a.e.
///   |grad phi| / phi^delta <= c_phi / (sigma1 - sigma2)
/// with c_phi = max_u 3 u^(3-4*delta) (3-2u)^(1-2*delta) (1-u), published
/// per-instance (0.75 for delta = 1/2). The exponent must satisfy
/// 0 < delta <= 3/4: beyond 3/4 the ratio diverges as u -> 0 and no finite
/// constant exists for this construction. Likewise eta(t) = h(u_t)^2 with
/// u_t = (t + sigma1^2)/(sigma1^2 - sigma2^2): eta = 0 for t <= -sigma1^2,
/// eta = 1 for t >= -sigma2^2, and |eta'| <= c_eta / (sigma1 - sigma2)^2
/// because sigma1 + sigma2 >= 1 makes the quadratic denominator dominate.
struct CutoffPair {
  double sigma1 = 0, sigma2 = 0, delta = 0;
  double c_phi = 0;  // gradient-ratio constant for this delta
  double c_eta = 0;  // max of 2*h*h' (about 1.98)
  ScalarField phi;   // sampled on the construction grid

  double phi_value(double r, double z) const;
  double phi_grad_mag(double r, double z) const;  // a.e. value, 0 on plateaus
  double eta(double t) const;
  double eta_prime(double t) const;
};

/// Throws BadSigmaOrder unless 5/8 <= sigma2 < sigma1 <= 1, DeltaOutOfRange
/// unless 0 < delta <= 3/4.
CutoffPair make_cutoff(const GridPtr& grid, double sigma1, double sigma2,
                       double delta = 0.5);

/// Exponent bookkeeping series (terms j = 1.., x = 1/gamma):
///   kGeometric      sum x^j            -> 1/(gamma-1)
///   kShifted        sum x^(j-1) * x^0.. i.e. gamma^(-j+1) -> gamma/(gamma-1)
///   kWeightedJPlus1 sum (j+1) gamma^(-j+1)
///   kTwiceJMinus1   2 sum (j-1) gamma^(-j+1)
///   kFourJMinus1    4 sum (j-1) gamma^(-j+1)
enum class SeriesKind {
  kGeometric,
  kShifted,
  kWeightedJPlus1,
  kTwiceJMinus1,
  kFourJMinus1,
};

struct SeriesResult {
  std::vector<double> partial;  // partial sums after 1..i_max terms
  double limit = 0;             // closed form
};

/// Throws GammaNotGreaterThanOne when gamma <= 1.
SeriesResult exponent_series(double gamma, SeriesKind kind, int i_max);

/// One level of the norm ladder.
struct MoserLevel {
  int i = 0;
  double sigma = 0;
  double p = 0;           // 2 * gamma^i
  double raw = 0;         // (integral of f^p over P(sigma_i))^(gamma^-i)
  double weight = 0;      // discrete measure of P(sigma_i)
  double normalized = 0;  // measure-normalized level value
  double ratio_prev = 0;  // normalized / previous normalized (1 at i = 0)
};

struct MoserLadderReport {
  SigmaSchedule schedule;
  double gamma = 0;
  std::vector<MoserLevel> levels;
  double sup_sq_estimate = 0;  // deepest normalized level
  double direct_sup_sq = 0;    // sup over P_{2,3,1} of f^2
  double rel_gap = 0;          // |estimate - direct| / direct
};

/// Climb the ladder L_i = (integral over P(sigma_i) of f^(2 gamma^i))^
/// (gamma^-i) for i = 0..depth, normalizing each level by the region's
/// discrete measure so constant fields are exact fixed points (f == c gives
/// c^2 at every level). The deepest normalized level is the sup^2 estimate,
/// compared against the directly evaluated sup^2 over the limiting region
/// P_{2,3,1}. Requires f strictly positive on P(sigma_0) (NonPositiveField)
/// and at least 16 slices inside the deepest sigma^2 trailing window
/// (RegionNotCovered). depth = -1 means schedule.i_max.
MoserLadderReport moser_ladder(const SampleSeries& f,
                               const SigmaSchedule& schedule, int depth = -1,
                               double gamma = 5.0 / 3.0);

}  // namespace axns
