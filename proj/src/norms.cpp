/// @file norms.cpp
/// @brief Space-time norms, envelopes, cutoffs, series, and the norm ladder.

#include "axns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "axns/errors.hpp"

namespace axns {

namespace {

double clamp01(double u) { return std::min(1.0, std::max(0.0, u)); }

// C^1 cubic ramp and its derivative.
double ramp(double u) { return u * u * (3.0 - 2.0 * u); }
double ramp_d(double u) { return 6.0 * u * (1.0 - u); }

// Maximize g over [0, 1]: dense scan plus golden-section refinement around
// the best cell. The integrands here are smooth unimodal-or-endpoint curves;
// the scan pins the basin and the refinement polishes it.
double max_on_unit(const std::function<double(double)>& g) {
  const int n = 4096;
  double best = g(0.0), best_u = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double u = static_cast<double>(k) / n;
    const double val = g(u);
    if (val > best) {
      best = val;
      best_u = u;
    }
  }
  double lo = std::max(0.0, best_u - 1.0 / n);
  double hi = std::min(1.0, best_u + 1.0 / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
  double ga = g(a), gb = g(b);
  for (int it = 0; it < 200; ++it) {
    if (ga < gb) {
      lo = a;
      a = b;
      ga = gb;
      b = lo + gr * (hi - lo);
      gb = g(b);
    } else {
      hi = b;
      b = a;
      gb = ga;
      a = hi - gr * (hi - lo);
      ga = g(a);
    }
  }
  return std::max(best, std::max(ga, gb));
}

void require_series_grid(const SampleSeries& s) {
  if (s.times.empty() || s.fields.size() != s.times.size())
    throw RegionNotCovered("sample series is empty or misshapen");
  for (std::size_t k = 1; k < s.fields.size(); ++k)
    require_same_grid(*s.fields[0], *s.fields[k]);
}

// Max that keeps NaN alive: std::max(a, NaN) returns a because every NaN
// comparison is false, which would hide bad data from the norms.
double nan_max(double a, double b) { return std::isnan(b) ? b : std::max(a, b); }

// Max of |f| over mask nodes, one slice. NaN entries propagate.
double masked_max(const ScalarField& f, const RegionMask& m) {
  double v = 0;
  for (std::size_t i = m.i_lo; i <= m.i_hi; ++i)
    for (std::size_t j = m.j_lo; j <= m.j_hi; ++j) {
      const double a = std::abs(f(i, j));
      if (std::isnan(a)) return a;
      v = std::max(v, a);
    }
  return v;
}

// sum over mask of w * (|f|/M)^p, accumulated through exp(p*log(|f|/M)) so
// the largest term is exactly 1 and nothing overflows at any p.
double masked_power_sum(const ScalarField& f, const RegionMask& m, double p,
                        double log_m) {
  double s = 0;
  for (std::size_t i = m.i_lo; i <= m.i_hi; ++i)
    for (std::size_t j = m.j_lo; j <= m.j_hi; ++j) {
      const double a = std::abs(f(i, j));
      if (a > 0.0) s += m.weight(i, j) * std::exp(p * (std::log(a) - log_m));
    }
  return s;
}

struct PowerAccum {
  double max_abs = 0;  // M over the window and mask
  double log_sum = 0;  // log of sum w_t*w_x*(|f|/M)^p; meaningless if M == 0
};

PowerAccum accumulate_power(const SampleSeries& f, const RegionMask& mask,
                            const WindowSlices& win, double p) {
  PowerAccum acc;
  for (std::size_t k = win.k_lo; k <= win.k_hi; ++k)
    acc.max_abs = nan_max(acc.max_abs, masked_max(*f.fields[k], mask));
  if (acc.max_abs == 0.0) return acc;
  const double log_m = std::log(acc.max_abs);
  double s = 0;
  for (std::size_t k = win.k_lo; k <= win.k_hi; ++k)
    s += win.w_t[k - win.k_lo] *
         masked_power_sum(*f.fields[k], mask, p, log_m);
  acc.log_sum = std::log(s);
  return acc;
}

}  // namespace

SampleSeries gamma_series(const Trajectory& traj) {
  SampleSeries s;
  s.times.reserve(traj.slices());
  s.fields.reserve(traj.slices());
  for (std::size_t k = 0; k < traj.slices(); ++k) {
    s.times.push_back(traj.analysis_time(k));
    s.fields.push_back(&traj.gamma[k]);
  }
  return s;
}

SampleSeries omega_series(const Trajectory& traj) {
  SampleSeries s;
  s.times.reserve(traj.slices());
  s.fields.reserve(traj.slices());
  for (std::size_t k = 0; k < traj.slices(); ++k) {
    s.times.push_back(traj.analysis_time(k));
    s.fields.push_back(&traj.omega[k]);
  }
  return s;
}

WindowSlices select_window(const std::vector<double>& times, double t_lo,
                           double t_hi) {
  if (times.size() < 2)
    throw RegionNotCovered("a time window needs at least two sample times");
  if (!(t_hi > t_lo))
    throw RegionNotCovered("time window is empty");
  const double dt_typ = (times.back() - times.front()) /
                        static_cast<double>(times.size() - 1);
  const double tol = 1e-9 * std::max(dt_typ, 1e-30);

  std::size_t k_lo = times.size();
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] >= t_lo - tol) {
      k_lo = k;
      break;
    }
  std::size_t k_hi = times.size();
  for (std::size_t k = times.size(); k-- > 0;)
    if (times[k] <= t_hi + tol) {
      k_hi = k;
      break;
    }
  std::ostringstream why;
  if (k_lo >= times.size() || k_hi >= times.size() || k_hi <= k_lo) {
    why << "window [" << t_lo << ", " << t_hi
        << "] selects fewer than two slices";
    throw RegionNotCovered(why.str());
  }
  if (std::abs(times[k_lo] - t_lo) > tol ||
      std::abs(times[k_hi] - t_hi) > tol) {
    why << "window [" << t_lo << ", " << t_hi
        << "] endpoints do not land on sample times (nearest: "
        << times[k_lo] << ", " << times[k_hi] << ")";
    throw RegionNotCovered(why.str());
  }

  WindowSlices w;
  w.k_lo = k_lo;
  w.k_hi = k_hi;
  w.w_t.resize(k_hi - k_lo + 1);
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    double wt = 0;
    if (k > k_lo) wt += 0.5 * (times[k] - times[k - 1]);
    if (k < k_hi) wt += 0.5 * (times[k + 1] - times[k]);
    w.w_t[k - k_lo] = wt;
  }
  return w;
}

double lp_norm(const SampleSeries& f, const ParabolicCylinder& region,
               double p, bool allow_clip) {
  require_series_grid(f);
  const RegionMask mask =
      make_region_mask(f.fields[0]->grid, region.space, allow_clip);
  const WindowSlices win =
      select_window(f.times, region.t_lo(), region.t_hi());
  if (std::isinf(p)) {
    double v = 0;
    for (std::size_t k = win.k_lo; k <= win.k_hi; ++k)
      v = nan_max(v, masked_max(*f.fields[k], mask));
    return v;
  }
  if (!(p >= 1.0))
    throw ValidationError("norm exponent must satisfy p >= 1", "norms.p");
  const PowerAccum acc = accumulate_power(f, mask, win, p);
  if (acc.max_abs == 0.0) return 0.0;
  return acc.max_abs * std::exp(acc.log_sum / p);
}

double spatial_lp_norm(const ScalarField& f, const HollowCylinder& cyl,
                       double q, bool allow_clip) {
  const RegionMask mask = make_region_mask(f.grid, cyl, allow_clip);
  if (std::isinf(q)) return masked_max(f, mask);
  if (!(q >= 1.0))
    throw ValidationError("norm exponent must satisfy q >= 1", "norms.q");
  const double m = masked_max(f, mask);
  if (m == 0.0) return 0.0;
  const double s = masked_power_sum(f, mask, q, std::log(m));
  return m * std::exp(std::log(s) / q);
}

double linf_l2(const SampleSeries& f, const HollowCylinder& cyl,
               bool allow_clip) {
  require_series_grid(f);
  const RegionMask mask = make_region_mask(f.fields[0]->grid, cyl, allow_clip);
  const WindowSlices win =
      select_window(f.times, -cyl.R * cyl.R, 0.0);
  double best = 0;
  for (std::size_t k = win.k_lo; k <= win.k_hi; ++k) {
    const ScalarField& slice = *f.fields[k];
    const double m = masked_max(slice, mask);
    if (m == 0.0) continue;
    const double s = masked_power_sum(slice, mask, 2.0, std::log(m));
    best = nan_max(best, m * std::sqrt(s));
  }
  return best;
}

double lambda_sup(const SampleSeries& f, const ParabolicCylinder& region,
                  bool allow_clip) {
  const double v = lp_norm(f, region, INFINITY, allow_clip);
  if (!std::isfinite(v))
    throw NegativeLambda("sup of |v_theta| is not finite");
  return v;
}

LambdaReport lambda_report(const SampleSeries& v_theta,
                           const ParabolicCylinder& region, double s0,
                           bool allow_clip) {
  LambdaReport rep;
  rep.lambda = lambda_sup(v_theta, region, allow_clip);
  rep.cap = s0 / region.space.r_lo();
  rep.within_cap = rep.lambda <= rep.cap * (1.0 + 1e-8);
  return rep;
}

OmegaBarPair omega_bar_split(const ScalarField& omega, double lambda) {
  if (!(lambda >= 0.0))
    throw NegativeLambda("the shift must be a nonnegative finite number");
  OmegaBarPair out;
  out.plus = ScalarField(omega.grid);
  out.minus = ScalarField(omega.grid);
  for (std::size_t m = 0; m < omega.size(); ++m) {
    const double w = omega.v[m];
    out.plus.v[m] = w >= 0.0 ? w + lambda : lambda;
    out.minus.v[m] = w <= 0.0 ? -w + lambda : lambda;
  }
  return out;
}

double CutoffPair::phi_value(double r, double z) const {
  const double d = 4.0 * (sigma1 - sigma2);
  const double u1 = (r - (5.0 - 4.0 * sigma1)) / d;
  const double u2 = (4.0 * sigma1 - r) / d;
  const double u3 = (4.0 * sigma1 - std::abs(z)) / d;
  const double u = clamp01(std::min(u1, std::min(u2, u3)));
  const double h = ramp(u);
  return h * h;
}

double CutoffPair::phi_grad_mag(double r, double z) const {
  const double d = 4.0 * (sigma1 - sigma2);
  const double u1 = (r - (5.0 - 4.0 * sigma1)) / d;
  const double u2 = (4.0 * sigma1 - r) / d;
  const double u3 = (4.0 * sigma1 - std::abs(z)) / d;
  const double u = std::min(u1, std::min(u2, u3));
  if (u <= 0.0 || u >= 1.0) return 0.0;
  // In the transition shell exactly one ramp is active almost everywhere and
  // each ramp has slope 1/d in its own coordinate.
  return 2.0 * ramp(u) * ramp_d(u) / d;
}

double CutoffPair::eta(double t) const {
  const double u =
      clamp01((t + sigma1 * sigma1) / (sigma1 * sigma1 - sigma2 * sigma2));
  const double h = ramp(u);
  return h * h;
}

double CutoffPair::eta_prime(double t) const {
  const double den = sigma1 * sigma1 - sigma2 * sigma2;
  const double u = (t + sigma1 * sigma1) / den;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 2.0 * ramp(u) * ramp_d(u) / den;
}

CutoffPair make_cutoff(const GridPtr& grid, double sigma1, double sigma2,
                       double delta) {
  if (!(sigma2 >= 0.625) || !(sigma2 < sigma1) || !(sigma1 <= 1.0))
    throw BadSigmaOrder("cutoff needs 5/8 <= sigma2 < sigma1 <= 1");
  if (!(delta > 0.0) || !(delta <= 0.75))
    throw DeltaOutOfRange(
        "gradient-ratio exponent must lie in (0, 3/4]: beyond 3/4 the ratio "
        "|grad phi|/phi^delta is unbounded for a squared C^1 ramp");
  CutoffPair c;
  c.sigma1 = sigma1;
  c.sigma2 = sigma2;
  c.delta = delta;
  c.c_phi = max_on_unit([delta](double u) {
    return 3.0 * std::pow(u, 3.0 - 4.0 * delta) *
           std::pow(3.0 - 2.0 * u, 1.0 - 2.0 * delta) * (1.0 - u);
  });
  c.c_eta = max_on_unit([](double u) { return 2.0 * ramp(u) * ramp_d(u); });
  c.phi = sample_field(
      grid, [&c](double r, double z) { return c.phi_value(r, z); });
  return c;
}

SeriesResult exponent_series(double gamma, SeriesKind kind, int i_max) {
  if (!(gamma > 1.0))
    throw GammaNotGreaterThanOne("series require gamma > 1, got " +
                                 std::to_string(gamma));
  if (i_max < 1)
    throw ValidationError("series need at least one term", "series.i_max");
  const double x = 1.0 / gamma;
  SeriesResult res;
  res.partial.reserve(static_cast<std::size_t>(i_max));
  double sum = 0;
  for (int j = 1; j <= i_max; ++j) {
    double term = 0;
    switch (kind) {
      case SeriesKind::kGeometric:
        term = std::pow(gamma, -j);
        break;
      case SeriesKind::kShifted:
        term = std::pow(gamma, -j + 1);
        break;
      case SeriesKind::kWeightedJPlus1:
        term = (j + 1) * std::pow(gamma, -j + 1);
        break;
      case SeriesKind::kTwiceJMinus1:
        term = 2.0 * (j - 1) * std::pow(gamma, -j + 1);
        break;
      case SeriesKind::kFourJMinus1:
        term = 4.0 * (j - 1) * std::pow(gamma, -j + 1);
        break;
    }
    sum += term;
    res.partial.push_back(sum);
  }
  const double o = 1.0 - x;
  switch (kind) {
    case SeriesKind::kGeometric:
      res.limit = x / o;
      break;
    case SeriesKind::kShifted:
      res.limit = 1.0 / o;
      break;
    case SeriesKind::kWeightedJPlus1:
      res.limit = x / (o * o) + 2.0 / o;
      break;
    case SeriesKind::kTwiceJMinus1:
      res.limit = 2.0 * x / (o * o);
      break;
    case SeriesKind::kFourJMinus1:
      res.limit = 4.0 * x / (o * o);
      break;
  }
  return res;
}

MoserLadderReport moser_ladder(const SampleSeries& f,
                               const SigmaSchedule& schedule, int depth,
                               double gamma) {
  if (!(gamma > 1.0))
    throw GammaNotGreaterThanOne("the ladder requires gamma > 1");
  if (depth < 0) depth = schedule.i_max;
  require_series_grid(f);
  const GridPtr grid = f.fields[0]->grid;

  // Positivity over the outermost region and full window.
  {
    const ParabolicCylinder p0 = schedule.parabolic(0, 1.0);
    const RegionMask mask = make_region_mask(grid, p0.space);
    const WindowSlices win = select_window(f.times, p0.t_lo(), p0.t_hi());
    for (std::size_t k = win.k_lo; k <= win.k_hi; ++k)
      for (std::size_t i = mask.i_lo; i <= mask.i_hi; ++i)
        for (std::size_t j = mask.j_lo; j <= mask.j_hi; ++j)
          if (!((*f.fields[k])(i, j) > 0.0))
            throw NonPositiveField(
                "ladder input must be strictly positive on the outermost "
                "region (shift by the swirl envelope first)");
  }

  // Cadence guard: at least 16 slices inside the deepest trailing
  // sigma^2 window.
  {
    const double s = schedule.sigma(depth);
    const double t_lo = -s * s;
    std::size_t inside = 0;
    for (double t : f.times)
      if (t > t_lo && t <= 1e-12) ++inside;
    if (inside < 16) {
      std::ostringstream os;
      os << "only " << inside << " slices inside the deepest sigma^2 window ("
         << t_lo << ", 0]; need at least 16";
      throw RegionNotCovered(os.str());
    }
  }

  MoserLadderReport rep;
  rep.schedule = schedule;
  rep.gamma = gamma;
  rep.levels.reserve(static_cast<std::size_t>(depth) + 1);
  for (int i = 0; i <= depth; ++i) {
    MoserLevel lev;
    lev.i = i;
    lev.sigma = schedule.sigma(i);
    const double gi = std::pow(gamma, -i);  // gamma^{-i}
    lev.p = 2.0 / gi;
    const ParabolicCylinder region = schedule.parabolic(i, 1.0);
    const RegionMask mask = make_region_mask(grid, region.space);
    const WindowSlices win =
        select_window(f.times, region.t_lo(), region.t_hi());
    double wt_total = 0;
    for (double w : win.w_t) wt_total += w;
    lev.weight = mask.total_weight() * wt_total;
    const PowerAccum acc = accumulate_power(f, mask, win, lev.p);
    // raw = (integral f^p)^(gamma^-i) = M^2 * exp(gamma^-i * log_sum);
    // normalized divides the integral by the discrete measure first.
    lev.raw = acc.max_abs * acc.max_abs * std::exp(gi * acc.log_sum);
    lev.normalized = acc.max_abs * acc.max_abs *
                     std::exp(gi * (acc.log_sum - std::log(lev.weight)));
    lev.ratio_prev =
        rep.levels.empty() ? 1.0 : lev.normalized / rep.levels.back().normalized;
    rep.levels.push_back(lev);
  }
  rep.sup_sq_estimate = rep.levels.back().normalized;
  const double direct =
      lp_norm(f, parabolic_cylinder(2.0, 3.0, 1.0), INFINITY);
  rep.direct_sup_sq = direct * direct;
  rep.rel_gap = std::abs(rep.sup_sq_estimate - rep.direct_sup_sq) /
                rep.direct_sup_sq;
  return rep;
}

}  // namespace axns
