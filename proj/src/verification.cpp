/// @file verification.cpp
/// @brief Measurable renderings of the analytical claims.

#include "axns/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <sstream>
#include <utility>

#include "axns/errors.hpp"
#include "axns/manufactured.hpp"

namespace axns {

namespace {

// Full-domain cylindrical trapezoid weights (2*pi*r in the radial factor).
struct FullQuad {
  std::vector<double> wr, wz;
};

FullQuad full_quad(const AnnularGrid& g) {
  FullQuad q;
  q.wr.resize(g.n_r);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    double w = g.dr;
    if (i == 0 || i + 1 == g.n_r) w *= 0.5;
    q.wr[i] = 2.0 * M_PI * g.r(i) * w;
  }
  q.wz.assign(g.n_z, g.dz);
  if (!g.periodic_z) {
    q.wz.front() *= 0.5;
    q.wz.back() *= 0.5;
  }
  return q;
}

double full_lp(const ScalarField& f, const FullQuad& q, double p) {
  const AnnularGrid& g = *f.grid;
  double s = 0;
  for (std::size_t i = 0; i < g.n_r; ++i)
    for (std::size_t j = 0; j < g.n_z; ++j)
      s += q.wr[i] * q.wz[j] * std::pow(std::abs(f(i, j)), p);
  return std::pow(s, 1.0 / p);
}

// Weighted L2 accumulation over a mask (linear space; O(1) magnitudes).
double masked_sq_sum(const ScalarField& f, const RegionMask& m) {
  double s = 0;
  for (std::size_t i = m.i_lo; i <= m.i_hi; ++i)
    for (std::size_t j = m.j_lo; j <= m.j_hi; ++j) {
      const double a = f(i, j);
      s += m.weight(i, j) * a * a;
    }
  return s;
}

double masked_l2(const ScalarField& f, const RegionMask& m) {
  return std::sqrt(masked_sq_sum(f, m));
}

// sup over the mask of |f| * radial_weight[i].
double masked_weighted_sup(const ScalarField& f, const RegionMask& m,
                           const std::vector<double>& radial_weight) {
  double v = 0;
  for (std::size_t i = m.i_lo; i <= m.i_hi; ++i)
    for (std::size_t j = m.j_lo; j <= m.j_hi; ++j)
      v = std::max(v, std::abs(f(i, j)) * radial_weight[i]);
  return v;
}

ScalarField magnitude2(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t m = 0; m < out.size(); ++m)
    out.v[m] = std::hypot(a.v[m], b.v[m]);
  return out;
}

ScalarField magnitude3(const ScalarField& a, const ScalarField& b,
                       const ScalarField& c) {
  ScalarField out(a.grid);
  for (std::size_t m = 0; m < out.size(); ++m)
    out.v[m] = std::sqrt(a.v[m] * a.v[m] + b.v[m] * b.v[m] +
                         c.v[m] * c.v[m]);
  return out;
}

// omega_theta = r * omega, then velocity through the streamfunction.
struct Recovered {
  ScalarField omega_theta;
  AxisymVectorField v;
};

Recovered recover_slice(const GridPtr& grid,
                        const StreamfunctionSolver& solver,
                        const ScalarField& gamma, const ScalarField& omega) {
  Recovered rec;
  rec.omega_theta = ScalarField(grid);
  const AnnularGrid& g = *grid;
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double r = g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j)
      rec.omega_theta(i, j) = r * omega(i, j);
  }
  StreamfunctionSolver::Result res = solver.solve(rec.omega_theta);
  rec.v = velocity_from_psi(res.psi, gamma);
  return rec;
}

ZBoundary z_boundary_of(const Trajectory& traj) {
  return traj.boundary == BoundaryMode::kPeriodicZ ? ZBoundary::kPeriodic
                                                   : ZBoundary::kDirichlet;
}

std::vector<double> analysis_times(const Trajectory& traj) {
  std::vector<double> t(traj.slices());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = traj.analysis_time(k);
  return t;
}

double safe_ratio(double measured, double proxy) {
  if (proxy > 0.0) return measured / proxy;
  if (measured == 0.0) return 0.0;
  throw DiscretizationFault(
      "weighted vorticity is nonzero while every proxy ingredient vanishes");
}

bool proxies_monotone(const std::vector<BoundReport>& reports) {
  std::vector<std::pair<double, double>> by_r;
  by_r.reserve(reports.size());
  for (const BoundReport& b : reports) by_r.emplace_back(b.R, b.proxy);
  std::sort(by_r.begin(), by_r.end());
  for (std::size_t m = 1; m < by_r.size(); ++m)
    if (by_r[m].second < by_r[m - 1].second * (1.0 - 1e-12)) return false;
  return true;
}

std::string resolution_of(const AnnularGrid& g) {
  std::ostringstream os;
  os << g.n_r << "x" << g.n_z;
  return os.str();
}

}  // namespace

double default_swirl_tolerance(const AnnularGrid& grid) {
  const double h = std::max(grid.dr, grid.dz);
  return 1e-8 + 12.0 * h * h;
}

SwirlCheckReport check_swirl_bounds(const Trajectory& traj, double eps_tol) {
  if (traj.slices() < 2)
    throw RegionNotCovered("monotonicity needs at least two slices");
  const AnnularGrid& g = *traj.grid;
  const FullQuad quad = full_quad(g);

  SwirlCheckReport rep;
  rep.eps_tol = eps_tol;
  rep.s0 = max_abs(traj.gamma[0]);
  rep.max_sup_increase = -INFINITY;
  rep.max_l2_increase = -INFINITY;
  rep.max_l4_increase = -INFINITY;
  rep.max_pointwise_excess = -INFINITY;

  double prev_sup = 0, prev_l2 = 0, prev_l4 = 0;
  for (std::size_t k = 0; k < traj.slices(); ++k) {
    const ScalarField& ga = traj.gamma[k];
    const double sup = max_abs(ga);
    const double l2 = full_lp(ga, quad, 2.0);
    const double l4 = full_lp(ga, quad, 4.0);
    if (k > 0) {
      rep.max_sup_increase = std::max(rep.max_sup_increase, sup - prev_sup);
      rep.max_l2_increase = std::max(rep.max_l2_increase, l2 - prev_l2);
      rep.max_l4_increase = std::max(rep.max_l4_increase, l4 - prev_l4);
    }
    prev_sup = sup;
    prev_l2 = l2;
    prev_l4 = l4;
    for (std::size_t i = 0; i < g.n_r; ++i)
      for (std::size_t j = 0; j < g.n_z; ++j)
        rep.max_pointwise_excess =
            std::max(rep.max_pointwise_excess,
                     (std::abs(ga(i, j)) - rep.s0) / g.r(i));
  }
  rep.sup_monotone = rep.max_sup_increase <= eps_tol;
  rep.lp_monotone =
      rep.max_l2_increase <= eps_tol && rep.max_l4_increase <= eps_tol;
  rep.pointwise_envelope = rep.max_pointwise_excess <= eps_tol;
  rep.pass = rep.sup_monotone && rep.lp_monotone && rep.pointwise_envelope;
  return rep;
}

double b1_proxy(const ProxyParts& p) {
  const double bracket = p.k_b * p.k_b + p.R * p.s0;
  return std::pow(bracket, 2.5) *
         (p.l2_omega_theta + std::sqrt(p.R) * p.s0);
}

double b2_proxy(const ProxyParts& p) {
  const double kb4 = p.k_b * p.k_b * p.k_b * p.k_b;
  const double bracket =
      (kb4 + p.R * p.R * p.s0 + p.R * p.R) * p.l2_omega_theta *
          p.l2_omega_theta +
      p.R * kb4 + p.l2_velocity * p.l2_velocity + p.R * p.R * p.R;
  return std::pow(bracket, 2.5) * (p.l2_omega_r + p.l2_omega_z);
}

namespace {

// Shared per-radius bookkeeping for the streaming theorem checks.
struct RadiusAccum {
  double R = 0;
  WindowSlices win;
  RegionMask m23;        // sup region C_{2,3,R}
  RegionMask m_proxy;    // proxy region (C_{1,4,R} or clipped C_{1/10,10,R})
  double clip_frac = 0;
  std::vector<double> r_weight;  // r^5 or r^10 per radial index
  double sup_meas = 0;
  double sup_aux = 0;
  double k_b = 0;
  double st_omega_theta = 0;  // space-time sums of squares
  double st_velocity = 0;
  double st_omega_r = 0;
  double st_omega_z = 0;

  bool covers(std::size_t k) const { return k >= win.k_lo && k <= win.k_hi; }
  double wt(std::size_t k) const { return win.w_t[k - win.k_lo]; }
};

std::vector<RadiusAccum> init_radii(const Trajectory& traj,
                                    const std::vector<double>& radii,
                                    const std::vector<double>& times,
                                    double proxy_a, double proxy_b,
                                    bool clip_proxy, double r_power) {
  if (radii.empty())
    throw ValidationError("at least one radius is required",
                          "verification.radii");
  const GridPtr& grid = traj.grid;
  std::vector<RadiusAccum> acc;
  acc.reserve(radii.size());
  for (double R : radii) {
    if (!(R > 0.0))
      throw ValidationError("radii must be positive", "verification.radii");
    RadiusAccum a;
    a.R = R;
    a.win = select_window(times, -R * R, 0.0);
    a.m23 = make_region_mask(grid, hollow_cylinder(2.0, 3.0, R));
    const HollowCylinder proxy_cyl = hollow_cylinder(proxy_a, proxy_b, R);
    a.m_proxy = make_region_mask(grid, proxy_cyl, clip_proxy);
    a.clip_frac = clip_proxy ? clip_fraction(*grid, proxy_cyl) : 0.0;
    a.r_weight.resize(grid->n_r);
    for (std::size_t i = 0; i < grid->n_r; ++i)
      a.r_weight[i] = std::pow(grid->r(i), r_power);
    acc.push_back(std::move(a));
  }
  return acc;
}

}  // namespace

TheoremCheck check_theorem_i(const Trajectory& traj,
                             const std::vector<double>& radii,
                             double ceiling) {
  const GridPtr& grid = traj.grid;
  const std::vector<double> times = analysis_times(traj);
  std::vector<RadiusAccum> acc =
      init_radii(traj, radii, times, 1.0, 4.0, false, 5.0);
  const StreamfunctionSolver solver(grid, z_boundary_of(traj));
  const double s0 = max_abs(traj.gamma[0]);

  for (std::size_t k = 0; k < traj.slices(); ++k) {
    bool used = false;
    for (const RadiusAccum& a : acc) used = used || a.covers(k);
    if (!used) continue;
    const Recovered rec =
        recover_slice(grid, solver, traj.gamma[k], traj.omega[k]);
    const ScalarField b_mag = magnitude2(rec.v.v_r, rec.v.v_z);
    for (RadiusAccum& a : acc) {
      if (!a.covers(k)) continue;
      a.sup_meas = std::max(
          a.sup_meas, masked_weighted_sup(rec.omega_theta, a.m23, a.r_weight));
      a.k_b = std::max(a.k_b, masked_l2(b_mag, a.m_proxy));
      a.st_omega_theta +=
          a.wt(k) * masked_sq_sum(rec.omega_theta, a.m_proxy);
    }
  }

  TheoremCheck check;
  check.resolution = resolution_of(*grid);
  for (const RadiusAccum& a : acc) {
    BoundReport b;
    b.claim = "peak-vorticity-r5";
    b.R = a.R;
    b.measured = a.sup_meas;
    b.parts.R = a.R;
    b.parts.s0 = s0;
    b.parts.k_b = a.k_b;
    b.parts.l2_omega_theta = std::sqrt(a.st_omega_theta);
    b.proxy = b1_proxy(b.parts);
    b.ratio = safe_ratio(b.measured, b.proxy);
    b.ceiling = ceiling;
    b.pass = std::isfinite(b.ratio) && b.ratio <= ceiling;
    check.reports.push_back(std::move(b));
  }
  check.proxy_monotone = proxies_monotone(check.reports);
  check.pass = check.proxy_monotone;
  for (const BoundReport& b : check.reports) check.pass = check.pass && b.pass;
  return check;
}

TheoremCheck check_theorem_ii(const Trajectory& traj,
                              const std::vector<double>& radii,
                              double ceiling) {
  const GridPtr& grid = traj.grid;
  const std::vector<double> times = analysis_times(traj);
  std::vector<RadiusAccum> acc =
      init_radii(traj, radii, times, 0.1, 10.0, true, 10.0);
  const StreamfunctionSolver solver(grid, z_boundary_of(traj));
  const double s0 = max_abs(traj.gamma[0]);

  for (std::size_t k = 0; k < traj.slices(); ++k) {
    bool used = false;
    for (const RadiusAccum& a : acc) used = used || a.covers(k);
    if (!used) continue;
    const Recovered rec =
        recover_slice(grid, solver, traj.gamma[k], traj.omega[k]);
    const ScalarField b_mag = magnitude2(rec.v.v_r, rec.v.v_z);
    const ScalarField v_mag =
        magnitude3(rec.v.v_r, rec.v.v_theta, rec.v.v_z);
    const VorticityField w = curl(rec.v, BoundaryRule::kOneSided);
    ScalarField merid_sum(grid), merid_max(grid);
    for (std::size_t m = 0; m < merid_sum.size(); ++m) {
      const double ar = std::abs(w.omega_r.v[m]);
      const double az = std::abs(w.omega_z.v[m]);
      merid_sum.v[m] = ar + az;
      merid_max.v[m] = std::max(ar, az);
    }
    for (RadiusAccum& a : acc) {
      if (!a.covers(k)) continue;
      a.sup_meas = std::max(
          a.sup_meas, masked_weighted_sup(merid_sum, a.m23, a.r_weight));
      a.sup_aux = std::max(
          a.sup_aux, masked_weighted_sup(merid_max, a.m23, a.r_weight));
      a.k_b = std::max(a.k_b, masked_l2(b_mag, a.m_proxy));
      const double wt = a.wt(k);
      a.st_omega_theta += wt * masked_sq_sum(rec.omega_theta, a.m_proxy);
      a.st_velocity += wt * masked_sq_sum(v_mag, a.m_proxy);
      a.st_omega_r += wt * masked_sq_sum(w.omega_r, a.m_proxy);
      a.st_omega_z += wt * masked_sq_sum(w.omega_z, a.m_proxy);
    }
  }

  TheoremCheck check;
  check.resolution = resolution_of(*grid);
  for (const RadiusAccum& a : acc) {
    BoundReport b;
    b.claim = "meridional-vorticity-r10";
    b.R = a.R;
    b.measured = a.sup_meas;
    b.aux_h_sup = a.sup_aux;
    b.parts.R = a.R;
    b.parts.s0 = s0;
    b.parts.k_b = a.k_b;
    b.parts.l2_omega_theta = std::sqrt(a.st_omega_theta);
    b.parts.l2_velocity = std::sqrt(a.st_velocity);
    b.parts.l2_omega_r = std::sqrt(a.st_omega_r);
    b.parts.l2_omega_z = std::sqrt(a.st_omega_z);
    b.parts.clip_frac = a.clip_frac;
    b.proxy = b2_proxy(b.parts);
    b.ratio = safe_ratio(b.measured, b.proxy);
    b.ceiling = ceiling;
    b.pass = std::isfinite(b.ratio) && b.ratio <= ceiling;
    check.reports.push_back(std::move(b));
  }
  check.proxy_monotone = proxies_monotone(check.reports);
  check.pass = check.proxy_monotone;
  for (const BoundReport& b : check.reports) check.pass = check.pass && b.pass;
  return check;
}

bool refinement_stable(const TheoremCheck& coarse, const TheoremCheck& fine,
                       double factor) {
  if (coarse.reports.size() != fine.reports.size()) return false;
  for (std::size_t m = 0; m < coarse.reports.size(); ++m) {
    const double rc = coarse.reports[m].ratio;
    const double rf = fine.reports[m].ratio;
    const bool zc = rc < 1e-14, zf = rf < 1e-14;
    if (zc != zf) return false;
    if (zc) continue;
    if (std::max(rc / rf, rf / rc) > factor) return false;
  }
  return true;
}

AnalyticFlow manufactured_analytic_flow() {
  AnalyticFlow f;
  f.v_r = ManufacturedFlow::v_r;
  f.v_theta = ManufacturedFlow::v_theta;
  f.v_z = ManufacturedFlow::v_z;
  f.w_r = ManufacturedFlow::omega_r;
  f.w_theta = ManufacturedFlow::omega_theta;
  f.w_z = ManufacturedFlow::omega_z;
  return f;
}

namespace {

// Quadrature side for check_scaling: magnitudes of the (possibly rescaled)
// flow sampled on a grid spanning exactly the given cylinder, over the
// trailing window of the given duration.
struct ScalingSide {
  GridPtr grid;
  std::vector<double> times;
  std::vector<ScalarField> v_mag, b_mag, w_mag, swirl;  // swirl = r*v_theta
  std::vector<const ScalarField*> pv, pb, pw;
  SampleSeries series(const std::vector<ScalarField>& store) const {
    SampleSeries s;
    s.times = times;
    for (const ScalarField& f : store) s.fields.push_back(&f);
    return s;
  }
};

ScalingSide sample_side(const AnalyticFlow& flow, double scale,
                        const HollowCylinder& cyl, std::size_t n_r,
                        std::size_t n_z, std::size_t n_t) {
  // scale = 1 samples the flow as-is; scale = k samples the k-rescaled flow
  // (velocity k*v(k., k^2 .), vorticity k^2*w(k., k^2 .)).
  ScalingSide side;
  side.grid = make_grid(cyl.r_lo(), cyl.r_hi(), -cyl.z_half(), cyl.z_half(),
                        n_r, n_z, false);
  const double T = cyl.R * cyl.R;
  side.times.resize(n_t + 1);
  for (std::size_t m = 0; m <= n_t; ++m)
    side.times[m] =
        -T + static_cast<double>(m) * (T / static_cast<double>(n_t));
  const AnnularGrid& g = *side.grid;
  for (double t : side.times) {
    ScalarField vm(side.grid), bm(side.grid), wm(side.grid), sw(side.grid);
    for (std::size_t i = 0; i < g.n_r; ++i) {
      const double r = g.r(i);
      for (std::size_t j = 0; j < g.n_z; ++j) {
        const double z = g.z(j);
        const double rr = scale * r, zz = scale * z,
                     tt = scale * scale * t;
        const double vr = scale * flow.v_r(rr, zz, tt);
        const double vt = scale * flow.v_theta(rr, zz, tt);
        const double vz = scale * flow.v_z(rr, zz, tt);
        const double s2 = scale * scale;
        const double wr = s2 * flow.w_r(rr, zz, tt);
        const double wt = s2 * flow.w_theta(rr, zz, tt);
        const double wz = s2 * flow.w_z(rr, zz, tt);
        vm(i, j) = std::sqrt(vr * vr + vt * vt + vz * vz);
        bm(i, j) = std::hypot(vr, vz);
        wm(i, j) = std::sqrt(wr * wr + wt * wt + wz * wz);
        sw(i, j) = r * vt;
      }
    }
    side.v_mag.push_back(std::move(vm));
    side.b_mag.push_back(std::move(bm));
    side.w_mag.push_back(std::move(wm));
    side.swirl.push_back(std::move(sw));
  }
  return side;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

ScalingCheck check_scaling(const AnalyticFlow& flow, double k,
                           const HollowCylinder& D, std::size_t n_r,
                           std::size_t n_z, std::size_t n_t) {
  if (!(k > 0.0) || k > 1.0)
    throw ValidationError("scale factor must lie in (0, 1]", "scaling.k");
  if (n_t < 2)
    throw ValidationError("need at least two time intervals", "scaling.n_t");

  // Rescaled side: grid on D itself. Unscaled side: grid on k*D with the
  // shorter window; identical index shapes, nodes mapped by 1/k.
  const ScalingSide tilde = sample_side(flow, k, D, n_r, n_z, n_t);
  const HollowCylinder kD = hollow_cylinder(D.A, D.B, k * D.R);
  const ScalingSide base = sample_side(flow, 1.0, kD, n_r, n_z, n_t);

  const ParabolicCylinder pd = parabolic_cylinder(D.A, D.B, D.R);
  const ParabolicCylinder pkd = parabolic_cylinder(D.A, D.B, k * D.R);

  ScalingCheck out;
  out.k = k;

  const double l2v_t = lp_norm(tilde.series(tilde.v_mag), pd, 2.0);
  const double l2v_b = lp_norm(base.series(base.v_mag), pkd, 2.0);
  out.rel_l2_velocity = rel_diff(l2v_t, std::pow(k, -1.5) * l2v_b);

  const double kb_t = linf_l2(tilde.series(tilde.b_mag), D);
  const double kb_b = linf_l2(base.series(base.b_mag), kD);
  out.rel_kb = rel_diff(kb_t, std::pow(k, -0.5) * kb_b);

  const double l2w_t = lp_norm(tilde.series(tilde.w_mag), pd, 2.0);
  const double l2w_b = lp_norm(base.series(base.w_mag), pkd, 2.0);
  out.rel_l2_vorticity = rel_diff(l2w_t, std::pow(k, -0.5) * l2w_b);

  double node_err = 0;
  for (std::size_t i = 0; i < n_r; ++i)
    node_err = std::max(node_err,
                        std::abs(tilde.grid->r(i) - base.grid->r(i) / k));
  for (std::size_t j = 0; j < n_z; ++j)
    node_err = std::max(node_err,
                        std::abs(tilde.grid->z(j) - base.grid->z(j) / k));
  out.max_node_map_error = node_err;

  double sup_t = 0, sup_b = 0;
  for (const ScalarField& f : tilde.swirl) sup_t = std::max(sup_t, max_abs(f));
  for (const ScalarField& f : base.swirl) sup_b = std::max(sup_b, max_abs(f));
  out.rel_sup_swirl = rel_diff(sup_t, sup_b);
  return out;
}

Trajectory scale_trajectory(const Trajectory& traj, double k) {
  if (!(k > 0.0))
    throw ValidationError("scale factor must be positive", "scaling.k");
  const AnnularGrid& g = *traj.grid;
  Trajectory out;
  out.grid = make_grid(g.r_min / k, g.r_max / k, g.z_min / k, g.z_max / k,
                       g.n_r, g.n_z, g.periodic_z);
  out.boundary = traj.boundary;
  out.t_end = traj.t_end / (k * k);
  out.cadence = traj.cadence / (k * k);
  out.s0 = traj.s0;
  out.error = traj.error;
  const double k3 = k * k * k;
  for (std::size_t m = 0; m < traj.slices(); ++m) {
    out.times.push_back(traj.times[m] / (k * k));
    ScalarField ga(out.grid), om(out.grid);
    ga.v = traj.gamma[m].v;
    om.v = traj.omega[m].v;
    for (double& x : om.v) x *= k3;
    out.gamma.push_back(std::move(ga));
    out.omega.push_back(std::move(om));
  }
  return out;
}

ResidualReport check_rescaled_equations(const Trajectory& traj, double k) {
  const Trajectory scaled = scale_trajectory(traj, k);
  const GridPtr& grid = scaled.grid;
  const AnnularGrid& g = *grid;
  const ParabolicCylinder region = parabolic_cylinder(1.0, 4.0, 1.0);
  const RegionMask mask = make_region_mask(grid, region.space);
  const std::vector<double> times = analysis_times(scaled);
  const WindowSlices win = select_window(times, region.t_lo(), region.t_hi());
  const StreamfunctionSolver solver(grid, z_boundary_of(scaled));
  const double dt = scaled.cadence;

  ResidualReport rep;
  rep.k = k;
  double sum_g = 0, sum_w = 0;
  const std::size_t k_first = std::max<std::size_t>(win.k_lo, 1);
  const std::size_t k_last = std::min(win.k_hi, scaled.slices() - 2);
  for (std::size_t s = k_first; s <= k_last; ++s) {
    SwirlState st;
    st.t = times[s];
    st.gamma = scaled.gamma[s];
    st.omega = scaled.omega[s];
    Recovered rec = recover_slice(grid, solver, st.gamma, st.omega);
    st.omega_theta = std::move(rec.omega_theta);
    st.v_r = std::move(rec.v.v_r);
    st.v_theta = std::move(rec.v.v_theta);
    st.v_z = std::move(rec.v.v_z);
    st.caches_fresh = true;
    const ScalarField rhs_g = reduced_gamma_rhs(st);
    const ScalarField rhs_w = reduced_omega_rhs(st);
    const ScalarField& gp = scaled.gamma[s + 1];
    const ScalarField& gm = scaled.gamma[s - 1];
    const ScalarField& wp = scaled.omega[s + 1];
    const ScalarField& wm = scaled.omega[s - 1];
    for (std::size_t i = mask.i_lo; i <= mask.i_hi; ++i)
      for (std::size_t j = mask.j_lo; j <= mask.j_hi; ++j) {
        if (!g.interior(i, j)) continue;
        const double w = mask.weight(i, j) * dt;
        const double res_g =
            (gp(i, j) - gm(i, j)) / (2.0 * dt) - rhs_g(i, j);
        const double res_w =
            (wp(i, j) - wm(i, j)) / (2.0 * dt) - rhs_w(i, j);
        sum_g += w * res_g * res_g;
        sum_w += w * res_w * res_w;
      }
    ++rep.slices_used;
  }
  if (rep.slices_used == 0)
    throw RegionNotCovered(
        "no interior slices with both neighbors inside the window");
  rep.l2_gamma_residual = std::sqrt(sum_g);
  rep.l2_omega_residual = std::sqrt(sum_w);
  return rep;
}

namespace {

struct GradEntries {
  ScalarField dr_vr, dr_vt, dr_vz, dz_vr, dz_vt, dz_vz;
};

GradEntries grad_entries(const AxisymVectorField& v) {
  GradEntries e;
  e.dr_vr = d_r(v.v_r, BoundaryRule::kOneSided);
  e.dr_vt = d_r(v.v_theta, BoundaryRule::kOneSided);
  e.dr_vz = d_r(v.v_z, BoundaryRule::kOneSided);
  e.dz_vr = d_z(v.v_r, BoundaryRule::kOneSided);
  e.dz_vt = d_z(v.v_theta, BoundaryRule::kOneSided);
  e.dz_vz = d_z(v.v_z, BoundaryRule::kOneSided);
  return e;
}

double ratio_of(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  if (lhs == 0.0) return 0.0;
  throw DiscretizationFault(
      "denominator norms vanish while the gradient norm does not");
}

}  // namespace

double helmholtz_ratio(const AxisymVectorField& v, double q) {
  if (!(q > 1.0))
    throw ValidationError("ratio exponent must exceed 1", "helmholtz.q");
  require_same_grid(v.v_r, v.v_theta);
  require_same_grid(v.v_r, v.v_z);
  const GridPtr& grid = v.v_r.grid;
  const AnnularGrid& g = *grid;
  const GradEntries e = grad_entries(v);

  ScalarField grad_mag(grid);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      const double tr = v.v_theta(i, j) * inv_r;  // angular-row entries
      const double rr = v.v_r(i, j) * inv_r;
      grad_mag(i, j) = std::sqrt(
          e.dr_vr(i, j) * e.dr_vr(i, j) + e.dr_vt(i, j) * e.dr_vt(i, j) +
          e.dr_vz(i, j) * e.dr_vz(i, j) + e.dz_vr(i, j) * e.dz_vr(i, j) +
          e.dz_vt(i, j) * e.dz_vt(i, j) + e.dz_vz(i, j) * e.dz_vz(i, j) +
          tr * tr + rr * rr);
    }
  }
  const HollowCylinder inner = hollow_cylinder(2.0, 3.0, 1.0);
  const HollowCylinder outer = hollow_cylinder(1.0, 4.0, 1.0);
  const double lhs = spatial_lp_norm(grad_mag, inner, q);

  const VorticityField w = curl(v, BoundaryRule::kOneSided);
  const ScalarField curl_mag = magnitude3(w.omega_r, w.omega_theta, w.omega_z);
  const ScalarField div_v = divergence(v, BoundaryRule::kOneSided);
  const ScalarField v_mag = magnitude3(v.v_r, v.v_theta, v.v_z);
  const double rhs = spatial_lp_norm(curl_mag, outer, q) +
                     spatial_lp_norm(div_v, outer, q) +
                     spatial_lp_norm(v_mag, outer, q);
  return ratio_of(lhs, rhs);
}

double axisym_gradient_ratio(const AxisymVectorField& v, double q) {
  if (!(q > 1.0))
    throw ValidationError("ratio exponent must exceed 1", "axisym.q");
  require_same_grid(v.v_r, v.v_theta);
  require_same_grid(v.v_r, v.v_z);
  const GridPtr& grid = v.v_r.grid;
  const AnnularGrid& g = *grid;
  const GradEntries e = grad_entries(v);

  // Divergence-free precondition, relative to the gradient scale.
  {
    const ScalarField div_v = divergence(v, BoundaryRule::kOneSided);
    double div_sup = 0, grad_sup = 0;
    for (std::size_t m = 0; m < div_v.size(); ++m) {
      div_sup = std::max(div_sup, std::abs(div_v.v[m]));
      grad_sup = std::max({grad_sup, std::abs(e.dr_vr.v[m]),
                           std::abs(e.dr_vz.v[m]), std::abs(e.dz_vr.v[m]),
                           std::abs(e.dz_vz.v[m])});
    }
    if (div_sup > 1e-12 && div_sup > 0.05 * grad_sup)
      throw DiscretizationFault(
          "input field is not discretely divergence-free; build it from a "
          "streamfunction");
  }

  ScalarField grad_vr(grid), grad_vz(grid), vr_over_r(grid);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double inv_r = 1.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      grad_vr(i, j) = std::hypot(e.dr_vr(i, j), e.dz_vr(i, j));
      grad_vz(i, j) = std::hypot(e.dr_vz(i, j), e.dz_vz(i, j));
      vr_over_r(i, j) = v.v_r(i, j) * inv_r;
    }
  }
  const HollowCylinder inner = hollow_cylinder(2.0, 3.0, 1.0);
  const HollowCylinder outer = hollow_cylinder(1.0, 4.0, 1.0);
  const double lhs = spatial_lp_norm(grad_vr, inner, q) +
                     spatial_lp_norm(vr_over_r, inner, q) +
                     spatial_lp_norm(grad_vz, inner, q);

  const VorticityField w = curl(v, BoundaryRule::kOneSided);
  const ScalarField v_mag = magnitude3(v.v_r, v.v_theta, v.v_z);
  const double rhs = spatial_lp_norm(w.omega_theta, outer, q) +
                     spatial_lp_norm(v_mag, outer, q);
  return ratio_of(lhs, rhs);
}

double v_matrix_norm(const AxisymVectorField& v,
                     const ParabolicCylinder& region, double q) {
  if (!(q >= 1.0))
    throw ValidationError("norm exponent must be >= 1", "vmatrix.q");
  const GradientMatrix m = gradient_matrix(v, BoundaryRule::kOneSided);
  ScalarField vmax(v.v_r.grid);
  for (std::size_t idx = 0; idx < vmax.size(); ++idx)
    vmax.v[idx] = std::max({std::abs(m.rr.v[idx]), std::abs(m.rz.v[idx]),
                            std::abs(m.zr.v[idx]), std::abs(m.zz.v[idx])});
  return spatial_lp_norm(vmax, region.space, q) *
         std::pow(region.duration(), 1.0 / q);
}

TrigField TrigField::random(const AnnularGrid& g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto u01 = [&gen]() {
    return static_cast<double>(gen() >> 11) * 0x1p-53;
  };
  TrigField f;
  f.r0 = g.r_min;
  f.inv_lr = 1.0 / (g.r_max - g.r_min);
  f.z0 = g.z_min;
  f.inv_lz = 1.0 / (g.z_max - g.z_min);
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      const double decay =
          static_cast<double>((m + 1) * (m + 1) + (n + 1) * (n + 1));
      f.c[m][n] = (2.0 * u01() - 1.0) / decay;
    }
  for (int m = 0; m < 3; ++m) f.a[m] = 2.0 * M_PI * u01();
  for (int n = 0; n < 3; ++n) f.b[n] = 2.0 * M_PI * u01();
  return f;
}

double TrigField::value(double r, double z) const {
  const double rho = (r - r0) * inv_lr, zeta = (z - z0) * inv_lz;
  double s = 0;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      s += c[m][n] * std::sin((m + 1) * M_PI * rho + a[m]) *
           std::sin((n + 1) * M_PI * zeta + b[n]);
  return s;
}

double TrigField::d_r(double r, double z) const {
  const double rho = (r - r0) * inv_lr, zeta = (z - z0) * inv_lz;
  double s = 0;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      s += c[m][n] * (m + 1) * M_PI * inv_lr *
           std::cos((m + 1) * M_PI * rho + a[m]) *
           std::sin((n + 1) * M_PI * zeta + b[n]);
  return s;
}

double TrigField::d_z(double r, double z) const {
  const double rho = (r - r0) * inv_lr, zeta = (z - z0) * inv_lz;
  double s = 0;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      s += c[m][n] * (n + 1) * M_PI * inv_lz *
           std::sin((m + 1) * M_PI * rho + a[m]) *
           std::cos((n + 1) * M_PI * zeta + b[n]);
  return s;
}

namespace {

AxisymVectorField scaled_copy(const AxisymVectorField& v, double lambda) {
  AxisymVectorField out;
  out.v_r = v.v_r;
  out.v_theta = v.v_theta;
  out.v_z = v.v_z;
  for (double& x : out.v_r.v) x *= lambda;
  for (double& x : out.v_theta.v) x *= lambda;
  for (double& x : out.v_z.v) x *= lambda;
  return out;
}

}  // namespace

FieldFamilyResult helmholtz_family(const GridPtr& grid, double q,
                                   int family_size, std::uint64_t seed) {
  if (family_size < 1)
    throw ValidationError("family size must be at least 1", "family.size");
  FieldFamilyResult res;
  for (int f = 0; f < family_size; ++f) {
    const TrigField tr =
        TrigField::random(*grid, seed + 1000003ULL * (3 * f));
    const TrigField tt =
        TrigField::random(*grid, seed + 1000003ULL * (3 * f + 1));
    const TrigField tz =
        TrigField::random(*grid, seed + 1000003ULL * (3 * f + 2));
    AxisymVectorField v;
    v.v_r = sample_field(grid, [&](double r, double z) {
      return tr.value(r, z);
    });
    v.v_theta = sample_field(grid, [&](double r, double z) {
      return tt.value(r, z);
    });
    v.v_z = sample_field(grid, [&](double r, double z) {
      return tz.value(r, z);
    });
    const double ratio = helmholtz_ratio(v, q);
    res.ratios.push_back(ratio);
    if (f == 0 && ratio > 0.0) {
      const double r3 = helmholtz_ratio(scaled_copy(v, 3.0), q);
      res.scale_drift = std::abs(r3 - ratio) / ratio;
    }
  }
  res.max_ratio = *std::max_element(res.ratios.begin(), res.ratios.end());
  return res;
}

FieldFamilyResult axisym_family(const GridPtr& grid, double q,
                                int family_size, std::uint64_t seed) {
  if (family_size < 1)
    throw ValidationError("family size must be at least 1", "family.size");
  FieldFamilyResult res;
  for (int f = 0; f < family_size; ++f) {
    const TrigField psi =
        TrigField::random(*grid, seed + 1000003ULL * f);
    AxisymVectorField v;
    v.v_r = sample_field(grid, [&](double r, double z) {
      return -psi.d_z(r, z) / r;
    });
    v.v_z = sample_field(grid, [&](double r, double z) {
      return psi.d_r(r, z) / r;
    });
    v.v_theta = ScalarField(grid);
    const double ratio = axisym_gradient_ratio(v, q);
    res.ratios.push_back(ratio);
    if (f == 0 && ratio > 0.0) {
      const double r3 = axisym_gradient_ratio(scaled_copy(v, 3.0), q);
      res.scale_drift = std::abs(r3 - ratio) / ratio;
    }
  }
  res.max_ratio = *std::max_element(res.ratios.begin(), res.ratios.end());
  return res;
}

}  // namespace axns
