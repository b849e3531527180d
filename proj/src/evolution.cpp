/// @file evolution.cpp
/// @brief SSP-RK3 integrator for the reduced swirl system.

#include "axns/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

#include "axns/errors.hpp"

namespace axns {

namespace {

// Fused right-hand side for either evolved field.
//   which == 0 (gamma): f_rr - (1/r) f_r + f_zz - b.grad f
//   which == 1 (omega): f_rr + (3/r) f_r + f_zz - b.grad f
//                       + (2 v_theta / r^2) d_z v_theta
// The metric (1/r) f_r terms stay centered in every mode; `upwind` switches
// only the material advection b.grad f to first-order upwind differences.
// Fills interior nodes; boundary entries stay 0. With periodic z the stencil
// wraps, so every j counts as interior.
void reduced_rhs_into(const SwirlState& s, int which, bool upwind,
                      ScalarField& out) {
  const AnnularGrid& g = *out.grid;
  const std::size_t nr = g.n_r, nz = g.n_z;
  const double idr2 = 1.0 / (g.dr * g.dr);
  const double idz2 = 1.0 / (g.dz * g.dz);
  const double i2dr = 1.0 / (2.0 * g.dr);
  const double i2dz = 1.0 / (2.0 * g.dz);
  const double idr = 1.0 / g.dr, idz = 1.0 / g.dz;
  const ScalarField& f = (which == 0) ? s.gamma : s.omega;
  const double metric = (which == 0) ? -1.0 : 3.0;

  const std::size_t j_lo = g.periodic_z ? 0 : 1;
  const std::size_t j_hi = g.periodic_z ? nz : nz - 1;
  for (std::size_t i = 1; i + 1 < nr; ++i) {
    const double r = g.r(i);
    const double* fm = &f.v[(i - 1) * nz];
    const double* fc = &f.v[i * nz];
    const double* fp = &f.v[(i + 1) * nz];
    const double* vr = &s.v_r.v[i * nz];
    const double* vz = &s.v_z.v[i * nz];
    const double* vt = &s.v_theta.v[i * nz];
    double* o = &out.v[i * nz];
    for (std::size_t j = j_lo; j < j_hi; ++j) {
      const std::size_t jm = (j == 0) ? nz - 1 : j - 1;
      const std::size_t jp = (j + 1 == nz) ? 0 : j + 1;
      const double f_rr = (fm[j] - 2.0 * fc[j] + fp[j]) * idr2;
      const double f_zz = (fc[jm] - 2.0 * fc[j] + fc[jp]) * idz2;
      const double f_r = (fp[j] - fm[j]) * i2dr;
      double adv;
      if (upwind) {
        const double ar = vr[j] > 0 ? vr[j] * (fc[j] - fm[j]) * idr
                                    : vr[j] * (fp[j] - fc[j]) * idr;
        const double az = vz[j] > 0 ? vz[j] * (fc[j] - fc[jm]) * idz
                                    : vz[j] * (fc[jp] - fc[j]) * idz;
        adv = ar + az;
      } else {
        adv = vr[j] * f_r + vz[j] * ((fc[jp] - fc[jm]) * i2dz);
      }
      double rhs = f_rr + f_zz + metric * f_r / r - adv;
      if (which == 1) {
        const double dz_vt = (vt[jp] - vt[jm]) * i2dz;
        rhs += 2.0 * vt[j] / (r * r) * dz_vt;
      }
      o[j] = rhs;
    }
  }
}

void require_fresh(const SwirlState& s, const char* who) {
  if (!s.caches_fresh)
    throw DiscretizationFault(std::string(who) +
                              " needs a state with refreshed caches");
}

}  // namespace

ScalarField reduced_gamma_rhs(const SwirlState& s) {
  require_fresh(s, "reduced_gamma_rhs");
  ScalarField out(s.gamma.grid);
  reduced_rhs_into(s, 0, false, out);
  return out;
}

ScalarField reduced_omega_rhs(const SwirlState& s) {
  require_fresh(s, "reduced_omega_rhs");
  ScalarField out(s.omega.grid);
  reduced_rhs_into(s, 1, false, out);
  return out;
}

Evolver::Evolver(GridPtr grid, EvolutionConfig cfg)
    : grid_(std::move(grid)),
      cfg_(std::move(cfg)),
      solver_(grid_, cfg_.boundary == BoundaryMode::kPeriodicZ
                         ? ZBoundary::kPeriodic
                         : ZBoundary::kDirichlet) {
  if (cfg_.boundary == BoundaryMode::kPeriodicZ && !grid_->periodic_z)
    throw ValidationError("periodic-z evolution needs a periodic grid",
                          "evolution.boundary");
  if (cfg_.boundary == BoundaryMode::kDirichletFrozen && grid_->periodic_z)
    throw ValidationError("frozen-Dirichlet evolution needs a non-periodic "
                          "grid",
                          "evolution.boundary");
  if (!(cfg_.cfl_safety > 0.0) || cfg_.cfl_safety > 1.0)
    throw ValidationError("cfl_safety must lie in (0, 1]",
                          "evolution.cfl_safety");
  // Full-domain cylindrical quadrature: trapezoid in r and z, uniform in z
  // when periodic (all n_z nodes are distinct interior points of the circle).
  quad_r_.resize(grid_->n_r);
  for (std::size_t i = 0; i < grid_->n_r; ++i) {
    double w = grid_->dr;
    if (i == 0 || i + 1 == grid_->n_r) w *= 0.5;
    quad_r_[i] = 2.0 * M_PI * grid_->r(i) * w;
  }
  quad_z_.assign(grid_->n_z, grid_->dz);
  if (!grid_->periodic_z) {
    quad_z_.front() *= 0.5;
    quad_z_.back() *= 0.5;
  }
}

SwirlState Evolver::make_state(const ScalarField& gamma0,
                               const ScalarField& omega0, double t0) {
  if (gamma0.grid.get() != grid_.get() || omega0.grid.get() != grid_.get())
    throw ShapeMismatch("initial fields must live on the evolver's grid");
  SwirlState s;
  s.t = t0;
  s.gamma = gamma0;
  s.omega = omega0;
  bc_gamma_ = gamma0;
  bc_omega_ = omega0;
  have_bc_ = true;
  refresh(s);
  return s;
}

void Evolver::refresh(SwirlState& s) const {
  const AnnularGrid& g = *grid_;
  s.omega_theta = ScalarField(grid_);
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double r = g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j)
      s.omega_theta(i, j) = r * s.omega(i, j);
  }
  StreamfunctionSolver::Result res = solver_.solve(s.omega_theta);
  s.psi = std::move(res.psi);
  s.psi_residual = res.rel_residual;
  AxisymVectorField v = velocity_from_psi(s.psi, s.gamma);
  s.v_r = std::move(v.v_r);
  s.v_theta = std::move(v.v_theta);
  s.v_z = std::move(v.v_z);
  s.caches_fresh = true;
}

ScalarField Evolver::gamma_rhs(const SwirlState& s) const {
  require_fresh(s, "gamma_rhs");
  ScalarField out(grid_);
  reduced_rhs_into(s, 0, cfg_.upwind, out);
  if (cfg_.source_gamma) {
    const AnnularGrid& g = *grid_;
    for (std::size_t i = 1; i + 1 < g.n_r; ++i)
      for (std::size_t j = 0; j < g.n_z; ++j)
        if (g.interior(i, j))
          out(i, j) += cfg_.source_gamma(g.r(i), g.z(j), s.t);
  }
  return out;
}

ScalarField Evolver::omega_rhs(const SwirlState& s) const {
  require_fresh(s, "omega_rhs");
  ScalarField out(grid_);
  reduced_rhs_into(s, 1, cfg_.upwind, out);
  if (cfg_.source_omega) {
    const AnnularGrid& g = *grid_;
    for (std::size_t i = 1; i + 1 < g.n_r; ++i)
      for (std::size_t j = 0; j < g.n_z; ++j)
        if (g.interior(i, j))
          out(i, j) += cfg_.source_omega(g.r(i), g.z(j), s.t);
  }
  return out;
}

double Evolver::cfl_limit(const SwirlState& s) const {
  require_fresh(s, "cfl_limit");
  const AnnularGrid& g = *grid_;
  const double h = std::min(g.dr, g.dz);
  double vmax = 0.0;
  for (std::size_t i = 0; i < g.n_r; ++i) {
    // The metric first-derivative terms carry an effective radial transport
    // speed of at most 3/r, counted alongside the material velocity.
    const double mr = 3.0 / g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      vmax = std::max(vmax, std::abs(s.v_r(i, j)) + mr);
      vmax = std::max(vmax, std::abs(s.v_z(i, j)));
    }
  }
  const double diff = h * h / 4.0;
  return vmax > 0.0 ? std::min(diff, h / vmax) : diff;
}

void Evolver::impose_boundary(SwirlState& s) const {
  if (!have_bc_)
    throw DiscretizationFault("boundary values were never captured");
  const AnnularGrid& g = *grid_;
  for (std::size_t j = 0; j < g.n_z; ++j) {
    s.gamma(0, j) = bc_gamma_(0, j);
    s.omega(0, j) = bc_omega_(0, j);
    s.gamma(g.n_r - 1, j) = bc_gamma_(g.n_r - 1, j);
    s.omega(g.n_r - 1, j) = bc_omega_(g.n_r - 1, j);
  }
  if (cfg_.boundary == BoundaryMode::kDirichletFrozen) {
    for (std::size_t i = 0; i < g.n_r; ++i) {
      s.gamma(i, 0) = bc_gamma_(i, 0);
      s.omega(i, 0) = bc_omega_(i, 0);
      s.gamma(i, g.n_z - 1) = bc_gamma_(i, g.n_z - 1);
      s.omega(i, g.n_z - 1) = bc_omega_(i, g.n_z - 1);
    }
  }
}

void Evolver::step(SwirlState& s, double dt) const {
  require_fresh(s, "step");
  if (!(dt > 0.0))
    throw ValidationError("step size must be positive", "evolution.dt");
  const double limit = cfl_limit(s);
  if (dt > limit * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the stability limit " << limit;
    throw CflViolation(os.str());
  }
  const ScalarField g0 = s.gamma, w0 = s.omega;
  const double t0 = s.t;
  const std::size_t n = s.gamma.size();

  // Stage 1: u1 = u + dt L(u).
  {
    ScalarField kg = gamma_rhs(s), kw = omega_rhs(s);
    for (std::size_t m = 0; m < n; ++m) {
      s.gamma.v[m] = g0.v[m] + dt * kg.v[m];
      s.omega.v[m] = w0.v[m] + dt * kw.v[m];
    }
  }
  impose_boundary(s);
  s.t = t0 + dt;
  refresh(s);

  // Stage 2: u2 = 3/4 u + 1/4 (u1 + dt L(u1)).
  {
    ScalarField kg = gamma_rhs(s), kw = omega_rhs(s);
    for (std::size_t m = 0; m < n; ++m) {
      s.gamma.v[m] =
          0.75 * g0.v[m] + 0.25 * (s.gamma.v[m] + dt * kg.v[m]);
      s.omega.v[m] =
          0.75 * w0.v[m] + 0.25 * (s.omega.v[m] + dt * kw.v[m]);
    }
  }
  impose_boundary(s);
  s.t = t0 + 0.5 * dt;
  refresh(s);

  // Stage 3: u_new = 1/3 u + 2/3 (u2 + dt L(u2)).
  {
    ScalarField kg = gamma_rhs(s), kw = omega_rhs(s);
    const double c1 = 1.0 / 3.0, c2 = 2.0 / 3.0;
    for (std::size_t m = 0; m < n; ++m) {
      s.gamma.v[m] = c1 * g0.v[m] + c2 * (s.gamma.v[m] + dt * kg.v[m]);
      s.omega.v[m] = c1 * w0.v[m] + c2 * (s.omega.v[m] + dt * kw.v[m]);
    }
  }
  impose_boundary(s);
  s.t = t0 + dt;
  refresh(s);
  assert_finite(s.gamma, "gamma");
  assert_finite(s.omega, "omega");
}

DiagnosticsRecord Evolver::diagnostics(const SwirlState& s) const {
  require_fresh(s, "diagnostics");
  const AnnularGrid& g = *grid_;
  DiagnosticsRecord d;
  d.time = s.t;
  d.sup_abs_gamma = max_abs(s.gamma);
  d.sup_abs_omega_theta = max_abs(s.omega_theta);
  double s2 = 0, s4 = 0, ke = 0, sup_rv = 0;
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double r = g.r(i);
    for (std::size_t j = 0; j < g.n_z; ++j) {
      const double w = quad_r_[i] * quad_z_[j];
      const double ga = s.gamma(i, j);
      s2 += w * ga * ga;
      s4 += w * ga * ga * ga * ga;
      const double vr = s.v_r(i, j), vt = s.v_theta(i, j), vz = s.v_z(i, j);
      ke += w * (vr * vr + vt * vt + vz * vz);
      sup_rv = std::max(sup_rv, std::abs(r * vt));
    }
  }
  d.l2_gamma = std::sqrt(s2);
  d.l4_gamma = std::pow(s4, 0.25);
  d.kinetic_energy = ke;
  d.sup_abs_r_vtheta = sup_rv;
  return d;
}

Trajectory Evolver::run(const ScalarField& gamma0, const ScalarField& omega0) {
  if (!(cfg_.cadence > 0.0))
    throw ValidationError("cadence must be positive", "evolution.cadence");
  if (!(cfg_.t_end > 0.0))
    throw ValidationError("t_end must be positive", "evolution.t_end");
  const double ratio = cfg_.t_end / cfg_.cadence;
  const long long n_out = std::llround(ratio);
  if (n_out < 1 || std::abs(ratio - static_cast<double>(n_out)) > 1e-9)
    throw ValidationError("cadence must divide t_end", "evolution.cadence");

  Trajectory traj;
  traj.grid = grid_;
  traj.boundary = cfg_.boundary;
  traj.t_end = cfg_.t_end;
  traj.cadence = cfg_.cadence;
  traj.s0 = max_abs(gamma0);

  SwirlState s = make_state(gamma0, omega0, 0.0);
  traj.times.push_back(0.0);
  traj.gamma.push_back(s.gamma);
  traj.omega.push_back(s.omega);
  traj.diagnostics.push_back(diagnostics(s));

  try {
    for (long long k = 1; k <= n_out; ++k) {
      const double interval = cfg_.cadence;
      long long n_sub;
      if (cfg_.dt_rule == DtRule::kFixed) {
        if (!(cfg_.dt_fixed > 0.0))
          throw ValidationError("dt_fixed must be positive",
                                "evolution.dt_fixed");
        n_sub = static_cast<long long>(
            std::ceil(interval / cfg_.dt_fixed - 1e-12));
      } else {
        const double target = cfg_.cfl_safety * cfl_limit(s);
        n_sub = static_cast<long long>(std::ceil(interval / target));
      }
      n_sub = std::max<long long>(n_sub, 1);
      const double dt = interval / static_cast<double>(n_sub);
      for (long long m = 0; m < n_sub; ++m) step(s, dt);
      // Pin the slice time exactly: k steps of rounding never accumulate.
      s.t = static_cast<double>(k) * cfg_.cadence;
      traj.times.push_back(s.t);
      traj.gamma.push_back(s.gamma);
      traj.omega.push_back(s.omega);
      traj.diagnostics.push_back(diagnostics(s));
    }
  } catch (const Error& e) {
    traj.error = e.what();
  }
  return traj;
}

ScalarField residual_omega_consistency(const AxisymVectorField& v_old,
                                       const AxisymVectorField& v_new,
                                       double dt, const SourceFn& source,
                                       double t_old) {
  require_same_grid(v_old.v_r, v_new.v_r);
  require_same_grid(v_old.v_r, v_old.v_z);
  require_same_grid(v_old.v_r, v_old.v_theta);
  if (!(dt > 0.0))
    throw ValidationError("dt must be positive", "residual.dt");
  const GridPtr grid = v_old.v_r.grid;
  const AnnularGrid& g = *grid;

  // omega = omega_theta / r from each snapshot's curl. One-sided stencils at
  // the boundary keep every node defined; the two-cell margin below excludes
  // the nodes whose second differences would touch them.
  auto omega_of = [&](const AxisymVectorField& v) {
    ScalarField w = curl(v, BoundaryRule::kOneSided).omega_theta;
    for (std::size_t i = 0; i < g.n_r; ++i)
      for (std::size_t j = 0; j < g.n_z; ++j) w(i, j) /= g.r(i);
    return w;
  };
  const ScalarField w_old = omega_of(v_old);
  const ScalarField w_new = omega_of(v_new);

  ScalarField res(grid);
  const std::size_t nr = g.n_r, nz = g.n_z;
  const double idr2 = 1.0 / (g.dr * g.dr), idz2 = 1.0 / (g.dz * g.dz);
  const double i2dr = 1.0 / (2.0 * g.dr), i2dz = 1.0 / (2.0 * g.dz);
  const std::size_t j_lo = g.periodic_z ? 0 : 2;
  const std::size_t j_hi = g.periodic_z ? nz : nz - 2;
  for (std::size_t i = 2; i + 2 < nr; ++i) {
    const double r = g.r(i);
    for (std::size_t j = j_lo; j < j_hi; ++j) {
      const std::size_t jm = (j == 0) ? nz - 1 : j - 1;
      const std::size_t jp = (j + 1 == nz) ? 0 : j + 1;
      const double wc = w_old(i, j);
      const double w_rr =
          (w_old(i - 1, j) - 2.0 * wc + w_old(i + 1, j)) * idr2;
      const double w_zz = (w_old(i, jm) - 2.0 * wc + w_old(i, jp)) * idz2;
      const double w_r = (w_old(i + 1, j) - w_old(i - 1, j)) * i2dr;
      const double w_z = (w_old(i, jp) - w_old(i, jm)) * i2dz;
      const double vt = v_old.v_theta(i, j);
      const double dz_vt =
          (v_old.v_theta(i, jp) - v_old.v_theta(i, jm)) * i2dz;
      const double rhs = w_rr + w_zz + 3.0 * w_r / r -
                         v_old.v_r(i, j) * w_r - v_old.v_z(i, j) * w_z +
                         2.0 * vt / (r * r) * dz_vt;
      double val = (w_new(i, j) - wc) / dt - rhs;
      if (source) val -= source(r, g.z(j), t_old);
      res(i, j) = val;
    }
  }
  return res;
}

}  // namespace axns
