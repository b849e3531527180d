#pragma once
/// @file evolution.hpp
/// @brief Time integration of the reduced swirl system.
///
/// The evolved unknowns are gamma = r*v_theta and omega = omega_theta/r:
///   d gamma/dt = lap(gamma) - v_r d_r gamma - v_z d_z gamma - (2/r) d_r gamma
///   d omega/dt = lap(omega) - v_r d_r omega - v_z d_z omega + (2/r) d_r omega
///                + (2 v_theta / r^2) d_z v_theta
/// with unit viscosity. The meridional velocity (v_r, v_z) is recovered each
/// stage from omega through the streamfunction solve, which enforces
/// incompressibility; v_theta = gamma / r. Time stepping is explicit
/// three-stage strong-stability-preserving Runge-Kutta with a CFL guard.
/// Boundary values of gamma and omega are frozen at their initial values
/// (Dirichlet mode) or wrap (periodic-z mode, r boundaries still frozen).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "axns/cyl_ops.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"

namespace axns {

/// One time level of the evolved pair plus derived caches.
struct SwirlState {
  double t = 0;
  ScalarField gamma;  // r * v_theta
  ScalarField omega;  // omega_theta / r
  // Caches, consistent with (gamma, omega) after refresh():
  ScalarField psi, v_r, v_theta, v_z, omega_theta;
  double psi_residual = 0;
  bool caches_fresh = false;
};

enum class BoundaryMode { kDirichletFrozen, kPeriodicZ };
enum class DtRule { kCfl, kFixed };

/// Forcing term sampled at (r, z, t).
using SourceFn = std::function<double(double, double, double)>;

struct EvolutionConfig {
  BoundaryMode boundary = BoundaryMode::kDirichletFrozen;
  DtRule dt_rule = DtRule::kCfl;
  double cfl_safety = 0.5;  // in (0, 1]
  double dt_fixed = 0.0;    // step size when dt_rule == kFixed
  double t_end = 0.0;
  double cadence = 0.0;     // output spacing; must divide t_end
  bool upwind = false;      // first-order upwind advection (stress-test mode)
  SourceFn source_gamma;    // null = unforced
  SourceFn source_omega;
};

/// Per-output-time scalar diagnostics. l2/l4/kinetic use the full-domain
/// cylindrical quadrature (2*pi*r trapezoid).
struct DiagnosticsRecord {
  double time = 0;
  double sup_abs_gamma = 0;
  double l2_gamma = 0;
  double l4_gamma = 0;
  double kinetic_energy = 0;  // ||v||^2_{L2}, all three components
  double sup_abs_omega_theta = 0;
  double sup_abs_r_vtheta = 0;  // from the v_theta cache times r
};

/// Recorded run: slices of (gamma, omega) every cadence, plus diagnostics.
/// Slice k sits at simulation time k*cadence; verification maps simulation
/// time to analysis time t - t_end, so the final slice is analysis time 0
/// and trailing windows (-R^2, 0] index backward from it.
struct Trajectory {
  GridPtr grid;
  BoundaryMode boundary = BoundaryMode::kDirichletFrozen;
  double t_end = 0;
  double cadence = 0;
  double s0 = 0;  // sup over nodes of |gamma(0)|
  std::vector<double> times;
  std::vector<ScalarField> gamma;
  std::vector<ScalarField> omega;
  std::vector<DiagnosticsRecord> diagnostics;
  std::string error;  // empty when the run completed

  std::size_t slices() const { return times.size(); }
  bool complete() const { return error.empty(); }
  double analysis_time(std::size_t k) const { return times[k] - t_end; }
};

/// RHS of the gamma equation from fully refreshed caches, interior nodes
/// only (boundary entries 0; in periodic-z mode every j is interior).
ScalarField reduced_gamma_rhs(const SwirlState& s);
/// Same for the omega equation, including the swirl production term.
ScalarField reduced_omega_rhs(const SwirlState& s);

class Evolver {
 public:
  Evolver(GridPtr grid, EvolutionConfig cfg);

  /// Build a state from initial fields, capture the frozen boundary values,
  /// and refresh caches.
  SwirlState make_state(const ScalarField& gamma0, const ScalarField& omega0,
                        double t0 = 0.0);

  /// Recompute omega_theta, psi, and velocities from (gamma, omega).
  void refresh(SwirlState& s) const;

  /// RHS including configured forcing at the state's time.
  ScalarField gamma_rhs(const SwirlState& s) const;
  ScalarField omega_rhs(const SwirlState& s) const;

  /// Largest stable step at the state's current velocity:
  /// min(h^2/4, h / max(|v_r| + 3/r, |v_z|)) with h = min(dr, dz).
  double cfl_limit(const SwirlState& s) const;

  /// One SSP-RK3 step. Throws CflViolation when dt exceeds cfl_limit
  /// (up to a tiny relative slack); cfl_safety only shrinks the steps
  /// that run() chooses, it is not re-checked here.
  void step(SwirlState& s, double dt) const;

  /// March from t=0 to t_end recording a slice every cadence. A step
  /// failure returns the partial trajectory with its error field set.
  Trajectory run(const ScalarField& gamma0, const ScalarField& omega0);

  DiagnosticsRecord diagnostics(const SwirlState& s) const;

  const EvolutionConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }

 private:
  void impose_boundary(SwirlState& s) const;

  GridPtr grid_;
  EvolutionConfig cfg_;
  StreamfunctionSolver solver_;
  ScalarField bc_gamma_, bc_omega_;  // frozen boundary values
  bool have_bc_ = false;
  std::vector<double> quad_r_, quad_z_;  // full-domain quadrature weights
};

/// Residual of the omega equation evaluated from two velocity snapshots a
/// step dt apart: omega is derived from each snapshot's curl (omega_theta/r),
/// the time derivative is the forward difference, and all spatial terms use
/// the earlier snapshot. When source is given it is subtracted. Valid on
/// nodes at least two cells from every non-periodic boundary; other entries
/// are zero. For a field pair sampled from a true solution the residual is
/// O(h^2) + O(dt); for a forced solution without the source argument it
/// reproduces the forcing to the same accuracy.
ScalarField residual_omega_consistency(const AxisymVectorField& v_old,
                                       const AxisymVectorField& v_new,
                                       double dt,
                                       const SourceFn& source = nullptr,
                                       double t_old = 0.0);

}  // namespace axns
