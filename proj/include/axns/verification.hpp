#pragma once
/// @file verification.hpp
/// @brief Checks that turn the analytical claims into measurable quantities:
///        swirl maximum-principle monitoring, weighted-vorticity ratio tests
///        with explicit proxy constants, scaling identities, rescaled-field
///        equation residuals, and gradient-vs-curl ratio families.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "axns/cyl_ops.hpp"
#include "axns/evolution.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"
#include "axns/norms.hpp"

namespace axns {

/// Default slack for the discrete maximum-principle checks: a fixed floor
/// plus a frozen multiple of h^2 matching the scheme's truncation order
/// (h = max grid spacing).
double default_swirl_tolerance(const AnnularGrid& grid);

/// Monotonicity and pointwise-envelope report for the swirl field.
/// All norms are recomputed from the stored slices (full-domain cylindrical
/// quadrature), so a tampered trajectory cannot pass on stale diagnostics.
struct SwirlCheckReport {
  double eps_tol = 0;
  double s0 = 0;                  // sup |gamma| at the first slice
  double max_sup_increase = 0;    // max over consecutive slices (<= 0 good)
  double max_l2_increase = 0;
  double max_l4_increase = 0;
  double max_pointwise_excess = 0;  // max over nodes/slices of (|gamma|-s0)/r
  bool sup_monotone = false;
  bool lp_monotone = false;
  bool pointwise_envelope = false;
  bool pass = false;
};

SwirlCheckReport check_swirl_bounds(const Trajectory& traj, double eps_tol);

/// Norm ingredients for the two proxy constants. Which regions the norms are
/// taken over depends on the claim: the peak-vorticity claim uses
/// C_{1,4,R} / P_{1,4,R}; the meridional claim uses C_{1/10,10,R} /
/// P_{1/10,10,R} clipped to the grid (clip share recorded).
struct ProxyParts {
  double R = 0;
  double s0 = 0;             // sup |gamma(0)| over the grid
  double k_b = 0;            // sup_t of the spatial L2 of |b| = |(v_r, v_z)|
  double l2_omega_theta = 0;
  double l2_velocity = 0;    // all three components (meridional claim only)
  double l2_omega_r = 0;     // meridional claim only
  double l2_omega_z = 0;     // meridional claim only
  double clip_frac = 0;      // analytic volume share outside the grid
};

/// (k_b^2 + R*s0)^(5/2) * (l2_omega_theta + sqrt(R)*s0).
double b1_proxy(const ProxyParts& p);

/// [(k_b^4 + R^2*s0 + R^2) * l2_omega_theta^2 + R*k_b^4 + l2_velocity^2
///  + R^3]^(5/2) * (l2_omega_r + l2_omega_z).
double b2_proxy(const ProxyParts& p);

/// One radius of a weighted-vorticity ratio test.
struct BoundReport {
  std::string claim;    // "peak-vorticity-r5" or "meridional-vorticity-r10"
  double R = 0;
  double measured = 0;  // sup over P_{2,3,R} of the weighted vorticity
  double aux_h_sup = 0; // sup of max(|w_r|,|w_z|)*r^10 (meridional claim)
  ProxyParts parts;
  double proxy = 0;
  double ratio = 0;     // measured / proxy; 0 when both vanish
  double ceiling = 0;
  bool pass = false;    // ratio finite and <= ceiling
};

struct TheoremCheck {
  std::vector<BoundReport> reports;  // one per radius, input order
  bool proxy_monotone = false;       // proxy non-decreasing in R
  bool pass = false;                 // all radii pass and proxy_monotone
  std::string resolution;            // "n_r x n_z"
};

/// Ratio test for the peak-vorticity decay claim: measured =
/// sup_{P_{2,3,R}} |omega_theta| * r^5 against the first proxy. omega_theta
/// is reconstructed from the stored slices as r * omega.
TheoremCheck check_theorem_i(const Trajectory& traj,
                             const std::vector<double>& radii,
                             double ceiling);

/// Ratio test for the meridional-vorticity decay claim: measured =
/// sup_{P_{2,3,R}} (|omega_r| + |omega_z|) * r^10 against the second proxy.
/// omega_r, omega_z come from the curl of the velocity recovered per slice.
TheoremCheck check_theorem_ii(const Trajectory& traj,
                              const std::vector<double>& radii,
                              double ceiling);

/// True when every per-radius ratio agrees between the two resolutions
/// within the given factor (zero ratios must be zero on both).
bool refinement_stable(const TheoremCheck& coarse, const TheoremCheck& fine,
                       double factor = 2.0);

/// Closed-form axisymmetric flow with its curl, all functions of (r, z, t).
struct AnalyticFlow {
  std::function<double(double, double, double)> v_r, v_theta, v_z;
  std::function<double(double, double, double)> w_r, w_theta, w_z;
};

/// The manufactured decaying vortex as an AnalyticFlow.
AnalyticFlow manufactured_analytic_flow();

/// Discrepancies of the five scaling identities, all relative except the
/// node map (absolute). With scale factors that are powers of two the sides
/// agree to rounding; anything near 1 signals a wrong power of k.
struct ScalingCheck {
  double k = 0;
  double rel_l2_velocity = 0;    // ||v~|| vs k^(-3/2) ||v||
  double rel_kb = 0;             // K_b~ vs k^(-1/2) K_b
  double rel_l2_vorticity = 0;   // ||w~|| vs k^(-1/2) ||w||
  double max_node_map_error = 0; // max |r~_i - r_i/k|, |z~_j - z_j/k|
  double rel_sup_swirl = 0;      // sup|r~ v~_theta| vs sup|r v_theta|
};

/// Evaluate the identities on the region D (R-prefactors read from D.R = 1
/// conventions: the unscaled side lives on k*D with window (-(k R_D)^2, 0]).
/// Both sides are quadratures of the closed-form flow on node-mapped grids
/// of identical index shape: n_r x n_z nodes, n_t + 1 time slices.
ScalingCheck check_scaling(const AnalyticFlow& flow, double k,
                           const HollowCylinder& D, std::size_t n_r,
                           std::size_t n_z, std::size_t n_t);

/// Map a trajectory through the parabolic rescaling: grid extents divide by
/// k, times divide by k^2, gamma is carried over unchanged (it is scale
/// invariant) and omega is multiplied by k^3. Diagnostics are dropped; the
/// result is meant for residual and ratio re-checks.
Trajectory scale_trajectory(const Trajectory& traj, double k);

/// Centered-in-time finite-difference residuals of the two evolved
/// equations, applied to the rescaled trajectory on P_{1,4,1}.
struct ResidualReport {
  double k = 0;
  double l2_gamma_residual = 0;
  double l2_omega_residual = 0;
  std::size_t slices_used = 0;
};

/// Rescale the trajectory by k and measure how well the rescaled fields
/// satisfy the evolved equations on P_{1,4,1} (space-time L2 of the interior
/// residual; time derivative from centered slice differences). Throws
/// RegionNotCovered when the rescaled grid or window misses the region.
ResidualReport check_rescaled_equations(const Trajectory& traj, double k);

/// Ratio of ||full 3-D gradient of v||_{L^q(C_{2,3,1})} to
/// (||curl v|| + ||div v|| + ||v||)_{L^q(C_{1,4,1})}. The gradient of an
/// axisymmetric field in the cylindrical orthonormal frame has nine entries;
/// the angular row contributes (-v_theta/r, v_r/r, 0). Both-zero inputs give
/// 0; a vanishing denominator with nonzero numerator is a discretization
/// fault. Requires q > 1.
double helmholtz_ratio(const AxisymVectorField& v, double q);

/// Ratio of (||grad v_r|| + ||v_r/r|| + ||grad v_z||)_{L^q(C_{2,3,1})} to
/// (||(curl v)_theta|| + ||v||)_{L^q(C_{1,4,1})} for discretely
/// divergence-free meridional fields (grad here is the meridional (d_r, d_z)
/// of a scalar). Steady fields make the time factors of the space-time
/// version cancel, so the spatial ratio equals the space-time ratio.
/// Throws DiscretizationFault when the input is measurably not
/// divergence-free.
double axisym_gradient_ratio(const AxisymVectorField& v, double q);

/// Space-time L^q norm (default q = 10/3) over the region of the max-entry
/// magnitude of the meridional gradient matrix
///   [ d_r v_r - 1/r^2   d_r v_z ]
///   [ d_z v_r           d_z v_z ]
/// for a steady field (time integration contributes duration^(1/q)).
double v_matrix_norm(const AxisymVectorField& v,
                     const ParabolicCylinder& region, double q = 10.0 / 3.0);

/// Band-limited random scalar with closed-form derivatives: a double sine
/// series over the grid rectangle (modes 1..3 each way, 1/(m^2+n^2) decay,
/// random amplitudes in [-1, 1] and phases in [0, 2pi)). Coefficients
/// depend only on the seed, never on the grid resolution, so two grids
/// sample the same underlying function.
struct TrigField {
  double r0 = 0, inv_lr = 0, z0 = 0, inv_lz = 0;
  double c[3][3] = {};
  double a[3] = {};
  double b[3] = {};

  static TrigField random(const AnnularGrid& g, std::uint64_t seed);

  double value(double r, double z) const;
  double d_r(double r, double z) const;
  double d_z(double r, double z) const;
};

/// Empirical ratio survey over a seeded family of closed-form fields.
struct FieldFamilyResult {
  std::vector<double> ratios;
  double max_ratio = 0;
  double scale_drift = 0;  // relative ratio change under v -> 3v (field 0)
};

/// Family of unconstrained three-component trig fields for the full
/// gradient-vs-(curl, div) ratio.
FieldFamilyResult helmholtz_family(const GridPtr& grid, double q,
                                   int family_size, std::uint64_t seed);

/// Family of divergence-free meridional fields built from trig
/// streamfunctions (v_r = -psi_z/r, v_z = psi_r/r in closed form).
FieldFamilyResult axisym_family(const GridPtr& grid, double q,
                                int family_size, std::uint64_t seed);

}  // namespace axns
