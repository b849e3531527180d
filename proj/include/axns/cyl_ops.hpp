#pragma once
/// @file cyl_ops.hpp
/// @brief Cylindrical differential operators and the streamfunction solver.
///
/// All derivative operators use second-order centered differences at interior
/// nodes. At boundary nodes they either return 0 (BoundaryRule::kZero, the
/// default — callers that only consume interior values use this) or a
/// second-order one-sided difference (BoundaryRule::kOneSided).

#include <memory>

#include "axns/field.hpp"
#include "axns/grid.hpp"

namespace axns {

enum class BoundaryRule { kZero, kOneSided };

ScalarField d_r(const ScalarField& f, BoundaryRule br = BoundaryRule::kZero);
ScalarField d_z(const ScalarField& f, BoundaryRule br = BoundaryRule::kZero);

/// Axisymmetric scalar Laplacian f_rr + f_r/r + f_zz (interior nodes; 0 on
/// the boundary).
ScalarField laplacian_axisym(const ScalarField& f);

/// Divergence of (v_r, v_theta, v_z): d_r v_r + v_r/r + d_z v_z.
ScalarField divergence(const AxisymVectorField& v,
                       BoundaryRule br = BoundaryRule::kZero);

/// Curl in cylindrical components:
///   omega_r = -d_z v_theta,
///   omega_theta = d_z v_r - d_r v_z,
///   omega_z = d_r v_theta + v_theta / r.
VorticityField curl(const AxisymVectorField& v,
                    BoundaryRule br = BoundaryRule::kZero);

/// Axial boundary condition for the streamfunction solve.
enum class ZBoundary { kDirichlet, kPeriodic };

/// Direct solver for the streamfunction equation
///   psi_rr - psi_r/r + psi_zz = -r * omega_theta
/// with prescribed psi on the rectangle boundary (Dirichlet in r always;
/// Dirichlet or periodic in z). Diagonalizes in z by a discrete sine
/// transform (Dirichlet) or real FFT (periodic) and solves a cached
/// tridiagonal system per mode, so the discrete equations are satisfied to
/// rounding. Every solve measures the worst componentwise relative residual
/// |A psi - b| / (|A| |psi| + |b|) over interior nodes (zero when both sides
/// vanish); Result.rel_residual > tol throws NonConvergence.
class StreamfunctionSolver {
 public:
  /// Grid must be the one fields are sampled on. tol is the residual
  /// contract (default 1e-10).
  explicit StreamfunctionSolver(GridPtr grid,
                                ZBoundary zb = ZBoundary::kDirichlet,
                                double tol = 1e-10);
  ~StreamfunctionSolver();
  StreamfunctionSolver(StreamfunctionSolver&&) noexcept;
  StreamfunctionSolver& operator=(StreamfunctionSolver&&) noexcept;
  StreamfunctionSolver(const StreamfunctionSolver&) = delete;
  StreamfunctionSolver& operator=(const StreamfunctionSolver&) = delete;

  struct Result {
    ScalarField psi;
    double rel_residual = 0;
  };

  /// Solve given omega_theta. psi_boundary, when non-null, supplies boundary
  /// values of psi (only its boundary nodes are read); otherwise psi = 0 on
  /// the boundary. With periodic z only the r boundaries are read.
  Result solve(const ScalarField& omega_theta,
               const ScalarField* psi_boundary = nullptr) const;

  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  ZBoundary zb_;
  double tol_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Recover velocity from streamfunction and swirl circulation:
///   v_r = -psi_z / r, v_z = psi_r / r, v_theta = gamma / r.
/// Derivatives of psi use one-sided stencils at the boundary so the velocity
/// is defined everywhere.
AxisymVectorField velocity_from_psi(const ScalarField& psi,
                                    const ScalarField& gamma);

/// 2x2 gradient matrix of the meridional velocity, with the exact -1/r^2
/// shift on the rr entry:
///   [ d_r v_r - 1/r^2   d_r v_z ]
///   [ d_z v_r           d_z v_z ]
/// The -1/r^2 term is evaluated from node coordinates, not differenced.
struct GradientMatrix {
  ScalarField rr;  // d_r v_r - 1/r^2
  ScalarField rz;  // d_r v_z
  ScalarField zr;  // d_z v_r
  ScalarField zz;  // d_z v_z
};

GradientMatrix gradient_matrix(const AxisymVectorField& v,
                               BoundaryRule br = BoundaryRule::kOneSided);

}  // namespace axns
