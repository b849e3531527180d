#pragma once
/// @file manufactured.hpp
/// @brief Closed-form flow with forcing terms for order-of-accuracy tests.
///
/// The flow is built from the smooth streamfunction
///   psi(r, z, t) = (1/20) * (r-1)^3 * (r-4)^3 * exp(-t) * sin(pi z)
/// and swirl circulation
///   gamma(r, z, t) = -(r-1)(r-4) * exp(-t) * sin(pi z).
/// The velocity is exactly divergence-free, and the cubic radial factors make
/// both gamma and omega = omega_theta / r vanish identically on the whole
/// boundary of [1, 4] x [-4, 4] for every t (psi and psi_r vanish at r = 1, 4;
/// sin(pi z) vanishes at z = +-4). A solver that pins homogeneous Dirichlet
/// boundary values therefore commits no boundary error against this flow.
/// Because the flow does not solve the unforced equations, source terms are
/// added to the right-hand sides so that it is an exact solution of the
/// forced system. All formulas below were generated from the closed-form
/// expressions by computer algebra and are used as the reference in
/// convergence studies.
namespace axns {

struct ManufacturedFlow {
  static double gamma(double r, double z, double t);
  static double psi(double r, double z, double t);
  static double v_r(double r, double z, double t);
  static double v_theta(double r, double z, double t);
  static double v_z(double r, double z, double t);
  static double omega_r(double r, double z, double t);
  static double omega_theta(double r, double z, double t);
  static double omega_z(double r, double z, double t);
  /// omega = omega_theta / r.
  static double omega(double r, double z, double t);
  /// Forcing for the gamma equation:
  ///   source_gamma = gamma_t - [lap gamma - (b.grad) gamma - (2/r) gamma_r].
  static double source_gamma(double r, double z, double t);
  /// Forcing for the omega equation:
  ///   source_omega = omega_t - [lap omega - (b.grad) omega
  ///                             + (2/r) omega_r + (2 v_theta / r^2) v_theta_z].
  static double source_omega(double r, double z, double t);
};

}  // namespace axns
