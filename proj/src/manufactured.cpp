/// @file manufactured.cpp
/// @brief Computer-algebra generated bodies for the manufactured flow.
///
/// Do not hand-edit the expressions: they are emitted by a symbolic
/// derivation that also verifies the curl/divergence identities, the
/// vanishing of gamma and omega on the [1,4] x [-4,4] boundary, and the
/// forced equations exactly.

#include "axns/manufactured.hpp"

#include <cmath>

#ifndef M_PI
#define M_PI 3.14159265358979323846
#endif

namespace axns {

using std::cos;
using std::exp;
using std::pow;
using std::sin;

double ManufacturedFlow::gamma(double r, double z, double t) {
  return -(r - 4)*(r - 1)*exp(-t)*sin(M_PI*z);
}

double ManufacturedFlow::psi(double r, double z, double t) {
  return (1.0/20.0)*pow(r - 4, 3)*pow(r - 1, 3)*exp(-t)*sin(M_PI*z);
}

double ManufacturedFlow::v_r(double r, double z, double t) {
  return -1.0/20.0*M_PI*pow(r - 4, 3)*pow(r - 1, 3)*exp(-t)*cos(M_PI*z)/r;
}

double ManufacturedFlow::v_z(double r, double z, double t) {
  return (3.0/20.0)*pow(r - 4, 2)*pow(r - 1, 2)*(2*r - 5)*exp(-t)*sin(M_PI*z)/r;
}

double ManufacturedFlow::v_theta(double r, double z, double t) {
  return -(r - 4)*(r - 1)*exp(-t)*sin(M_PI*z)/r;
}

double ManufacturedFlow::omega_theta(double r, double z, double t) {
  const double x0 = r - 1;
  const double x1 = r - 4;
  const double x2 = x0*x1;
  const double x3 = pow(x1, 2);
  const double x4 = pow(x0, 2);
  return (1.0/20.0)*x2*(r*(-18*x2 + pow(M_PI, 2)*x3*x4 - 6*x3 - 6*x4) + 3*x2*(2*r - 5))*exp(-t)*sin(M_PI*z)/pow(r, 2);
}

double ManufacturedFlow::omega(double r, double z, double t) {
  const double x0 = r - 1;
  const double x1 = r - 4;
  const double x2 = x0*x1;
  const double x3 = pow(x1, 2);
  const double x4 = pow(x0, 2);
  return -1.0/20.0*x2*(r*(18*x2 - pow(M_PI, 2)*x3*x4 + 6*x3 + 6*x4) - 3*x2*(2*r - 5))*exp(-t)*sin(M_PI*z)/pow(r, 3);
}

double ManufacturedFlow::omega_r(double r, double z, double t) {
  return M_PI*(r - 4)*(r - 1)*exp(-t)*cos(M_PI*z)/r;
}

double ManufacturedFlow::omega_z(double r, double z, double t) {
  return (5 - 2*r)*exp(-t)*sin(M_PI*z)/r;
}

double ManufacturedFlow::source_gamma(double r, double z, double t) {
  const double x0 = M_PI*z;
  const double x1 = exp(t);
  const double x2 = r - 4;
  const double x3 = r - 1;
  const double x4 = x2*x3;
  return -1.0/10.0*(-10*r*x1*(-pow(M_PI, 2)*x4 + x4 + 2) + x1*(20*r - 50) + M_PI*pow(x2, 3)*pow(x3, 3)*(2*r - 5)*cos(x0))*exp(-2*t)*sin(x0)/r;
}

double ManufacturedFlow::source_omega(double r, double z, double t) {
  const double x0 = M_PI*z;
  const double x1 = r - 1;
  const double x2 = pow(x1, 2);
  const double x3 = r - 4;
  const double x4 = cos(x0);
  const double x5 = M_PI*x4;
  const double x6 = exp(t);
  const double x7 = pow(r, 2);
  const double x8 = 2*r;
  const double x9 = x8 - 5;
  const double x10 = pow(x3, 2);
  const double x11 = x10*x2;
  const double x12 = pow(M_PI, 2);
  const double x13 = r*x12;
  const double x14 = x11*x13;
  const double x15 = x1*x3;
  const double x16 = 3*x15;
  const double x17 = x10 + x16 + x2;
  const double x18 = 6*r;
  const double x19 = r*x15;
  const double x20 = -3*x1*x3*x9 + x10*x18 - x14 + x18*x2 + 18*x19;
  const double x21 = pow(x3, 3);
  const double x22 = pow(x1, 3);
  const double x23 = x14 + x16*x9 - x17*x18;
  const double x24 = x21*x22;
  const double x25 = x11*x9;
  const double x26 = x2*x3;
  const double x27 = x1*x10;
  const double x28 = x21 + x22 + 9*x26 + 9*x27;
  const double x29 = 6*x7;
  const double x30 = 12*r*x1*x17*x3 + 3*x10*x12*x22*x7 + 3*x12*x2*x21*x7 - x13*x24 - x15*x23 - 6*x25 - x28*x29;
  const double x31 = x21*x29;
  const double x32 = x22*x29;
  const double x33 = pow(r, 3);
  const double x34 = 36*x33;
  const double x35 = 54*x7;
  const double x36 = x12*x33;
  const double x37 = 3*x36;
  return (1.0/400.0)*(-800*r*x2*pow(x3, 2)*x5 + 3*M_PI*r*x21*x22*x23*x4*x9 + 20*x1*x3*x6*x7*(-3*x1*x3*x9 - x14 + x17*x18) - 20*x12*x15*x20*x6*x7 - x24*x30*x5 - 60*x30*x6 - 40*x6*(x1*x21*x37 - x10*x12*x32 - x10*x34 + 9*x11*x36 - x12*x2*x31 + x12*x24*x8 - x15*x20 - 108*x15*x33 - 30*x17*x19 - x2*x34 + x22*x3*x37 + 15*x25 + x26*x35 + x27*x35 + 9*x28*x7 + x31 + x32))*exp(-2*t)*sin(x0)/pow(r, 5);
}

}  // namespace axns
