/// @file initial_data.cpp
/// @brief Closed-form initial swirl profiles.

#include "axns/initial_data.hpp"

#include <algorithm>
#include <cmath>

namespace axns {

namespace {

// C^1 smoothstep on [0, 1], clamped outside.
double ramp(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

double reference_gamma0(double r, double z) {
  return std::sin(M_PI * z) * (r - 1.0) * (4.0 - r);
}

double wide_gamma0(double r, double z) {
  const double t_in = ramp((r - 0.25) / 0.75);         // 0 at r=0.25, 1 at r=1
  const double t_out = ramp((5.25 - r) / 1.25);        // 1 at r=4, 0 at r=5.25
  const double t_z = ramp((5.25 - std::fabs(z)) / 1.25);  // 1 at |z|=4
  return reference_gamma0(r, z) * t_in * t_out * t_z;
}

}  // namespace axns
