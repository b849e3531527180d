#pragma once
/// @file initial_data.hpp
/// @brief Closed-form initial swirl profiles for reference runs.

namespace axns {

/// Pure-swirl circulation profile for the [1, 4] x [-4, 4] box:
///   gamma0(r, z) = sin(pi z) (r - 1)(4 - r).
/// Vanishes on the whole box boundary (sin(pi z) = 0 at z = +-4) and peaks
/// at |gamma0| = 2.25 at (r, z) = (2.5, +-0.5 mod 2).
double reference_gamma0(double r, double z);

/// The same profile multiplied by smoothstep tapers so it extends to wide
/// domains: radially it ramps up over [0.25, 1], down over [4, 5.25]; in z it
/// ramps down over 4 <= |z| <= 5.25. Equals reference_gamma0 on
/// [1, 4] x [-4, 4]; vanishes for r <= 0.25, r >= 5.25, or |z| >= 5.25.
/// The global peak magnitude stays 2.25 (the tapered skirt never exceeds it).
double wide_gamma0(double r, double z);

}  // namespace axns
