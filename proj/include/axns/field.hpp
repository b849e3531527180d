#pragma once
/// @file field.hpp
/// @brief Scalar and vector fields sampled on an annular grid.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "axns/grid.hpp"

namespace axns {

/// A scalar sampled at every grid node, stored r-major (idx = i*n_z + j).
struct ScalarField {
  GridPtr grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(GridPtr g, double fill = 0.0)
      : grid(std::move(g)), v(grid->size(), fill) {}

  double operator()(std::size_t i, std::size_t j) const {
    return v[i * grid->n_z + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return v[i * grid->n_z + j];
  }
  double* data() { return v.data(); }
  const double* data() const { return v.data(); }
  std::size_t size() const { return v.size(); }
};

/// Sample f(r, z) at every node.
ScalarField sample_field(const GridPtr& grid,
                         const std::function<double(double, double)>& f);

/// Throws ShapeMismatch unless both fields share one grid object.
void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Throws DiscretizationFault (naming the field) if any entry is NaN/Inf.
void assert_finite(const ScalarField& f, const std::string& name);

/// Max of |f| over all nodes.
double max_abs(const ScalarField& f);

/// Velocity in cylindrical components for an axisymmetric flow.
struct AxisymVectorField {
  ScalarField v_r, v_theta, v_z;
};

/// Vorticity components of an axisymmetric flow.
struct VorticityField {
  ScalarField omega_r, omega_theta, omega_z;
};

}  // namespace axns
