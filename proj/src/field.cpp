/// @file field.cpp
/// @brief Field sampling and validation helpers.

#include "axns/field.hpp"

#include <cmath>

namespace axns {

ScalarField sample_field(const GridPtr& grid,
                         const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  const AnnularGrid& g = *grid;
  for (std::size_t i = 0; i < g.n_r; ++i) {
    const double r = g.r(i);
    double* row = out.data() + i * g.n_z;
    for (std::size_t j = 0; j < g.n_z; ++j) row[j] = f(r, g.z(j));
  }
  return out;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid)
    throw ShapeMismatch("fields live on different grid objects");
}

void assert_finite(const ScalarField& f, const std::string& name) {
  for (double x : f.v)
    if (!std::isfinite(x))
      throw DiscretizationFault("field '" + name +
                                "' contains a non-finite value");
}

double max_abs(const ScalarField& f) {
  double m = 0;
  for (double x : f.v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace axns
