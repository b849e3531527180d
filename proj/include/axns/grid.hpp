#pragma once
/// @file grid.hpp
/// @brief Annular tensor-product grids, cylindrical regions, and quadrature masks.
///
/// All fields in this library live on an AnnularGrid: a uniform tensor grid on
/// [r_min, r_max] x [z_min, z_max] with r_min > 0 (the axis is excluded so the
/// 1/r factors in the cylindrical operators stay finite). Index convention is
/// r-major: node (i, j) has r = r_min + i*dr, z = z_min + j*dz and flat index
/// i*n_z + j. When periodic_z is set, z_max is identified with z_min: the
/// grid carries n_z distinct nodes with dz = (z_max - z_min)/n_z and the node
/// after j = n_z - 1 wraps to j = 0.

#include <cstddef>
#include <memory>
#include <vector>

#include "axns/errors.hpp"

namespace axns {

struct AnnularGrid {
  double r_min = 0, r_max = 0;
  double z_min = 0, z_max = 0;
  std::size_t n_r = 0, n_z = 0;
  bool periodic_z = false;
  double dr = 0, dz = 0;

  std::size_t size() const { return n_r * n_z; }
  double r(std::size_t i) const { return r_min + static_cast<double>(i) * dr; }
  double z(std::size_t j) const { return z_min + static_cast<double>(j) * dz; }
  std::size_t idx(std::size_t i, std::size_t j) const { return i * n_z + j; }
  bool interior(std::size_t i, std::size_t j) const {
    return i > 0 && i + 1 < n_r &&
           (periodic_z || (j > 0 && j + 1 < n_z));
  }
};

using GridPtr = std::shared_ptr<const AnnularGrid>;

/// Build a grid. Throws AxisIncluded if r_min <= 0, GridTooCoarse if either
/// direction has fewer than 8 nodes, ValidationError on inverted extents.
GridPtr make_grid(double r_min, double r_max, double z_min, double z_max,
                  std::size_t n_r, std::size_t n_z, bool periodic_z = false);

/// Hollow cylinder {A*R <= r <= B*R, |z| <= B*R}, with 0 < A < B and R > 0.
struct HollowCylinder {
  double A = 0, B = 0, R = 0;
  double r_lo() const { return A * R; }
  double r_hi() const { return B * R; }
  double z_half() const { return B * R; }
  /// Exact volume 2*pi*B*R^3*(B^2 - A^2).
  double volume() const;
};

/// The same cylinder paired with the time window (-R^2, 0].
struct ParabolicCylinder {
  HollowCylinder space;
  double t_lo() const { return -space.R * space.R; }  // exclusive endpoint
  double t_hi() const { return 0.0; }                 // inclusive endpoint
  double duration() const { return space.R * space.R; }
  /// Space-time measure: volume() * R^2.
  double measure() const { return space.volume() * duration(); }
};

HollowCylinder hollow_cylinder(double A, double B, double R);
ParabolicCylinder parabolic_cylinder(double A, double B, double R);

/// Shrinking-cylinder schedule sigma_i = 3/4 + 2^{-i-2}: sigma_0 = 1,
/// decreasing toward 3/4. Region at level i is the hollow cylinder with
/// A = 5 - 4*sigma_i, B = 4*sigma_i at the given R. Levels run from 0 to
/// i_max inclusive; sigma(i) throws ValidationError outside that range.
struct SigmaSchedule {
  int i_max = 8;

  double sigma(int i) const;
  HollowCylinder cylinder(int i, double R) const;
  ParabolicCylinder parabolic(int i, double R) const;
};

/// Quadrature mask for a hollow cylinder on a grid. The mask is separable:
/// weight(i, j) = w_r[i - i_lo] * w_z[j - j_lo], where w_r already carries the
/// 2*pi*r Jacobian and the radial trapezoid weight, and w_z the axial
/// trapezoid weight. Nodes strictly inside the region get full spacing
/// weights; the extreme masked nodes get half weights, so sums over the mask
/// are trapezoid-rule approximations of volume integrals.
struct RegionMask {
  GridPtr grid;
  std::size_t i_lo = 0, i_hi = 0;  // inclusive node range in r
  std::size_t j_lo = 0, j_hi = 0;  // inclusive node range in z
  std::vector<double> w_r;         // size i_hi - i_lo + 1, includes 2*pi*r
  std::vector<double> w_z;         // size j_hi - j_lo + 1

  std::size_t count() const { return (i_hi - i_lo + 1) * (j_hi - j_lo + 1); }
  double weight(std::size_t i, std::size_t j) const {
    return w_r[i - i_lo] * w_z[j - j_lo];
  }
  /// Sum of all weights = discrete volume of the region.
  double total_weight() const;
};

/// Build the mask of grid nodes inside the cylinder. Node-in-region tests use
/// an absolute slack of 1e-9*spacing so region boundaries that coincide with
/// grid lines (the intended usage) are included deterministically. Throws
/// EmptyRegion if no interval of nodes falls inside, RegionNotCovered if the
/// region sticks out of the grid (unless allow_clip, in which case the mask
/// covers the clipped region).
RegionMask make_region_mask(const GridPtr& grid, const HollowCylinder& cyl,
                            bool allow_clip = false);

/// True when the cylinder lies inside the grid rectangle (with slack).
bool grid_covers(const AnnularGrid& grid, const HollowCylinder& cyl);

/// Fraction of the cylinder volume lying OUTSIDE the grid rectangle,
/// computed analytically from the exact volume formula (0 when covered).
double clip_fraction(const AnnularGrid& grid, const HollowCylinder& cyl);

}  // namespace axns
