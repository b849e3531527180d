/// @file grid.cpp
/// @brief Grid construction, cylindrical regions, and quadrature masks.

#include "axns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace axns {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

GridPtr make_grid(double r_min, double r_max, double z_min, double z_max,
                  std::size_t n_r, std::size_t n_z, bool periodic_z) {
  if (!(r_min > 0.0))
    throw AxisIncluded("grid must exclude the axis: r_min = " + fmt(r_min) +
                       " <= 0");
  if (!(r_max > r_min))
    throw ValidationError("grid requires r_max > r_min", "grid.r_max");
  if (!(z_max > z_min))
    throw ValidationError("grid requires z_max > z_min", "grid.z_max");
  if (n_r < 8 || n_z < 8)
    throw GridTooCoarse("grid needs at least 8 nodes per direction, got " +
                        std::to_string(n_r) + " x " + std::to_string(n_z));
  auto g = std::make_shared<AnnularGrid>();
  g->r_min = r_min;
  g->r_max = r_max;
  g->z_min = z_min;
  g->z_max = z_max;
  g->n_r = n_r;
  g->n_z = n_z;
  g->periodic_z = periodic_z;
  g->dr = (r_max - r_min) / static_cast<double>(n_r - 1);
  // Periodic grids store n_z distinct nodes; z_max is the wrapped image of
  // z_min, so the spacing divides the span into n_z cells.
  g->dz = (z_max - z_min) /
          static_cast<double>(periodic_z ? n_z : (n_z - 1));
  return g;
}

double HollowCylinder::volume() const {
  return 2.0 * kPi * B * R * R * R * (B * B - A * A);
}

HollowCylinder hollow_cylinder(double A, double B, double R) {
  if (!(0.0 < A && A < B))
    throw ValidationError(
        "hollow cylinder requires 0 < A < B, got A = " + fmt(A) +
            ", B = " + fmt(B),
        "region.A");
  if (!(R > 0.0))
    throw ValidationError("hollow cylinder requires R > 0, got R = " + fmt(R),
                          "region.R");
  return HollowCylinder{A, B, R};
}

ParabolicCylinder parabolic_cylinder(double A, double B, double R) {
  return ParabolicCylinder{hollow_cylinder(A, B, R)};
}

double SigmaSchedule::sigma(int i) const {
  if (i < 0 || i > i_max)
    throw ValidationError("sigma index must lie in [0, " +
                              std::to_string(i_max) + "], got " +
                              std::to_string(i),
                          "sigma.i");
  return 0.75 + std::ldexp(1.0, -i - 2);  // 3/4 + 2^{-i-2}
}

HollowCylinder SigmaSchedule::cylinder(int i, double R) const {
  const double s = sigma(i);
  return hollow_cylinder(5.0 - 4.0 * s, 4.0 * s, R);
}

ParabolicCylinder SigmaSchedule::parabolic(int i, double R) const {
  return ParabolicCylinder{cylinder(i, R)};
}

double RegionMask::total_weight() const {
  double sr = 0, sz = 0;
  for (double w : w_r) sr += w;
  for (double w : w_z) sz += w;
  return sr * sz;
}

namespace {

// Index range of grid nodes x_k = x0 + k*h inside [lo, hi] with slack.
// Returns false when empty.
bool node_range(double x0, double h, std::size_t n, double lo, double hi,
                std::size_t& k_lo, std::size_t& k_hi) {
  const double tol = 1e-9 * h;
  double a = std::ceil((lo - tol - x0) / h);
  double b = std::floor((hi + tol - x0) / h);
  long la = static_cast<long>(a);
  long lb = static_cast<long>(b);
  la = std::max(la, 0L);
  lb = std::min(lb, static_cast<long>(n) - 1L);
  if (la > lb) return false;
  k_lo = static_cast<std::size_t>(la);
  k_hi = static_cast<std::size_t>(lb);
  return true;
}

}  // namespace

bool grid_covers(const AnnularGrid& grid, const HollowCylinder& cyl) {
  const double tr = 1e-9 * grid.dr, tz = 1e-9 * grid.dz;
  return cyl.r_lo() >= grid.r_min - tr && cyl.r_hi() <= grid.r_max + tr &&
         -cyl.z_half() >= grid.z_min - tz && cyl.z_half() <= grid.z_max + tz;
}

double clip_fraction(const AnnularGrid& grid, const HollowCylinder& cyl) {
  // Covered sub-box volume: 2*pi * (r integral over covered annulus) *
  // (covered z length); uses exact antiderivative pi*(r2^2 - r1^2).
  const double r1 = std::max(cyl.r_lo(), grid.r_min);
  const double r2 = std::min(cyl.r_hi(), grid.r_max);
  const double z1 = std::max(-cyl.z_half(), grid.z_min);
  const double z2 = std::min(cyl.z_half(), grid.z_max);
  if (r2 <= r1 || z2 <= z1) return 1.0;
  const double covered = kPi * (r2 * r2 - r1 * r1) * (z2 - z1);
  return std::max(0.0, 1.0 - covered / cyl.volume());
}

RegionMask make_region_mask(const GridPtr& grid, const HollowCylinder& cyl,
                            bool allow_clip) {
  if (!grid) throw ValidationError("null grid", "mask.grid");
  const AnnularGrid& g = *grid;
  if (!allow_clip && !grid_covers(g, cyl))
    throw RegionNotCovered(
        "region [" + fmt(cyl.r_lo()) + "," + fmt(cyl.r_hi()) + "] x [-" +
        fmt(cyl.z_half()) + "," + fmt(cyl.z_half()) +
        "] is not contained in the grid rectangle");
  RegionMask m;
  m.grid = grid;
  if (!node_range(g.r_min, g.dr, g.n_r, cyl.r_lo(), cyl.r_hi(), m.i_lo,
                  m.i_hi) ||
      !node_range(g.z_min, g.dz, g.n_z, -cyl.z_half(), cyl.z_half(), m.j_lo,
                  m.j_hi))
    throw EmptyRegion("region mask contains no grid nodes");
  const std::size_t nr = m.i_hi - m.i_lo + 1;
  const std::size_t nz = m.j_hi - m.j_lo + 1;
  if (nr < 2 || nz < 2)
    throw EmptyRegion("region mask needs at least 2 nodes per direction");
  m.w_r.resize(nr);
  m.w_z.resize(nz);
  for (std::size_t a = 0; a < nr; ++a) {
    const double wr = (a == 0 || a + 1 == nr) ? 0.5 * g.dr : g.dr;
    m.w_r[a] = 2.0 * kPi * g.r(m.i_lo + a) * wr;
  }
  for (std::size_t b = 0; b < nz; ++b)
    m.w_z[b] = (b == 0 || b + 1 == nz) ? 0.5 * g.dz : g.dz;
  return m;
}

}  // namespace axns
