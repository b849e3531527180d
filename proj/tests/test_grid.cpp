/// @file test_grid.cpp
/// @brief Grid construction, region geometry, masks, and the shrinking
///        schedule: exact node placement, analytic volumes, clip fractions.

#include <cmath>
#include <cstdlib>

#include "axns/errors.hpp"
#include "axns/grid.hpp"
#include "harness.hpp"

using namespace axns;
using harness::expect_throw;
using harness::qoi;
using harness::record;

namespace {

bool close(double a, double b, double rel) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * (scale > 0 ? scale : 1.0);
}

void test_grid_construction() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  record("node count", g->size() == 61u * 161u);
  record("r endpoints on nodes", g->r(0) == 1.0 && g->r(60) == 4.0);
  record("z endpoints on nodes", g->z(0) == -4.0 && g->z(160) == 4.0);
  record("spacing", close(g->dr, 0.05, 1e-15) && close(g->dz, 0.05, 1e-15));
  record("row-major index", g->idx(2, 3) == 2u * 161u + 3u);
  record("interior excludes boundary",
         !g->interior(0, 5) && !g->interior(60, 5) && !g->interior(5, 0) &&
             !g->interior(5, 160) && g->interior(1, 1));

  const GridPtr p = make_grid(1.0, 4.0, 0.0, 2.0, 16, 32, true);
  record("periodic grid holds n_z distinct nodes",
         close(p->dz, 2.0 / 32.0, 1e-15) &&
             close(p->z(31), 2.0 - p->dz, 1e-14));
  record("periodic grid interior wraps z",
         p->interior(1, 0) && p->interior(1, 31) && !p->interior(0, 0));

  expect_throw<AxisIncluded>("axis excluded",
                             [] { make_grid(0.0, 4.0, -1, 1, 16, 16, false); });
  expect_throw<AxisIncluded>("negative r_min excluded", [] {
    make_grid(-1.0, 4.0, -1, 1, 16, 16, false);
  });
  expect_throw<GridTooCoarse>("too few nodes",
                              [] { make_grid(1, 4, -1, 1, 4, 16, false); });
}

void test_region_geometry() {
  const HollowCylinder c = hollow_cylinder(1.0, 4.0, 1.0);
  record("cylinder bounds",
         c.r_lo() == 1.0 && c.r_hi() == 4.0 && c.z_half() == 4.0);
  // volume = pi (B^2 - A^2) R^2 * 2 B R
  const double vol = 120.0 * M_PI;
  record("cylinder volume 120*pi", close(c.volume(), vol, 1e-14),
         qoi(c.volume(), vol));
  record("volume oracle value", close(c.volume(), 376.99111843077519, 1e-14));

  const HollowCylinder half = hollow_cylinder(1.0, 4.0, 0.5);
  record("volume scales like R^3", close(half.volume(), vol / 8.0, 1e-14));

  const ParabolicCylinder p = parabolic_cylinder(1.0, 4.0, 0.5);
  record("window is trailing (t_lo exclusive)",
         p.t_lo() == -0.25 && p.t_hi() == 0.0);
  record("duration R^2", p.duration() == 0.25);
  record("space-time measure", close(p.measure(), half.volume() * 0.25, 1e-14));
}

void test_masks_and_clipping() {
  const GridPtr g = make_grid(1.0, 4.0, -4.0, 4.0, 61, 161, false);
  const HollowCylinder c23 = hollow_cylinder(2.0, 3.0, 1.0);
  const RegionMask m = make_region_mask(g, c23);
  record("mask node range",
         g->r(m.i_lo) >= 2.0 - 1e-12 && g->r(m.i_hi) <= 3.0 + 1e-12 &&
             std::abs(g->z(m.j_lo)) <= 3.0 + 1e-12);
  // Trapezoid weights integrate 2*pi*r exactly, so the discrete measure of a
  // node-aligned cylinder is its analytic volume.
  record("mask weight = analytic volume",
         close(m.total_weight(), c23.volume(), 1e-12),
         qoi(m.total_weight(), c23.volume()));

  record("covered region has zero clip fraction",
         clip_fraction(*g, c23) == 0.0 && grid_covers(*g, c23));

  // r in [0.5, 4]: the slice r < 1 is outside the grid; volume fraction
  // (1 - 0.25) / (16 - 0.25).
  const HollowCylinder wide = hollow_cylinder(0.5, 4.0, 1.0);
  record("grid_covers detects clipping", !grid_covers(*g, wide));
  record("analytic clip fraction",
         close(clip_fraction(*g, wide), 0.75 / 15.75, 1e-12),
         qoi(clip_fraction(*g, wide), 0.75 / 15.75));
  expect_throw<RegionNotCovered>("clipped mask rejected by default",
                                 [&] { make_region_mask(g, wide); });
  const RegionMask mw = make_region_mask(g, wide, true);
  record("allow_clip masks the covered part",
         mw.total_weight() < wide.volume() &&
             close(mw.total_weight(), hollow_cylinder(1.0, 4.0, 1.0).volume(),
                   1e-2));

  const HollowCylinder far = hollow_cylinder(100.0, 200.0, 1.0);
  expect_throw<EmptyRegion>("mask with no nodes",
                            [&] { make_region_mask(g, far, true); });
}

void test_sigma_schedule() {
  SigmaSchedule s;
  record("sigma_0 = 1", s.sigma(0) == 1.0);
  record("sigma_1 = 7/8", s.sigma(1) == 0.875);
  record("sigma decreases to 3/4",
         s.sigma(8) > 0.75 && s.sigma(8) - 0.75 == std::pow(2.0, -10));
  const HollowCylinder c0 = s.cylinder(0, 1.0);
  record("level 0 region is C_{1,4,R}", c0.r_lo() == 1.0 && c0.r_hi() == 4.0);
  const HollowCylinder c1 = s.cylinder(1, 2.0);
  record("level regions shrink toward C_{2,3,R}",
         close(c1.r_lo(), (5.0 - 4.0 * 0.875) * 2.0, 1e-15) &&
             close(c1.r_hi(), 4.0 * 0.875 * 2.0, 1e-15));
  const ParabolicCylinder p1 = s.parabolic(1, 1.0);
  record("parabolic level keeps full window", p1.duration() == 1.0);
  expect_throw<ValidationError>("sigma index out of range",
                                [&] { s.sigma(s.i_max + 1); });
}

}  // namespace

int main() {
  return harness::run("grid and regions", [] {
    test_grid_construction();
    test_region_geometry();
    test_masks_and_clipping();
    test_sigma_schedule();
  });
}
