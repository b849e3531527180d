#pragma once
/// @file config.hpp
/// @brief Run configuration: strict key=value schema, normalized dumps, and
///        the wiring from a parsed config to grid / initial data / evolver.
///
/// File format: one `key = value` pair per line, `#` starts a comment,
/// blank lines ignored. Every key outside the schema is a parse error, and
/// each key may appear at most once. Seeds are always explicit so that runs
/// are reproducible byte for byte.
///
/// Schema (defaults in parentheses):
///   grid.r_min (1), grid.r_max (4), grid.z_min (-4), grid.z_max (4)
///   grid.n_r (128), grid.n_z (256), grid.periodic_z (false)
///   evolution.initial   reference | wide | zero | manufactured (reference)
///   evolution.boundary  dirichlet-frozen | periodic-z (dirichlet-frozen)
///   evolution.dt_rule   cfl | fixed (cfl)
///   evolution.dt_fixed  (0; required positive when dt_rule = fixed)
///   evolution.cfl_safety (0.5), evolution.t_end (0.5)
///   evolution.cadence (0.015625), evolution.upwind (false)
///   evolution.forcing   none | manufactured (none)
///   verification.radii  comma-separated positives (0.25,0.5,1)
///   verification.ladder_depth (8), verification.ratio_ceiling (1e6)
///   verification.family_size (50), verification.family_seed (20260816)
///   output.dir (out)

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "axns/evolution.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"

namespace axns {

struct RunConfig {
  double r_min = 1.0, r_max = 4.0, z_min = -4.0, z_max = 4.0;
  std::size_t n_r = 128, n_z = 256;
  bool periodic_z = false;

  std::string initial = "reference";
  BoundaryMode boundary = BoundaryMode::kDirichletFrozen;
  DtRule dt_rule = DtRule::kCfl;
  double dt_fixed = 0.0;
  double cfl_safety = 0.5;
  double t_end = 0.5;
  double cadence = 0.015625;
  bool upwind = false;
  std::string forcing = "none";

  std::vector<double> radii = {0.25, 0.5, 1.0};
  int ladder_depth = 8;
  double ratio_ceiling = 1e6;
  int family_size = 50;
  std::uint64_t family_seed = 20260816;

  std::string output_dir = "out";
};

/// Parse config text. Unknown or repeated keys and malformed lines raise
/// ParseError (with line number and key); range violations raise
/// ValidationError keyed by the dotted name.
RunConfig parse_config_text(const std::string& text);

/// Parse a config file. IoError when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Normalized dump: every key in schema order at full precision.
/// load(dump(load(x))) == load(x).
std::string dump_config(const RunConfig& cfg);

void save_config(const RunConfig& cfg, const std::string& path);

/// Grid described by the grid block.
GridPtr make_grid_from(const RunConfig& cfg);

/// Initial (gamma, omega) fields for the configured profile on the grid.
std::pair<ScalarField, ScalarField> make_initial(const RunConfig& cfg,
                                                 const GridPtr& grid);

/// Evolution settings (boundary, dt rule, cadence, forcing hooks).
EvolutionConfig make_evolution_config(const RunConfig& cfg);

}  // namespace axns
