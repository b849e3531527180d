#pragma once
/// @file checkpoint.hpp
/// @brief Binary state checkpoints, trajectory persistence, and the
///        diagnostics CSV writer. Everything here is deterministic: the same
///        inputs produce byte-identical files.
///
/// Checkpoint layout (little-endian throughout):
///   magic "AXNS" (4 bytes) | u32 version = 1 | u64 n_r | u64 n_z
///   | f64 r_min, r_max, z_min, z_max | u8 periodic_z | f64 time
///   | gamma as row-major (r-major) f64 array | omega likewise.

#include <string>
#include <vector>

#include "axns/evolution.hpp"
#include "axns/field.hpp"
#include "axns/grid.hpp"

namespace axns {

/// Write (t, gamma, omega) of the state. Caches are derived data and are not
/// stored. Throws IoError when the file cannot be created or written.
void write_checkpoint(const SwirlState& state, const std::string& path);

/// Read a checkpoint, reconstructing the grid from the header. The returned
/// state has stale caches (caches_fresh = false).
/// Throws BadMagic / VersionMismatch / TruncatedFile / IoError.
SwirlState read_checkpoint(const std::string& path);

/// Read a checkpoint that must live on the given grid (same dims, extents,
/// and periodicity); the returned fields reference `grid` itself so they can
/// feed an Evolver bound to it. Throws ShapeMismatch on any header
/// disagreement.
SwirlState read_checkpoint(const std::string& path, const GridPtr& grid);

/// Diagnostics CSV: fixed header
///   time,sup_abs_gamma,l2_gamma,l4_gamma,kinetic_energy,
///   sup_abs_omega_theta,sup_abs_r_vtheta
/// one row per record, every number at 17 significant digits.
void emit_diagnostics(const std::vector<DiagnosticsRecord>& records,
                      const std::string& path);

/// Persist a trajectory under `dir`:
///   dir/meta.txt          key=value run metadata
///   dir/diagnostics.csv   emit_diagnostics output
///   dir/slices/slice_NNNNNN.axns   one checkpoint per stored slice.
void save_trajectory(const Trajectory& traj, const std::string& dir);

/// Load a trajectory saved by save_trajectory. The grid comes from the first
/// slice; remaining slices must match it. Stored diagnostics are not parsed
/// back (checks recompute everything from the slices).
Trajectory load_trajectory(const std::string& dir);

}  // namespace axns
