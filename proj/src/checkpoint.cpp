/// @file checkpoint.cpp
/// @brief Binary checkpoint, trajectory directory, and CSV implementations.

#include "axns/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "axns/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace axns {

namespace {

constexpr char kMagic[4] = {'A', 'X', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void put(std::ofstream& os, T x) {
  put_bytes(os, &x, sizeof(T));
}

void get_bytes(std::ifstream& is, void* p, std::size_t n,
               const std::string& path) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n)
    throw TruncatedFile("checkpoint ends early: " + path);
}

template <typename T>
T get(std::ifstream& is, const std::string& path) {
  T x;
  get_bytes(is, &x, sizeof(T), path);
  return x;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string slice_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "slice_%06zu.axns", k);
  return buf;
}

struct Header {
  std::uint64_t n_r = 0, n_z = 0;
  double r_min = 0, r_max = 0, z_min = 0, z_max = 0;
  bool periodic_z = false;
  double time = 0;
};

Header read_header(std::ifstream& is, const std::string& path) {
  char magic[4];
  get_bytes(is, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw BadMagic("not a checkpoint file: " + path);
  const auto version = get<std::uint32_t>(is, path);
  if (version != kVersion) {
    std::ostringstream os;
    os << "checkpoint version " << version << " (reader handles "
       << kVersion << "): " << path;
    throw VersionMismatch(os.str());
  }
  Header h;
  h.n_r = get<std::uint64_t>(is, path);
  h.n_z = get<std::uint64_t>(is, path);
  h.r_min = get<double>(is, path);
  h.r_max = get<double>(is, path);
  h.z_min = get<double>(is, path);
  h.z_max = get<double>(is, path);
  h.periodic_z = get<std::uint8_t>(is, path) != 0;
  h.time = get<double>(is, path);
  return h;
}

void read_array(std::ifstream& is, ScalarField& f, const std::string& path) {
  get_bytes(is, f.v.data(), f.v.size() * sizeof(double), path);
}

SwirlState read_body(std::ifstream& is, const Header& h, const GridPtr& grid,
                     const std::string& path) {
  SwirlState s;
  s.t = h.time;
  s.gamma = ScalarField(grid);
  s.omega = ScalarField(grid);
  read_array(is, s.gamma, path);
  read_array(is, s.omega, path);
  s.caches_fresh = false;
  return s;
}

}  // namespace

void write_checkpoint(const SwirlState& state, const std::string& path) {
  if (!state.gamma.grid)
    throw ValidationError("state has no grid attached", "checkpoint.state");
  require_same_grid(state.gamma, state.omega);
  const AnnularGrid& g = *state.gamma.grid;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot create checkpoint file: " + path);
  put_bytes(os, kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, g.n_r);
  put<std::uint64_t>(os, g.n_z);
  put<double>(os, g.r_min);
  put<double>(os, g.r_max);
  put<double>(os, g.z_min);
  put<double>(os, g.z_max);
  put<std::uint8_t>(os, g.periodic_z ? 1 : 0);
  put<double>(os, state.t);
  put_bytes(os, state.gamma.v.data(), state.gamma.v.size() * sizeof(double));
  put_bytes(os, state.omega.v.data(), state.omega.v.size() * sizeof(double));
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

SwirlState read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint file: " + path);
  const Header h = read_header(is, path);
  const GridPtr grid = make_grid(h.r_min, h.r_max, h.z_min, h.z_max,
                                 h.n_r, h.n_z, h.periodic_z);
  return read_body(is, h, grid, path);
}

SwirlState read_checkpoint(const std::string& path, const GridPtr& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint file: " + path);
  const Header h = read_header(is, path);
  const AnnularGrid& g = *grid;
  const bool same = h.n_r == g.n_r && h.n_z == g.n_z &&
                    h.r_min == g.r_min && h.r_max == g.r_max &&
                    h.z_min == g.z_min && h.z_max == g.z_max &&
                    h.periodic_z == g.periodic_z;
  if (!same)
    throw ShapeMismatch("checkpoint grid differs from the expected grid: " +
                        path);
  return read_body(is, h, grid, path);
}

void emit_diagnostics(const std::vector<DiagnosticsRecord>& records,
                      const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot create diagnostics file: " + path);
  os << "time,sup_abs_gamma,l2_gamma,l4_gamma,kinetic_energy,"
        "sup_abs_omega_theta,sup_abs_r_vtheta\n";
  for (const DiagnosticsRecord& d : records) {
    os << fmt17(d.time) << ',' << fmt17(d.sup_abs_gamma) << ','
       << fmt17(d.l2_gamma) << ',' << fmt17(d.l4_gamma) << ','
       << fmt17(d.kinetic_energy) << ',' << fmt17(d.sup_abs_omega_theta)
       << ',' << fmt17(d.sup_abs_r_vtheta) << '\n';
  }
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

void save_trajectory(const Trajectory& traj, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "slices", ec);
  if (ec) throw IoError("cannot create trajectory directory: " + dir);

  {
    std::ofstream os(fs::path(dir) / "meta.txt", std::ios::trunc);
    if (!os) throw IoError("cannot create meta file in: " + dir);
    os << "boundary="
       << (traj.boundary == BoundaryMode::kPeriodicZ ? "periodic-z"
                                                     : "dirichlet-frozen")
       << '\n';
    os << "t_end=" << fmt17(traj.t_end) << '\n';
    os << "cadence=" << fmt17(traj.cadence) << '\n';
    os << "s0=" << fmt17(traj.s0) << '\n';
    os << "n_slices=" << traj.slices() << '\n';
    os << "error=" << traj.error << '\n';
    os.flush();
    if (!os) throw IoError("write failed: meta.txt in " + dir);
  }

  emit_diagnostics(traj.diagnostics,
                   (fs::path(dir) / "diagnostics.csv").string());

  for (std::size_t k = 0; k < traj.slices(); ++k) {
    SwirlState s;
    s.t = traj.times[k];
    s.gamma = traj.gamma[k];
    s.omega = traj.omega[k];
    write_checkpoint(s, (fs::path(dir) / "slices" / slice_name(k)).string());
  }
}

Trajectory load_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  const std::string meta_path = (fs::path(dir) / "meta.txt").string();
  std::ifstream is(meta_path);
  if (!is) throw IoError("cannot open trajectory meta file: " + meta_path);

  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value in meta.txt", line_no, line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const char* key :
       {"boundary", "t_end", "cadence", "s0", "n_slices", "error"})
    if (!kv.count(key))
      throw ParseError("missing key in meta.txt", 0, key);

  Trajectory traj;
  if (kv["boundary"] == "periodic-z")
    traj.boundary = BoundaryMode::kPeriodicZ;
  else if (kv["boundary"] == "dirichlet-frozen")
    traj.boundary = BoundaryMode::kDirichletFrozen;
  else
    throw ParseError("unknown boundary mode in meta.txt", 0, kv["boundary"]);
  traj.t_end = std::stod(kv["t_end"]);
  traj.cadence = std::stod(kv["cadence"]);
  traj.s0 = std::stod(kv["s0"]);
  traj.error = kv["error"];
  const std::size_t n_slices = std::stoul(kv["n_slices"]);

  for (std::size_t k = 0; k < n_slices; ++k) {
    const std::string path =
        (fs::path(dir) / "slices" / slice_name(k)).string();
    SwirlState s = traj.grid ? read_checkpoint(path, traj.grid)
                             : read_checkpoint(path);
    if (!traj.grid) traj.grid = s.gamma.grid;
    traj.times.push_back(s.t);
    traj.gamma.push_back(std::move(s.gamma));
    traj.omega.push_back(std::move(s.omega));
  }
  return traj;
}

}  // namespace axns
