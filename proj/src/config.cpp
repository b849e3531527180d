/// @file config.cpp
/// @brief Strict key=value config parsing and normalized dumps.

#include "axns/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "axns/errors.hpp"
#include "axns/initial_data.hpp"
#include "axns/manufactured.hpp"

namespace axns {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("expected a number, got '" + v + "'", line, key);
  return x;
}

std::size_t parse_size(const std::string& v, int line,
                       const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("expected a non-negative integer, got '" + v + "'",
                     line, key);
  return static_cast<std::size_t>(x);
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ParseError("expected true or false, got '" + v + "'", line, key);
}

std::vector<double> parse_radii(const std::string& v, int line,
                                const std::string& key) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ','))
    out.push_back(parse_double(trim(item), line, key));
  if (out.empty())
    throw ParseError("expected a comma-separated list", line, key);
  return out;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void validate(const RunConfig& c) {
  if (!(c.r_min > 0.0))
    throw ValidationError("axis excluded: r_min must be positive",
                          "grid.r_min");
  if (!(c.r_max > c.r_min))
    throw ValidationError("r_max must exceed r_min", "grid.r_max");
  if (!(c.z_max > c.z_min))
    throw ValidationError("z_max must exceed z_min", "grid.z_max");
  if (c.initial != "reference" && c.initial != "wide" && c.initial != "zero" &&
      c.initial != "manufactured")
    throw ValidationError("unknown initial profile '" + c.initial + "'",
                          "evolution.initial");
  if (c.forcing != "none" && c.forcing != "manufactured")
    throw ValidationError("unknown forcing '" + c.forcing + "'",
                          "evolution.forcing");
  if ((c.boundary == BoundaryMode::kPeriodicZ) != c.periodic_z)
    throw ValidationError(
        "boundary mode and grid.periodic_z must agree",
        "evolution.boundary");
  if (c.dt_rule == DtRule::kFixed && !(c.dt_fixed > 0.0))
    throw ValidationError("dt_fixed must be positive when dt_rule = fixed",
                          "evolution.dt_fixed");
  if (!(c.cfl_safety > 0.0) || c.cfl_safety > 1.0)
    throw ValidationError("cfl_safety must lie in (0, 1]",
                          "evolution.cfl_safety");
  if (!(c.t_end > 0.0))
    throw ValidationError("t_end must be positive", "evolution.t_end");
  if (!(c.cadence > 0.0))
    throw ValidationError("cadence must be positive", "evolution.cadence");
  for (double r : c.radii)
    if (!(r > 0.0))
      throw ValidationError("radii must be positive", "verification.radii");
  if (c.ladder_depth < 1)
    throw ValidationError("ladder_depth must be at least 1",
                          "verification.ladder_depth");
  if (!(c.ratio_ceiling > 0.0))
    throw ValidationError("ratio_ceiling must be positive",
                          "verification.ratio_ceiling");
  if (c.family_size < 1)
    throw ValidationError("family_size must be at least 1",
                          "verification.family_size");
  if (c.output_dir.empty())
    throw ValidationError("output.dir must not be empty", "output.dir");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw
                                                      : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no, line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ParseError("empty key or value", line_no, key);
    if (!seen.insert(key).second)
      throw ParseError("key appears more than once", line_no, key);

    if (key == "grid.r_min") c.r_min = parse_double(val, line_no, key);
    else if (key == "grid.r_max") c.r_max = parse_double(val, line_no, key);
    else if (key == "grid.z_min") c.z_min = parse_double(val, line_no, key);
    else if (key == "grid.z_max") c.z_max = parse_double(val, line_no, key);
    else if (key == "grid.n_r") c.n_r = parse_size(val, line_no, key);
    else if (key == "grid.n_z") c.n_z = parse_size(val, line_no, key);
    else if (key == "grid.periodic_z")
      c.periodic_z = parse_bool(val, line_no, key);
    else if (key == "evolution.initial") c.initial = val;
    else if (key == "evolution.boundary") {
      if (val == "dirichlet-frozen")
        c.boundary = BoundaryMode::kDirichletFrozen;
      else if (val == "periodic-z")
        c.boundary = BoundaryMode::kPeriodicZ;
      else
        throw ParseError("expected dirichlet-frozen or periodic-z", line_no,
                         key);
    } else if (key == "evolution.dt_rule") {
      if (val == "cfl") c.dt_rule = DtRule::kCfl;
      else if (val == "fixed") c.dt_rule = DtRule::kFixed;
      else throw ParseError("expected cfl or fixed", line_no, key);
    } else if (key == "evolution.dt_fixed")
      c.dt_fixed = parse_double(val, line_no, key);
    else if (key == "evolution.cfl_safety")
      c.cfl_safety = parse_double(val, line_no, key);
    else if (key == "evolution.t_end")
      c.t_end = parse_double(val, line_no, key);
    else if (key == "evolution.cadence")
      c.cadence = parse_double(val, line_no, key);
    else if (key == "evolution.upwind")
      c.upwind = parse_bool(val, line_no, key);
    else if (key == "evolution.forcing") c.forcing = val;
    else if (key == "verification.radii")
      c.radii = parse_radii(val, line_no, key);
    else if (key == "verification.ladder_depth")
      c.ladder_depth = static_cast<int>(parse_size(val, line_no, key));
    else if (key == "verification.ratio_ceiling")
      c.ratio_ceiling = parse_double(val, line_no, key);
    else if (key == "verification.family_size")
      c.family_size = static_cast<int>(parse_size(val, line_no, key));
    else if (key == "verification.family_seed")
      c.family_seed = parse_size(val, line_no, key);
    else if (key == "output.dir") c.output_dir = val;
    else throw ParseError("unknown key", line_no, key);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid.r_min = " << fmt17(c.r_min) << '\n';
  os << "grid.r_max = " << fmt17(c.r_max) << '\n';
  os << "grid.z_min = " << fmt17(c.z_min) << '\n';
  os << "grid.z_max = " << fmt17(c.z_max) << '\n';
  os << "grid.n_r = " << c.n_r << '\n';
  os << "grid.n_z = " << c.n_z << '\n';
  os << "grid.periodic_z = " << (c.periodic_z ? "true" : "false") << '\n';
  os << "evolution.initial = " << c.initial << '\n';
  os << "evolution.boundary = "
     << (c.boundary == BoundaryMode::kPeriodicZ ? "periodic-z"
                                                : "dirichlet-frozen")
     << '\n';
  os << "evolution.dt_rule = "
     << (c.dt_rule == DtRule::kFixed ? "fixed" : "cfl") << '\n';
  os << "evolution.dt_fixed = " << fmt17(c.dt_fixed) << '\n';
  os << "evolution.cfl_safety = " << fmt17(c.cfl_safety) << '\n';
  os << "evolution.t_end = " << fmt17(c.t_end) << '\n';
  os << "evolution.cadence = " << fmt17(c.cadence) << '\n';
  os << "evolution.upwind = " << (c.upwind ? "true" : "false") << '\n';
  os << "evolution.forcing = " << c.forcing << '\n';
  os << "verification.radii = ";
  for (std::size_t i = 0; i < c.radii.size(); ++i)
    os << (i ? "," : "") << fmt17(c.radii[i]);
  os << '\n';
  os << "verification.ladder_depth = " << c.ladder_depth << '\n';
  os << "verification.ratio_ceiling = " << fmt17(c.ratio_ceiling) << '\n';
  os << "verification.family_size = " << c.family_size << '\n';
  os << "verification.family_seed = " << c.family_seed << '\n';
  os << "output.dir = " << c.output_dir << '\n';
  return os.str();
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot create config file: " + path);
  os << dump_config(c);
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

GridPtr make_grid_from(const RunConfig& c) {
  return make_grid(c.r_min, c.r_max, c.z_min, c.z_max, c.n_r, c.n_z,
                   c.periodic_z);
}

std::pair<ScalarField, ScalarField> make_initial(const RunConfig& c,
                                                 const GridPtr& grid) {
  if (c.initial == "reference")
    return {sample_field(grid, reference_gamma0), ScalarField(grid)};
  if (c.initial == "wide")
    return {sample_field(grid, wide_gamma0), ScalarField(grid)};
  if (c.initial == "zero") return {ScalarField(grid), ScalarField(grid)};
  // manufactured
  auto at0 = [](double (*f)(double, double, double)) {
    return [f](double r, double z) { return f(r, z, 0.0); };
  };
  return {sample_field(grid, at0(&ManufacturedFlow::gamma)),
          sample_field(grid, at0(&ManufacturedFlow::omega))};
}

EvolutionConfig make_evolution_config(const RunConfig& c) {
  EvolutionConfig ec;
  ec.boundary = c.boundary;
  ec.dt_rule = c.dt_rule;
  ec.cfl_safety = c.cfl_safety;
  ec.dt_fixed = c.dt_fixed;
  ec.t_end = c.t_end;
  ec.cadence = c.cadence;
  ec.upwind = c.upwind;
  if (c.forcing == "manufactured") {
    ec.source_gamma = &ManufacturedFlow::source_gamma;
    ec.source_omega = &ManufacturedFlow::source_omega;
  }
  return ec;
}

}  // namespace axns
