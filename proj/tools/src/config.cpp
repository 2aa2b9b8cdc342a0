#include "furry_cli/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace furry::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& val, int line) {
  std::ostringstream os;
  os << "config line " << line << ": bad value '" << val << "' for " << key;
  throw ConfigError(os.str());
}

double to_double(const std::string& key, const std::string& val, int line) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(val, &pos);
  } catch (const std::exception&) {
    bad_value(key, val, line);
  }
  if (pos != val.size() || !std::isfinite(v)) bad_value(key, val, line);
  return v;
}

long long to_int(const std::string& key, const std::string& val, int line) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(val, &pos);
  } catch (const std::exception&) {
    bad_value(key, val, line);
  }
  if (pos != val.size()) bad_value(key, val, line);
  return v;
}

bool to_bool(const std::string& key, const std::string& val, int line) {
  if (val == "true" || val == "1") return true;
  if (val == "false" || val == "0") return false;
  bad_value(key, val, line);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << line << ": expected key = value";
      throw ConfigError(os.str());
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key == "grid.kappa") c.grid.kappa = static_cast<int>(to_int(key, val, line));
    else if (key == "grid.n") c.grid.n = static_cast<int>(to_int(key, val, line));
    else if (key == "grid.map_scale") c.grid.map_scale = to_double(key, val, line);
    else if (key == "gamma_list") {
      c.gamma_list.clear();
      std::istringstream ls(val);
      std::string item;
      while (std::getline(ls, item, ',')) {
        item = trim(item);
        if (item.empty()) bad_value(key, val, line);
        c.gamma_list.push_back(to_double(key, item, line));
      }
    } else if (key == "series_order") c.series_order = static_cast<int>(to_int(key, val, line));
    else if (key == "contour.m_nodes") c.contour.m_nodes = static_cast<int>(to_int(key, val, line));
    else if (key == "contour.margin") c.contour.margin = to_double(key, val, line);
    else if (key == "nbody.n_particles") c.nbody.n_particles = static_cast<int>(to_int(key, val, line));
    else if (key == "nbody.z_charge") c.nbody.z_charge = to_double(key, val, line);
    else if (key == "nbody.n_plus") c.nbody.n_plus = static_cast<int>(to_int(key, val, line));
    else if (key == "nbody.antisymmetrize") c.nbody.antisymmetrize = to_bool(key, val, line);
    else if (key == "tolerances.tol_gap") c.tolerances.tol_gap = to_double(key, val, line);
    else if (key == "tolerances.tol_diag") c.tolerances.tol_diag = to_double(key, val, line);
    else if (key == "output_dir") c.output_dir = val;
    else if (key == "seed") c.seed = to_int(key, val, line);
    else {
      std::ostringstream os;
      os << "config line " << line << ": unknown key '" << key << "'";
      throw ConfigError(os.str());
    }
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
  if (c.grid.kappa == 0) fail("grid.kappa must be nonzero");
  if (c.grid.n < 8) fail("grid.n must be >= 8");
  if (!(c.grid.map_scale > 0.0)) fail("grid.map_scale must be positive");
  for (double g : c.gamma_list)
    if (!(g >= 0.0 && g < 0.6)) fail("gamma " + fmt(g) + " outside the supported range [0, 0.6)");
  if (c.series_order < 1) fail("series_order must be >= 1");
  if (c.contour.m_nodes < 16 || c.contour.m_nodes % 2 != 0) fail("contour.m_nodes must be even and >= 16");
  if (!(c.contour.margin > 0.0)) fail("contour.margin must be positive");
  if (c.nbody.n_particles < 1) fail("nbody.n_particles must be >= 1");
  if (!(c.nbody.z_charge > 0.0)) fail("nbody.z_charge must be positive");
  if (c.nbody.n_plus < 1) fail("nbody.n_plus must be >= 1");
  if (!(c.tolerances.tol_gap > 0.0)) fail("tolerances.tol_gap must be positive");
  if (!(c.tolerances.tol_diag > 0.0)) fail("tolerances.tol_diag must be positive");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid.kappa = " << c.grid.kappa << "\n";
  os << "grid.n = " << c.grid.n << "\n";
  os << "grid.map_scale = " << fmt(c.grid.map_scale) << "\n";
  os << "gamma_list = ";
  for (size_t i = 0; i < c.gamma_list.size(); ++i) os << (i ? "," : "") << fmt(c.gamma_list[i]);
  os << "\n";
  os << "series_order = " << c.series_order << "\n";
  os << "contour.m_nodes = " << c.contour.m_nodes << "\n";
  os << "contour.margin = " << fmt(c.contour.margin) << "\n";
  os << "nbody.n_particles = " << c.nbody.n_particles << "\n";
  os << "nbody.z_charge = " << fmt(c.nbody.z_charge) << "\n";
  os << "nbody.n_plus = " << c.nbody.n_plus << "\n";
  os << "nbody.antisymmetrize = " << (c.nbody.antisymmetrize ? "true" : "false") << "\n";
  os << "tolerances.tol_gap = " << fmt(c.tolerances.tol_gap) << "\n";
  os << "tolerances.tol_diag = " << fmt(c.tolerances.tol_diag) << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical_config(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace furry::cli
