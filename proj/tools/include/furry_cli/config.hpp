#pragma once

#include <string>
#include <vector>

#include "furry/error.hpp"

namespace furry::cli {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct RunConfig {
  struct Grid {
    int kappa = -1;
    int n = 200;
    double map_scale = 1.0;
  } grid;
  std::vector<double> gamma_list{0.1, 0.2, 0.3};
  int series_order = 12;
  struct Contour {
    int m_nodes = 64;
    double margin = 0.5;
  } contour;
  struct NBody {
    int n_particles = 2;
    double z_charge = 2.0;
    int n_plus = 20;
    bool antisymmetrize = false;
  } nbody;
  struct Tolerances {
    double tol_gap = 1e-3;
    double tol_diag = 1e-4;
  } tolerances;
  std::string output_dir = "out";
  long long seed = 0;
};

// Flat "key = value" lines with dotted keys (grid.n, nbody.n_plus, ...);
// '#' starts a comment; gamma_list is a comma separated list. Unknown keys,
// malformed values and out-of-range settings raise ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

void validate_config(const RunConfig& cfg);

// Every setting that influences numbers, one "key = value" per line.
std::string canonical_config(const RunConfig& cfg);
// FNV-1a 64 of canonical_config, 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace furry::cli
