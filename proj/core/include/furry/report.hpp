#pragma once

#include <string>
#include <vector>

namespace furry {

struct ReportRow {
  double gamma = 0.0;
  int k = 0;
  double resolvent_distance = 0.0;
  double weighted_remainder_norm = 0.0;
  double max_eigval_error = 0.0;
  double fitted_ratio = 0.0;
};

struct ReportMetadata {
  std::string config_hash;
  long long grid_size = 0;
  int n_plus = 0;
  int n_particles = 0;
  std::string interaction = "monopole";
  std::string created;  // ISO-8601, JSON only
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  ReportMetadata meta;

  // Sort by (gamma, k).
  void sort_rows();
  // Throws InvalidArgument unless rows are sorted, finite and non-negative.
  void validate() const;
};

std::string report_to_csv(const ConvergenceReport& r);
ConvergenceReport report_from_csv(const std::string& text);

std::string report_to_json(const ConvergenceReport& r);
ConvergenceReport report_from_json(const std::string& text);

// Current UTC time, ISO-8601.
std::string utc_timestamp();

}  // namespace furry
