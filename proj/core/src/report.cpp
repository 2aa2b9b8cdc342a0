#include "furry/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

#include "furry/error.hpp"

namespace furry {
namespace {

const char* kHeader = "gamma,k,resolvent_distance,weighted_remainder_norm,max_eigval_error,fitted_ratio";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

double parse_double(const std::string& s) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("report: bad number '" + s + "'");
  }
  if (pos != s.size()) throw InvalidArgument("report: bad number '" + s + "'");
  return v;
}

}  // namespace

void ConvergenceReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.k < b.k;
  });
}

void ConvergenceReport::validate() const {
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    for (double v : {r.gamma, r.resolvent_distance, r.weighted_remainder_norm, r.max_eigval_error, r.fitted_ratio}) {
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "report: row " << i << " has a negative or non-finite value";
        throw InvalidArgument(os.str());
      }
    }
    if (r.k < 0) throw InvalidArgument("report: negative k");
    if (i > 0) {
      const auto& p = rows[i - 1];
      if (p.gamma > r.gamma || (p.gamma == r.gamma && p.k >= r.k))
        throw InvalidArgument("report: rows not sorted by (gamma, k)");
    }
  }
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "# config_hash=" << r.meta.config_hash << " grid_size=" << r.meta.grid_size << " n_plus=" << r.meta.n_plus
     << " n_particles=" << r.meta.n_particles << " interaction=" << r.meta.interaction << "\n";
  os << kHeader << "\n";
  for (const auto& row : r.rows) {
    os << fmt_double(row.gamma) << ',' << row.k << ',' << fmt_double(row.resolvent_distance) << ','
       << fmt_double(row.weighted_remainder_norm) << ',' << fmt_double(row.max_eigval_error) << ','
       << fmt_double(row.fitted_ratio) << "\n";
  }
  return os.str();
}

ConvergenceReport report_from_csv(const std::string& text) {
  ConvergenceReport r;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string tok;
      while (ms >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "config_hash") r.meta.config_hash = val;
        else if (key == "grid_size") r.meta.grid_size = std::stoll(val);
        else if (key == "n_plus") r.meta.n_plus = std::stoi(val);
        else if (key == "n_particles") r.meta.n_particles = std::stoi(val);
        else if (key == "interaction") r.meta.interaction = val;
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) throw InvalidArgument("report: unexpected CSV header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw InvalidArgument("report: expected 6 columns in '" + line + "'");
    ReportRow row;
    row.gamma = parse_double(f[0]);
    row.k = std::stoi(f[1]);
    row.resolvent_distance = parse_double(f[2]);
    row.weighted_remainder_norm = parse_double(f[3]);
    row.max_eigval_error = parse_double(f[4]);
    row.fitted_ratio = parse_double(f[5]);
    r.rows.push_back(row);
  }
  if (!header_seen) throw InvalidArgument("report: missing CSV header");
  r.validate();
  return r;
}

std::string report_to_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["metadata"] = {{"config_hash", r.meta.config_hash},
                   {"grid_size", r.meta.grid_size},
                   {"n_plus", r.meta.n_plus},
                   {"n_particles", r.meta.n_particles},
                   {"interaction", r.meta.interaction},
                   {"created", r.meta.created}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"gamma", row.gamma},
                    {"k", row.k},
                    {"resolvent_distance", row.resolvent_distance},
                    {"weighted_remainder_norm", row.weighted_remainder_norm},
                    {"max_eigval_error", row.max_eigval_error},
                    {"fitted_ratio", row.fitted_ratio}});
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

ConvergenceReport report_from_json(const std::string& text) {
  ConvergenceReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& m = j.at("metadata");
    r.meta.config_hash = m.at("config_hash").get<std::string>();
    r.meta.grid_size = m.at("grid_size").get<long long>();
    r.meta.n_plus = m.at("n_plus").get<int>();
    r.meta.n_particles = m.at("n_particles").get<int>();
    r.meta.interaction = m.at("interaction").get<std::string>();
    r.meta.created = m.value("created", "");
    for (const auto& row : j.at("rows")) {
      ReportRow x;
      x.gamma = row.at("gamma").get<double>();
      x.k = row.at("k").get<int>();
      x.resolvent_distance = row.at("resolvent_distance").get<double>();
      x.weighted_remainder_norm = row.at("weighted_remainder_norm").get<double>();
      x.max_eigval_error = row.at("max_eigval_error").get<double>();
      x.fitted_ratio = row.at("fitted_ratio").get<double>();
      r.rows.push_back(x);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report: bad JSON: ") + e.what());
  }
  r.validate();
  return r;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace furry
