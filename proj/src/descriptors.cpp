// SPDX-License-Identifier: Apache-2.0
#include "lrdlab/descriptors.hpp"

#include <fftw3.h>

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "lrdlab/errors.hpp"

namespace lrd {

const char* const kVersion = "0.1.0";

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw InputError(std::string(what) + ": unknown key '" + key + "'");
}

template <class T>
T get(const Json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw InputError(std::string(what) + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string(what) + ": bad value for '" + key + "'");
  }
}

template <class T>
void maybe(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config: bad value for '") + key + "'");
  }
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

CovarianceModel model_from_json(const Json& j) {
  require_keys(j, {"family", "theta", "sigma", "alpha", "d"}, "model");
  const auto family = get<std::string>(j, "family", "model");
  const int d = get<int>(j, "d", "model");
  const double theta = get<double>(j, "theta", "model");
  CovarianceModel m;
  if (family == "cauchy") {
    m = CovarianceModel::cauchy(theta, d);
  } else if (family == "linnik") {
    m = CovarianceModel::linnik(get<double>(j, "sigma", "model"), theta, d);
  } else if (family == "local-global" || family == "local_global") {
    m = CovarianceModel::local_global(get<double>(j, "alpha", "model"), theta, d);
  } else {
    throw InputError("model: unknown family '" + family + "'");
  }
  m.validate();
  return m;
}

Json model_to_json(const CovarianceModel& model) {
  Json j = {{"family", model.family_name()}, {"theta", model.theta}, {"d", model.d}};
  if (model.family == Family::linnik) j["sigma"] = model.sigma;
  if (model.family == Family::local_global) j["alpha"] = model.alpha;
  return j;
}

DomainSet set_from_json(const Json& j) {
  require_keys(j, {"shape", "R", "d", "a", "b"}, "set");
  const auto shape = get<std::string>(j, "shape", "set");
  DomainSet s;
  if (shape == "ball") {
    s = DomainSet::ball(get<double>(j, "R", "set"), get<int>(j, "d", "set"));
  } else if (shape == "rect") {
    s = DomainSet::rect(get<std::vector<double>>(j, "a", "set"), get<std::vector<double>>(j, "b", "set"));
    if (j.contains("d") && get<int>(j, "d", "set") != s.d) throw InputError("set: d does not match the corners");
  } else {
    throw InputError("set: unknown shape '" + shape + "'");
  }
  s.validate();
  return s;
}

Json set_to_json(const DomainSet& set) {
  if (set.shape == Shape::ball) return {{"shape", "ball"}, {"R", set.R}, {"d", set.d}};
  return {{"shape", "rect"}, {"a", set.a}, {"b", set.b}};
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig c) {
  require_keys(j,
               {"model", "set", "functional", "r_grid", "replicates", "reference_size", "seed", "threads", "h", "q",
                "hermite_quad_order", "kernel_nodes", "kernel_cutoff", "kernel_angles", "reference_tail", "bootstrap",
                "out"},
               "config");
  if (j.contains("model")) c.model = model_from_json(j["model"]);
  if (j.contains("set")) c.set = set_from_json(j["set"]);
  maybe(j, "functional", c.functional);
  maybe(j, "r_grid", c.r_grid);
  maybe(j, "replicates", c.replicates);
  maybe(j, "reference_size", c.reference_size);
  maybe(j, "seed", c.seed);
  maybe(j, "threads", c.threads);
  maybe(j, "h", c.h);
  maybe(j, "q", c.q);
  maybe(j, "hermite_quad_order", c.hermite_quad_order);
  maybe(j, "kernel_nodes", c.kernel_nodes);
  maybe(j, "kernel_cutoff", c.kernel_cutoff);
  maybe(j, "kernel_angles", c.kernel_angles);
  maybe(j, "reference_tail", c.reference_tail);
  maybe(j, "bootstrap", c.bootstrap);
  maybe(j, "out", c.out);
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  return {{"model", model_to_json(c.model)},
          {"set", set_to_json(c.set)},
          {"functional", c.functional},
          {"r_grid", c.r_grid},
          {"replicates", c.replicates},
          {"reference_size", c.reference_size},
          {"seed", c.seed},
          {"threads", c.threads},
          {"h", c.h},
          {"q", c.q},
          {"hermite_quad_order", c.hermite_quad_order},
          {"kernel_nodes", c.kernel_nodes},
          {"kernel_cutoff", c.kernel_cutoff},
          {"kernel_angles", c.kernel_angles},
          {"reference_tail", c.reference_tail},
          {"bootstrap", c.bootstrap},
          {"out", c.out}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // snprintf follows LC_NUMERIC
  for (char* p = buf; *p; ++p)
    if (*p == ',') *p = '.';
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InputError("csv: empty header");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InputError("csv: row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("csv: cannot open '" + path + "' for writing");
  f << str();
  if (!f) throw InputError("csv: write to '" + path + "' failed");
}

CsvTable rho_table_csv(const RhoTable& table) {
  CsvTable csv({"r", "replicates", "rho", "rho_stderr", "kappa_bound"});
  for (const auto& row : table.rows)
    csv.add_row({format_double(row.r), std::to_string(row.replicates), format_double(row.rho),
                 format_double(row.rho_stderr), format_double(row.kappa_bound)});
  return csv;
}

Json run_manifest(const std::string& command, const Json& config, const std::vector<std::uint64_t>& seeds,
                  double wall_seconds, const Json& extra) {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["versions"] = {{"lrdlab", kVersion},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"fftw", std::string(fftw_version)},
                   {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  j["seeds"] = seeds;
  j["wall_seconds"] = wall_seconds;
  j["finished_utc"] = utc_now();
  j["protocol_note"] =
      "Monte Carlo protocol choices (lattice step, replicate counts, bootstrap errors, reference "
      "construction, seed derivation) are this tool's own; the underlying results are analytic.";
  for (const auto& [key, value] : extra.items()) j[key] = value;
  return j;
}

Json rho_table_manifest(const RhoTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) rows.push_back({{"r", row.r}, {"runtime_seconds", row.runtime_seconds}});
  return {{"C2", table.C2},
          {"alpha", table.alpha},
          {"q", table.q},
          {"upsilon", table.upsilon},
          {"kappa_bound", table.kappa_bound},
          {"row_runtimes", rows},
          {"reference",
           {{"size", table.reference.size},
            {"terms", table.reference.terms},
            {"variance_oracle", table.reference.variance_oracle},
            {"calibration", table.reference.calibration},
            {"gaussian_tail", table.reference.gaussian_tail},
            {"mode", table.reference.mode}}}};
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("json: cannot open '" + path + "' for writing");
  f << j.dump(2) << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("json: cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("json: " + path + ": " + e.what());
  }
}

}  // namespace lrd
