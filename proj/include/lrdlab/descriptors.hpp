// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON descriptors for models, windows and experiment configs, plus the CSV
// and run-manifest writers used by the command-line tool.

#include <string>
#include <vector>

#include "json.hpp"
#include "lrdlab/covmodels.hpp"
#include "lrdlab/experiment.hpp"
#include "lrdlab/geometry.hpp"

namespace lrd {

using Json = nlohmann::json;

/// {"family":"cauchy","theta":0.2,"d":1}, {"family":"linnik","sigma":..,"theta":..,"d":..},
/// {"family":"local-global","alpha":..,"theta":..,"d":..}. Throws InputError.
CovarianceModel model_from_json(const Json& j);
Json model_to_json(const CovarianceModel& model);

/// {"shape":"ball","R":1.0,"d":2} or {"shape":"rect","a":[-1],"b":[1]}.
DomainSet set_from_json(const Json& j);
Json set_to_json(const DomainSet& set);

/// Keys missing from j keep the values of base. Unknown keys are an InputError.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});
Json config_to_json(const ExperimentConfig& config);

/// Round-trip formatting ("%.17g"), independent of the locale.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable rho_table_csv(const RhoTable& table);

/// config echo, version, command, seeds and wall time; extra keys are merged in.
Json run_manifest(const std::string& command, const Json& config, const std::vector<std::uint64_t>& seeds,
                  double wall_seconds, const Json& extra = Json::object());
Json rho_table_manifest(const RhoTable& table);

void write_json(const Json& j, const std::string& path);
Json read_json_file(const std::string& path);

extern const char* const kVersion;

}  // namespace lrd
