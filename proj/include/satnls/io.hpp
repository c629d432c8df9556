#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "satnls/grid.hpp"
#include "satnls/linearization.hpp"
#include "satnls/model.hpp"
#include "satnls/stationary.hpp"

namespace satnls {

/// Numeric CSV with one header row; lines starting with '#' are kept as
/// comments.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;

  /// Throws Error if the column is absent.
  std::vector<double> column(const std::string& name) const;
};

Table read_table(const std::string& path);

/// x,u,xi on every node.
void write_fields_csv(const std::string& path, const Grid& grid, std::span<const double> u,
                      std::span<const double> xi, const std::string& header_comment);

void write_json(const std::string& path, const nlohmann::ordered_json& j);
nlohmann::json read_json(const std::string& path);

nlohmann::ordered_json to_json(const AuditReport& report);
nlohmann::ordered_json to_json(const SpectrumReport& report);
/// lambda, residual, decay_ratio, mass
nlohmann::ordered_json to_json(const StandingWave& wave);

}  // namespace satnls
