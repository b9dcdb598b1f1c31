#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "migstock/panel.hpp"

namespace migstock {

/// Matrix of logged historical age schedules: one row per (region, year)
/// with at least one survey observation, one column per age group.
struct LogScheduleMatrix {
  Eigen::MatrixXd values;                      // N x G, log proportions
  std::vector<std::pair<int, int>> rows;       // (region index, year)
  std::vector<std::string> region_codes;
  std::vector<std::string> age_labels;         // size G
  std::vector<std::uint8_t> missing;           // N*G row-major mask

  bool is_missing(int r, int c) const { return missing[r * values.cols() + c] != 0; }
  bool complete() const;
};

LogScheduleMatrix build_log_matrix(const MigrantPanel& panel, int year_from, int year_to);

/// Fill missing cells with the mean of the observed entries in the same
/// (region, age) series, falling back to the column mean. The mask is kept
/// so imputed cells never enter a likelihood.
LogScheduleMatrix impute_missing(const LogScheduleMatrix& matrix);

/// First two right-singular vectors of the schedule matrix, deterministic
/// sign convention: sum of z1 <= 0, last entry of z2 >= 0.
struct PrincipalComponents {
  Eigen::VectorXd z1, z2;
  double singular1 = 0.0, singular2 = 0.0;
  std::vector<std::string> age_labels;

  nlohmann::json to_json() const;
  static PrincipalComponents from_json(const nlohmann::json& j);
};

PrincipalComponents compute_components(const LogScheduleMatrix& matrix);

}  // namespace migstock
