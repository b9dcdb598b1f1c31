#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "migstock/model.hpp"

namespace migstock {

/// Cell predictions keyed by (age index, region code).
using Predictions = std::map<std::pair<int, std::string>, double>;

/// Mean of the last `window` observed survey proportions before the holdout
/// year, per (age, region) series. Cells with fewer observations are
/// skipped and counted.
Predictions moving_average_forecast(const MigrantPanel& survey, int holdout_year, int window = 3,
                                    int* skipped = nullptr);

/// exp of the mean adjusted log proportion across waves in the holdout year.
Predictions social_only_forecast(const std::vector<AdjustedObservation>& adjusted,
                                 int holdout_year, int* skipped = nullptr);

/// Root mean squared error over the matched cells of the two maps.
double rmse(const Predictions& predictions, const Predictions& truth);

struct ValidationReport {
  int holdout_year = 0;
  int n_cells = 0;  // common-support cells evaluated for every model
  std::map<std::string, double> overall;
  std::map<std::string, std::map<std::string, double>> by_age;     // model -> age label
  std::map<std::string, std::map<std::string, double>> by_region;  // model -> region code
  std::map<std::string, int> age_cells;                            // cells per age stratum
  std::map<std::string, int> region_cells;
  std::map<std::string, int> skipped;  // model -> cells dropped before intersection

  nlohmann::json to_json() const;
};

/// Hold out the final survey year, forecast it with the four models
/// (moving_average, social_only, survey_only, combined) and score RMSE
/// overall, by age and by region on the common cell support.
ValidationReport run_validation(const MigrantPanel& survey, const MigrantPanel& social,
                                const ModelConfig& config);

}  // namespace migstock
