#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "migstock/panel.hpp"

namespace migstock {

/// Fitted coefficients of the calibration regression
///   log p_survey = alpha0 + alpha1 * log p_social + age effects + region effects
/// with reference (first-level) coding: the first age group and the first
/// region carry coefficient 0.
struct BiasCoefficients {
  double alpha0 = 0.0;
  double alpha1 = 1.0;
  std::vector<double> age_effects;        // size kNumAgeGroups, [0] == 0
  std::vector<std::string> regions;       // codes seen at the anchor fit, sorted
  std::vector<double> region_effects;     // parallel to regions, [0] == 0
  double sigma2_fb = 0.0;                 // residual variance, log scale
  int anchor_year = 0;
  int n_obs = 0;

  bool has_region(std::string_view code) const;
  double region_effect(std::string_view code) const;  // throws UnseenLevel
  double age_effect(int age) const;

  nlohmann::json to_json() const;
  static BiasCoefficients from_json(const nlohmann::json& j);
};

/// OLS fit of the calibration regression on matched (age, region) cells of
/// the anchor-year survey panel and the first social-media wave.
BiasCoefficients fit_bias_model(const MigrantPanel& survey_anchor,
                                const MigrantPanel& social_anchor);

struct AdjustedObservation {
  int age = -1;
  int year = 0;
  std::string region;
  int wave_id = -1;
  double log_adjusted = 0.0;       // log p*, survey scale
  double proportion_raw = 0.0;     // platform proportion the adjustment started from
  std::int64_t population_count = -1;

  /// Log-scale sampling variance of the underlying platform measurement.
  double log_sampling_var() const;
};

std::vector<AdjustedObservation> adjust_wave(const BiasCoefficients& coefs,
                                             const MigrantPanel& social);

}  // namespace migstock
