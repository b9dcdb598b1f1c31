#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "migstock/model.hpp"

namespace migstock {

/// Desk-scale generator settings: process scales, bias coefficients, noise
/// levels, and the panel layout.
struct SimConfig {
  int regions = 10;
  int survey_year_start = 2001, survey_year_end = 2016;
  int wave_year_start = 2017, wave_year_end = 2018;
  int waves_per_year = 2;
  std::string origin = "synthetic";

  double sigma_s_survey = 0.05;       // log-scale survey sampling SD
  std::int64_t fb_population = 200000;
  bool fb_sampling_noise = true;      // binomial noise on the platform proportions

  double beta1_level = 10.0, beta1_spread = 0.5;
  double sigma_beta1 = 0.10, sigma_beta = 0.10, sigma_phi = 0.05, sigma_eps = 0.05;
  double rho_min = 0.3, rho_max = 0.9;
  double sigma_fb = 0.10, sigma_ns = 0.05;
  double alpha0 = 0.3, alpha1 = 0.9;

  int n_years() const;
  void validate() const;
  nlohmann::json to_json() const;
};

/// A complete generating truth: process state on the full year grid, bias
/// coefficients, and components.
struct SimTruth {
  ParameterState state;
  BiasCoefficients bias;
  PrincipalComponents components;
  ModelDims dims;
  std::vector<std::string> region_codes;
  SimConfig config;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct SimOutput {
  MigrantPanel survey;
  MigrantPanel social;
  SimTruth truth;
};

/// Fixed orthonormal desk-scale age patterns (baseline schedule and an
/// age-tilt contrast), sign convention applied.
PrincipalComponents canonical_components();

/// Draw a process truth from the hierarchy given the config scales.
SimTruth draw_truth(const SimConfig& config, std::uint64_t seed);

/// Emit survey and social panels from a given truth. Survey observations
/// are N(log mu, sigma_s^2) on the log scale; social observations invert
/// the calibration regression after adding the bias-model and non-sampling
/// noise, then receive binomial sampling noise on the proportion scale.
SimOutput generate_from_truth(const SimTruth& truth, std::uint64_t seed);

/// draw_truth + generate_from_truth with derived sub-seeds.
SimOutput generate(const SimConfig& config, std::uint64_t seed);

}  // namespace migstock
