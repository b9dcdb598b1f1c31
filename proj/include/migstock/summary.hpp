#pragma once

#include <string>
#include <vector>

#include "migstock/sampler.hpp"

namespace migstock {

struct CellSummary {
  int age = -1;  // AgeGrid index
  int year = 0;
  std::string region;
  double median = 0.0, lower95 = 0.0, upper95 = 0.0;
  bool forecast = false;  // year beyond the last observed year
};

/// Linear-interpolation quantile of an unsorted copy of the values.
double quantile(std::vector<double> values, double p);

/// Per-cell posterior median and 95% interval of mu on the proportion
/// scale, ordered by (year, region, age).
std::vector<CellSummary> summarize(const PosteriorSamples& samples, const ModelInputs& inputs);

}  // namespace migstock
