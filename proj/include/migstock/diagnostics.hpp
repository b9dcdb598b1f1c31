#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "migstock/sampler.hpp"

namespace migstock {

/// Split R-hat for one scalar: each chain is halved, then the usual
/// between/within variance ratio is taken over the half-chains. Degenerate
/// all-constant input reports 1 by convention.
double split_rhat(const std::vector<std::vector<double>>& chains);

struct MonitoredParameter {
  std::string name;
  std::function<double(const ParameterState&)> get;
};

/// The monitored set: all beta1 and beta2 cells, phi, the five variance
/// scalars, and a fixed 10% subsample of eps.
std::vector<MonitoredParameter> monitored_parameters(const PosteriorSamples& samples);

/// R-hat per selected parameter name; empty selector means the full
/// monitored set.
std::map<std::string, double> gelman_rubin(const PosteriorSamples& samples,
                                           const std::vector<std::string>& selector = {});

}  // namespace migstock
