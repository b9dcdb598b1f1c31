#pragma once

#include <cstdint>
#include <vector>

#include "migstock/summary.hpp"

namespace migstock {

/// Forward simulation of the time-series blocks, one path per posterior
/// draw. Step h of draw d lives at flat index (d * horizon + h).
struct ProjectionDraws {
  int horizon = 0;
  int regions = 0, ages = 0;
  std::size_t n_draws = 0;
  std::vector<double> beta1;  // [(d*H + h) * S + s]
  std::vector<double> beta2;  // same layout
  std::vector<double> phi;    // [d*H + h]
  std::vector<double> eps;    // [(d*H + h) * X*S + x*S + s]

  double beta1_at(std::size_t d, int h, int s) const {
    return beta1[(d * horizon + h) * regions + s];
  }
};

ProjectionDraws project_paths(const PosteriorSamples& samples, const ModelInputs& inputs,
                              int horizon, std::uint64_t seed);

/// Per-cell forecast summary for the `horizon` years beyond the sampled
/// window, full per-draw uncertainty propagation. Deterministic given the
/// run seed.
std::vector<CellSummary> project(const PosteriorSamples& samples, const ModelInputs& inputs,
                                 int horizon);

}  // namespace migstock
