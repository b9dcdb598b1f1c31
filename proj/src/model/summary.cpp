#include "migstock/summary.hpp"

#include <algorithm>
#include <cmath>

namespace migstock {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) fail(Errc::empty_inputs, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  double h = p * (values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = h - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::vector<CellSummary> summarize(const PosteriorSamples& samples, const ModelInputs& inputs) {
  if (samples.chains.empty() || samples.draws_per_chain() == 0) {
    fail(Errc::empty_inputs, "no posterior draws");
  }
  const ModelDims& d = inputs.dims();
  const int T = d.years, S = d.regions, X = d.ages;
  const int last_obs_year = inputs.max_observed_year();

  std::size_t total_draws = 0;
  for (const auto& c : samples.chains) total_draws += c.size();

  std::vector<CellSummary> out;
  out.reserve(static_cast<std::size_t>(T) * S * X);
  std::vector<double> props(total_draws);
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      for (int x = 0; x < X; ++x) {
        std::size_t k = 0;
        for (const auto& chain : samples.chains) {
          for (const auto& st : chain) {
            props[k++] = std::exp(log_mu(st, inputs, x, t, s));
          }
        }
        CellSummary cs;
        cs.age = x;
        cs.year = inputs.year(t);
        cs.region = inputs.region_codes()[s];
        cs.median = quantile(props, 0.5);
        cs.lower95 = quantile(props, 0.025);
        cs.upper95 = quantile(props, 0.975);
        cs.forecast = cs.year > last_obs_year;
        out.push_back(std::move(cs));
      }
    }
  }
  return out;
}

}  // namespace migstock
