// Forward projection of the fitted time-series blocks.

#include "migstock/forecast.hpp"

#include <cmath>

#include "migstock/rng.hpp"

namespace migstock {

ProjectionDraws project_paths(const PosteriorSamples& samples, const ModelInputs& inputs,
                              int horizon, std::uint64_t seed) {
  if (horizon < 1) fail(Errc::bad_config, "horizon must be >= 1");
  const ModelDims& d = inputs.dims();
  const int T = d.years, S = d.regions, X = d.ages;

  std::size_t n_draws = 0;
  for (const auto& c : samples.chains) n_draws += c.size();
  if (n_draws == 0) fail(Errc::empty_inputs, "no posterior draws");

  ProjectionDraws out;
  out.horizon = horizon;
  out.regions = S;
  out.ages = X;
  out.n_draws = n_draws;
  out.beta1.resize(n_draws * horizon * S);
  out.beta2.resize(n_draws * horizon * S);
  out.phi.resize(n_draws * horizon);
  out.eps.resize(n_draws * horizon * X * S);

  std::size_t di = 0;
  for (const auto& chain : samples.chains) {
    for (const auto& st : chain) {
      Rng rng(Rng::derive(seed, di));
      const double sd_b1 = std::sqrt(st.sigma2_beta1);
      const double sd_b = std::sqrt(st.sigma2_beta);
      const double sd_phi = std::sqrt(st.sigma2_phi);
      const double sd_eps = std::sqrt(st.sigma2_eps);

      std::vector<double> b1(S), eps_prev(static_cast<std::size_t>(X) * S);
      double phi = st.phi[T - 1];
      for (int s = 0; s < S; ++s) b1[s] = st.beta1[(T - 1) * S + s];
      for (int x = 0; x < X; ++x) {
        for (int s = 0; s < S; ++s) {
          eps_prev[x * S + s] = st.eps[(static_cast<std::size_t>(x) * S + s) * T + (T - 1)];
        }
      }

      for (int h = 0; h < horizon; ++h) {
        std::size_t base = (di * horizon + h);
        phi = rng.normal(phi, sd_phi);
        out.phi[base] = phi;
        for (int s = 0; s < S; ++s) {
          b1[s] = rng.normal(b1[s], sd_b1);
          out.beta1[base * S + s] = b1[s];
          out.beta2[base * S + s] = rng.normal(phi, sd_b);
        }
        for (int x = 0; x < X; ++x) {
          for (int s = 0; s < S; ++s) {
            double rho = st.rho[x * S + s];
            double e = rng.normal(rho * eps_prev[x * S + s], sd_eps);
            eps_prev[x * S + s] = e;
            out.eps[base * X * S + x * S + s] = e;
          }
        }
      }
      ++di;
    }
  }
  return out;
}

std::vector<CellSummary> project(const PosteriorSamples& samples, const ModelInputs& inputs,
                                 int horizon) {
  const ModelDims& d = inputs.dims();
  const int S = d.regions, X = d.ages;
  ProjectionDraws paths =
      project_paths(samples, inputs, horizon, Rng::derive(samples.seed, 0x666f7265ULL));

  const auto& z1 = inputs.components().z1;
  const auto& z2 = inputs.components().z2;
  std::vector<CellSummary> out;
  std::vector<double> props(paths.n_draws);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int x = 0; x < X; ++x) {
        for (std::size_t di = 0; di < paths.n_draws; ++di) {
          std::size_t base = di * horizon + h;
          double lm = paths.beta1[base * S + s] * z1(x) + paths.beta2[base * S + s] * z2(x) +
                      paths.eps[base * X * S + x * S + s];
          props[di] = std::exp(lm);
        }
        CellSummary cs;
        cs.age = x;
        cs.year = inputs.year(d.years - 1) + h + 1;
        cs.region = inputs.region_codes()[s];
        cs.median = quantile(props, 0.5);
        cs.lower95 = quantile(props, 0.025);
        cs.upper95 = quantile(props, 0.975);
        cs.forecast = true;
        out.push_back(std::move(cs));
      }
    }
  }
  return out;
}

}  // namespace migstock
