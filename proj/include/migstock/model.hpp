#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "migstock/bias.hpp"
#include "migstock/components.hpp"
#include "migstock/error.hpp"
#include "migstock/panel.hpp"

namespace migstock {

/// Sampler settings and prior scales.
struct ModelConfig {
  int n_chains = 4;
  int n_iter = 10000;
  int n_warmup = 5000;
  int thin = 5;
  std::uint64_t seed = 1;
  double prior_scale_coeff = 100.0;  // variance of the Normal priors on initial levels
  double prior_scale_sd = 1.0;       // scale of the half-Normal priors on the SD parameters
  double rhat_threshold = 1.1;
  int horizon = 2;
  double eps_init_cap = 1e3;         // cap on the stationary AR(1) init variance, in units of sigma2_eps
  double variance_floor = 1e-12;

  void validate() const;
};

struct ModelDims {
  int ages = kNumAgeGroups;
  int years = 0;    // T, including forecast years
  int regions = 0;  // S
  int year0 = 0;    // calendar year of t = 0
};

/// One observation mapped onto the model grid, log scale.
struct ModelObservation {
  int age = -1, t = -1, s = -1;
  int year = 0;
  double log_p = 0.0;
  double sampling_var = 0.0;  // log-scale sigma^2_s
  bool social = false;
  int wave_id = -1;
};

/// Immutable data + component bundle handed to the sampler.
class ModelInputs {
 public:
  ModelInputs(ModelDims dims, PrincipalComponents components,
              std::vector<ModelObservation> observations, double sigma2_fb,
              std::vector<std::string> region_codes);

  const ModelDims& dims() const { return dims_; }
  const PrincipalComponents& components() const { return components_; }
  const std::vector<ModelObservation>& observations() const { return obs_; }
  double sigma2_fb() const { return sigma2_fb_; }
  const std::vector<std::string>& region_codes() const { return region_codes_; }
  int year(int t) const { return dims_.year0 + t; }
  /// Latest calendar year carrying any observation; year0 - 1 when empty.
  int max_observed_year() const { return max_observed_year_; }

  const std::vector<int>& obs_in_ts(int t, int s) const { return by_ts_[t * dims_.regions + s]; }
  const std::vector<int>& obs_in_xs(int x, int s) const { return by_xs_[x * dims_.regions + s]; }
  const std::vector<int>& social_indices() const { return social_idx_; }

 private:
  ModelDims dims_;
  PrincipalComponents components_;
  std::vector<ModelObservation> obs_;
  double sigma2_fb_ = 0.0;
  std::vector<std::string> region_codes_;
  std::vector<std::vector<int>> by_ts_, by_xs_;
  std::vector<int> social_idx_;
  int max_observed_year_ = 0;
};

/// Assemble sampler inputs from a survey panel and bias-adjusted waves.
ModelInputs build_inputs(const MigrantPanel& survey,
                         const std::vector<AdjustedObservation>& social, double sigma2_fb,
                         const PrincipalComponents& components, int horizon);

/// One point in parameter space. Layouts: beta1/beta2 are [t * S + s],
/// phi is [t], eps is [(x * S + s) * T + t] (series-contiguous in t),
/// rho is [x * S + s].
struct ParameterState {
  std::vector<double> beta1, beta2, phi, eps, rho;
  double sigma2_beta1 = 1.0, sigma2_beta = 1.0, sigma2_phi = 1.0, sigma2_eps = 1.0,
         sigma2_ns = 1.0;

  static ParameterState zeros(const ModelDims& dims);
};

inline double log_mu(const ParameterState& st, const ModelInputs& in, int x, int t, int s) {
  const int S = in.dims().regions;
  const int T = in.dims().years;
  return st.beta1[t * S + s] * in.components().z1(x) +
         st.beta2[t * S + s] * in.components().z2(x) + st.eps[(x * S + s) * T + t];
}

/// Stationary AR(1) initial variance with the boundary cap.
inline double stationary_init_var(double sigma2_eps, double rho, double cap) {
  double denom = 1.0 - rho * rho;
  double scale = (denom > 0.0) ? std::min(1.0 / denom, cap) : cap;
  return sigma2_eps * scale;
}

/// Joint log density of parameters and observations (the sampler's target).
/// SD parameters are measured on the standard-deviation scale.
double log_posterior(const ParameterState& state, const ModelInputs& inputs,
                     const ModelConfig& config);

}  // namespace migstock
