// Joint log density of Eqs. 4-11 style hierarchy: observation terms,
// process terms, and the weakly-informative priors.

#include <cmath>

#include "migstock/kernels.hpp"
#include "migstock/model.hpp"
#include "migstock/rng.hpp"

namespace migstock {

namespace {
constexpr double kLogSqrt2OverPi = -0.22579135264472743236;  // log(sqrt(2/pi))

double half_normal_logpdf(double x, double scale) {
  return kLogSqrt2OverPi - std::log(scale) - 0.5 * x * x / (scale * scale);
}
}  // namespace

double log_posterior(const ParameterState& state, const ModelInputs& inputs,
                     const ModelConfig& config) {
  const ModelDims& d = inputs.dims();
  const int T = d.years, S = d.regions, X = d.ages;

  for (double r : state.rho) {
    if (!(r >= 0.0 && r <= 1.0)) fail(Errc::non_finite_density, "rho outside [0,1]");
  }
  for (double v : {state.sigma2_beta1, state.sigma2_beta, state.sigma2_phi, state.sigma2_eps,
                   state.sigma2_ns}) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::non_finite_density, "non-positive variance");
  }

  double lp = 0.0;

  // Observation terms.
  {
    std::vector<double> resid_s, var_s, resid_f, var_f;
    for (const auto& o : inputs.observations()) {
      double r = o.log_p - log_mu(state, inputs, o.age, o.t, o.s);
      if (o.social) {
        resid_f.push_back(r);
        var_f.push_back(o.sampling_var);
      } else {
        resid_s.push_back(r);
        var_s.push_back(o.sampling_var);
      }
    }
    lp += kernels::gaussian_loglik(resid_s.data(), var_s.data(), resid_s.size());
    lp += kernels::gaussian_loglik_shifted(resid_f.data(), var_f.data(),
                                           inputs.sigma2_fb() + state.sigma2_ns, resid_f.size());
  }

  const double c0 = config.prior_scale_coeff;

  // beta1: initial level prior + random walk.
  for (int s = 0; s < S; ++s) {
    lp += norm_logpdf(state.beta1[s], 0.0, c0);
    for (int t = 1; t < T; ++t) {
      lp += norm_logpdf(state.beta1[t * S + s], state.beta1[(t - 1) * S + s],
                        state.sigma2_beta1);
    }
  }

  // beta2 about the national mean.
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      lp += norm_logpdf(state.beta2[t * S + s], state.phi[t], state.sigma2_beta);
    }
  }

  // phi: initial prior + random walk.
  lp += norm_logpdf(state.phi[0], 0.0, c0);
  for (int t = 1; t < T; ++t) {
    lp += norm_logpdf(state.phi[t], state.phi[t - 1], state.sigma2_phi);
  }

  // eps: stationary init + AR(1) innovations.
  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      const double* e = state.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
      double rho = state.rho[x * S + s];
      double w0 = stationary_init_var(state.sigma2_eps, rho, config.eps_init_cap);
      lp += norm_logpdf(e[0], 0.0, w0);
      double ssq = kernels::ar1_innovation_ssq(e, T, rho);
      if (T > 1) {
        lp += -0.5 * ((T - 1) * (1.8378770664093454836 + std::log(state.sigma2_eps)) +
                      ssq / state.sigma2_eps);
      }
    }
  }
  // rho prior is Uniform(0,1): zero inside the bounds (checked above).

  // Half-Normal priors on the SD parameters.
  const double s0 = config.prior_scale_sd;
  lp += half_normal_logpdf(std::sqrt(state.sigma2_beta1), s0);
  lp += half_normal_logpdf(std::sqrt(state.sigma2_beta), s0);
  lp += half_normal_logpdf(std::sqrt(state.sigma2_phi), s0);
  lp += half_normal_logpdf(std::sqrt(state.sigma2_eps), s0);
  lp += half_normal_logpdf(std::sqrt(state.sigma2_ns), s0);

  if (!std::isfinite(lp)) fail(Errc::non_finite_density, "log posterior is not finite");
  return lp;
}

}  // namespace migstock
