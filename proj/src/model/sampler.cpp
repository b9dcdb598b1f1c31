#include "migstock/sampler.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "migstock/blocks.hpp"
#include "migstock/diagnostics.hpp"
#include "migstock/kernels.hpp"
#include "migstock/rng.hpp"

namespace migstock {

namespace {

struct ChainWorkspace {
  std::vector<double> scratch;  // strided-column gather buffer
  std::vector<double> resid_social, var_social;
};

double obs_var(const ModelObservation& o, const ModelInputs& in, const ParameterState& st) {
  return o.sampling_var + (o.social ? in.sigma2_fb() + st.sigma2_ns : 0.0);
}

// ---- beta1 rows: random-walk prior + per-cell Gaussian likelihood --------

void update_beta1(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions;
  const auto& z1 = in.components().z1;
  const auto& z2 = in.components().z2;
  const double q = st.sigma2_beta1, c0 = cfg.prior_scale_coeff;

  Tridiag prec;
  prec.diag.assign(T, 0.0);
  prec.off.assign(T > 0 ? T - 1 : 0, -1.0 / q);
  std::vector<double> b(T, 0.0);

  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      double p = (t == 0 ? 1.0 / c0 : 1.0 / q) + (t < T - 1 ? 1.0 / q : 0.0);
      double rhs = 0.0;
      for (int i : in.obs_in_ts(t, s)) {
        const auto& o = in.observations()[i];
        double v = obs_var(o, in, st);
        double r = o.log_p - st.beta2[t * S + s] * z2(o.age) -
                   st.eps[(static_cast<std::size_t>(o.age) * S + s) * T + t];
        p += z1(o.age) * z1(o.age) / v;
        rhs += z1(o.age) * r / v;
      }
      prec.diag[t] = p;
      b[t] = rhs;
    }
    std::vector<double> row = sample_gaussian_chain(prec, b, rng);
    for (int t = 0; t < T; ++t) st.beta1[t * S + s] = row[t];
  }
}

// ---- beta2 cells: scalar conjugate draws ----------------------------------

void update_beta2(ParameterState& st, const ModelInputs& in, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions;
  const auto& z1 = in.components().z1;
  const auto& z2 = in.components().z2;

  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double p = 1.0 / st.sigma2_beta;
      double rhs = st.phi[t] / st.sigma2_beta;
      for (int i : in.obs_in_ts(t, s)) {
        const auto& o = in.observations()[i];
        double v = obs_var(o, in, st);
        double r = o.log_p - st.beta1[t * S + s] * z1(o.age) -
                   st.eps[(static_cast<std::size_t>(o.age) * S + s) * T + t];
        p += z2(o.age) * z2(o.age) / v;
        rhs += z2(o.age) * r / v;
      }
      st.beta2[t * S + s] = rng.normal(rhs / p, std::sqrt(1.0 / p));
    }
  }
}

// ---- phi: random-walk prior with beta2 cells as observations --------------

void update_phi(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions;
  const double q = st.sigma2_phi, c0 = cfg.prior_scale_coeff;

  Tridiag prec;
  prec.diag.assign(T, 0.0);
  prec.off.assign(T > 0 ? T - 1 : 0, -1.0 / q);
  std::vector<double> b(T, 0.0);
  for (int t = 0; t < T; ++t) {
    prec.diag[t] = (t == 0 ? 1.0 / c0 : 1.0 / q) + (t < T - 1 ? 1.0 / q : 0.0) +
                   static_cast<double>(S) / st.sigma2_beta;
    double sum = 0.0;
    for (int s = 0; s < S; ++s) sum += st.beta2[t * S + s];
    b[t] = sum / st.sigma2_beta;
  }
  st.phi = sample_gaussian_chain(prec, b, rng);
}

// ---- eps series: AR(1) prior + per-cell likelihood -------------------------

void update_eps(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions, X = in.dims().ages;
  const auto& z1 = in.components().z1;
  const auto& z2 = in.components().z2;
  const double se = st.sigma2_eps;

  Tridiag prec;
  prec.diag.assign(T, 0.0);
  prec.off.assign(T > 0 ? T - 1 : 0, 0.0);
  std::vector<double> b(T, 0.0);

  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      double rho = st.rho[x * S + s];
      double w0 = stationary_init_var(se, rho, cfg.eps_init_cap);
      for (int t = 0; t < T; ++t) {
        prec.diag[t] = (t == 0 ? 1.0 / w0 : 1.0 / se) + (t < T - 1 ? rho * rho / se : 0.0);
        if (t < T - 1) prec.off[t] = -rho / se;
        b[t] = 0.0;
      }
      for (int i : in.obs_in_xs(x, s)) {
        const auto& o = in.observations()[i];
        double v = obs_var(o, in, st);
        double r = o.log_p - st.beta1[o.t * S + s] * z1(x) - st.beta2[o.t * S + s] * z2(x);
        prec.diag[o.t] += 1.0 / v;
        b[o.t] += r / v;
      }
      std::vector<double> series = sample_gaussian_chain(prec, b, rng);
      double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
      for (int t = 0; t < T; ++t) e[t] = series[t];
    }
  }
}

// ---- rho: truncated-Gaussian proposal from the transition terms, exact
// accept step for the stationary-init factor ---------------------------------

void update_rho(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions, X = in.dims().ages;
  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      const double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
      st.rho[x * S + s] = update_ar1_coefficient(e, T, st.sigma2_eps, st.rho[x * S + s],
                                                 cfg.eps_init_cap, rng);
    }
  }
}

// ---- interweaving shift moves ----------------------------------------------
// log mu is invariant under beta1[.,s] += c with eps[x,.,s] -= c*z1(x) (and
// the beta2/z2 analogue), so the likelihood cannot pin the split between the
// two. The blocked draws above cannot traverse that ridge either: once a
// chain parks a persistent eps level against a shifted beta row (rho near 1),
// every exact block draw is conditionally happy. These Metropolis moves walk
// along the ridge directly; the likelihood cancels, so only prior terms enter
// the accept ratio.

double eps_series_prior(const double* e, int T, double rho, double sigma2_eps, double cap) {
  double w0 = stationary_init_var(sigma2_eps, rho, cap);
  double lp = -0.5 * (std::log(w0) + e[0] * e[0] / w0);
  if (T > 1) {
    double ssq = kernels::ar1_innovation_ssq(e, T, rho);
    lp += -0.5 * (ssq / sigma2_eps + (T - 1) * std::log(sigma2_eps));
  }
  return lp;
}

void update_level_shifts(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg,
                         Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions, X = in.dims().ages;
  const auto& z1 = in.components().z1;
  const auto& z2 = in.components().z2;
  std::vector<double> shifted(T);

  auto eps_prior_shifted = [&](int s, const Eigen::VectorXd& dir, double c) {
    double lp = 0.0;
    for (int x = 0; x < X; ++x) {
      const double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
      double d = c * dir(x);
      for (int t = 0; t < T; ++t) shifted[t] = e[t] - d;
      lp += eps_series_prior(shifted.data(), T, st.rho[x * S + s], st.sigma2_eps,
                             cfg.eps_init_cap);
    }
    return lp;
  };

  for (int s = 0; s < S; ++s) {
    // Two proposal scales: small steps mix the identified basin, large ones
    // jump a parked level back in one go when the prior there is flat.
    double tau = (rng.uniform() < 0.5) ? 0.02 : 0.5;
    double c = rng.normal(0.0, tau);

    // z1 direction: beta1 row. Row increments are shift-invariant, so only
    // the t = 0 prior term changes on the beta side.
    {
      double b0 = st.beta1[s];
      double d_beta = -0.5 * ((b0 + c) * (b0 + c) - b0 * b0) / cfg.prior_scale_coeff;
      double d_eps = eps_prior_shifted(s, z1, c) - eps_prior_shifted(s, z1, 0.0);
      if (std::log(rng.uniform()) < d_beta + d_eps) {
        for (int t = 0; t < T; ++t) st.beta1[t * S + s] += c;
        for (int x = 0; x < X; ++x) {
          double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
          for (int t = 0; t < T; ++t) e[t] -= c * z1(x);
        }
      }
    }

    // z2 direction: beta2 column about phi.
    {
      tau = (rng.uniform() < 0.5) ? 0.02 : 0.5;
      c = rng.normal(0.0, tau);
      double d_beta = 0.0;
      for (int t = 0; t < T; ++t) {
        double r = st.beta2[t * S + s] - st.phi[t];
        d_beta += -0.5 * ((r + c) * (r + c) - r * r) / st.sigma2_beta;
      }
      double d_eps = eps_prior_shifted(s, z2, c) - eps_prior_shifted(s, z2, 0.0);
      if (std::log(rng.uniform()) < d_beta + d_eps) {
        for (int t = 0; t < T; ++t) st.beta2[t * S + s] += c;
        for (int x = 0; x < X; ++x) {
          double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
          for (int t = 0; t < T; ++t) e[t] -= c * z2(x);
        }
      }
    }
  }

  // Global z2 shift: phi and every beta2 cell move together (their residuals
  // cancel, as do the phi increments), compensated in every eps series. This
  // is the only way the whole national-mean complex can translate at once.
  {
    double tau = (rng.uniform() < 0.5) ? 0.02 : 0.5;
    double c = rng.normal(0.0, tau);
    double p0 = st.phi[0];
    double delta = -0.5 * ((p0 + c) * (p0 + c) - p0 * p0) / cfg.prior_scale_coeff;
    for (int s = 0; s < S; ++s) {
      delta += eps_prior_shifted(s, z2, c) - eps_prior_shifted(s, z2, 0.0);
    }
    if (std::log(rng.uniform()) < delta) {
      for (int t = 0; t < T; ++t) st.phi[t] += c;
      for (auto& b : st.beta2) b += c;
      for (int s = 0; s < S; ++s) {
        for (int x = 0; x < X; ++x) {
          double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
          for (int t = 0; t < T; ++t) e[t] -= c * z2(x);
        }
      }
    }
  }
}

// ---- SD parameters: slice updates on the standard-deviation scale ----------

// Slice target for an SD whose conditional is sigma^-m exp(-ssq / (2 sigma^2))
// times the half-Normal prior.
double sd_conditional(double sd, double m, double ssq, double prior_scale) {
  double s2 = sd * sd;
  return -0.5 * (m * std::log(s2) + ssq / s2) - 0.5 * s2 / (prior_scale * prior_scale);
}

double slice_sd(double cur, double m, double ssq, const ModelConfig& cfg, Rng& rng) {
  const double lo = std::sqrt(cfg.variance_floor);
  auto logf = [&](double sd) { return sd_conditional(sd, m, ssq, cfg.prior_scale_sd); };
  double w = std::max(0.25, 0.5 * cur);
  return slice_sample(std::max(cur, lo), lo, 1e6, w, logf, rng);
}

void update_sigmas(ParameterState& st, const ModelInputs& in, const ModelConfig& cfg, Rng& rng,
                   ChainWorkspace& ws) {
  const int T = in.dims().years, S = in.dims().regions, X = in.dims().ages;

  // sigma_beta1: random-walk innovations of beta1.
  {
    double ssq = 0.0;
    ws.scratch.resize(T);
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) ws.scratch[t] = st.beta1[t * S + s];
      ssq += kernels::ar1_innovation_ssq(ws.scratch.data(), T, 1.0);
    }
    double m = static_cast<double>(S) * (T - 1);
    double sd = slice_sd(std::sqrt(st.sigma2_beta1), m, ssq, cfg, rng);
    st.sigma2_beta1 = sd * sd;
  }

  // sigma_beta: beta2 deviations around phi.
  {
    double ssq = 0.0;
    for (int t = 0; t < T; ++t) {
      for (int s = 0; s < S; ++s) {
        double d = st.beta2[t * S + s] - st.phi[t];
        ssq += d * d;
      }
    }
    double sd = slice_sd(std::sqrt(st.sigma2_beta), static_cast<double>(T) * S, ssq, cfg, rng);
    st.sigma2_beta = sd * sd;
  }

  // sigma_phi: random-walk innovations of phi.
  {
    double ssq = kernels::ar1_innovation_ssq(st.phi.data(), T, 1.0);
    double sd = slice_sd(std::sqrt(st.sigma2_phi), static_cast<double>(T - 1), ssq, cfg, rng);
    st.sigma2_phi = sd * sd;
  }

  // sigma_eps: AR innovations plus the stationary init terms (the capped
  // init variance is proportional to sigma2_eps, so it folds into the same
  // sigma^-m exp(-ssq/2sigma^2) shape).
  {
    double ssq = 0.0, ssq0 = 0.0;
    for (int x = 0; x < X; ++x) {
      for (int s = 0; s < S; ++s) {
        const double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
        double rho = st.rho[x * S + s];
        ssq += kernels::ar1_innovation_ssq(e, T, rho);
        double denom = 1.0 - rho * rho;
        double c = (denom > 0.0) ? std::min(1.0 / denom, cfg.eps_init_cap) : cfg.eps_init_cap;
        ssq0 += e[0] * e[0] / c;
      }
    }
    double m = static_cast<double>(X) * S * (T - 1) + static_cast<double>(X) * S;
    double sd = slice_sd(std::sqrt(st.sigma2_eps), m, ssq + ssq0, cfg, rng);
    st.sigma2_eps = sd * sd;
  }

  // sigma_ns: enters every social observation's variance.
  {
    const auto& idx = in.social_indices();
    ws.resid_social.resize(idx.size());
    ws.var_social.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& o = in.observations()[idx[k]];
      ws.resid_social[k] = o.log_p - log_mu(st, in, o.age, o.t, o.s);
      ws.var_social[k] = o.sampling_var;
    }
    const double lo = std::sqrt(cfg.variance_floor);
    auto logf = [&](double sd) {
      double ll = kernels::gaussian_loglik_shifted(ws.resid_social.data(), ws.var_social.data(),
                                                   in.sigma2_fb() + sd * sd, idx.size());
      return ll - 0.5 * sd * sd / (cfg.prior_scale_sd * cfg.prior_scale_sd);
    };
    double cur = std::max(std::sqrt(st.sigma2_ns), lo);
    double sd = slice_sample(cur, lo, 1e6, std::max(0.25, 0.5 * cur), logf, rng);
    st.sigma2_ns = sd * sd;
  }
}

// ---- chain initialization ---------------------------------------------------

ParameterState init_state(const ModelInputs& in, const ModelConfig& cfg, Rng& rng) {
  const int T = in.dims().years, S = in.dims().regions;
  const auto& z1 = in.components().z1;
  ParameterState st = ParameterState::zeros(in.dims());

  auto draw_sd = [&](void) {
    double sd = std::abs(rng.normal(0.0, cfg.prior_scale_sd));
    return std::max(sd, std::sqrt(cfg.variance_floor));
  };
  double sd;
  sd = draw_sd();
  st.sigma2_beta1 = sd * sd;
  sd = draw_sd();
  st.sigma2_beta = sd * sd;
  sd = draw_sd();
  st.sigma2_phi = sd * sd;
  sd = draw_sd();
  st.sigma2_eps = sd * sd;
  sd = draw_sd();
  st.sigma2_ns = sd * sd;

  for (auto& r : st.rho) r = rng.uniform();

  // beta1 from the least-squares projection of observed log schedules onto
  // z1, filled forward/backward over data gaps, with a per-chain jitter.
  for (int s = 0; s < S; ++s) {
    std::vector<double> fitted(T, std::numeric_limits<double>::quiet_NaN());
    for (int t = 0; t < T; ++t) {
      double num = 0.0, den = 0.0;
      for (int i : in.obs_in_ts(t, s)) {
        const auto& o = in.observations()[i];
        num += z1(o.age) * o.log_p;
        den += z1(o.age) * z1(o.age);
      }
      if (den > 0.0) fitted[t] = num / den;
    }
    double last = std::numeric_limits<double>::quiet_NaN();
    for (int t = 0; t < T; ++t) {
      if (fitted[t] == fitted[t]) {
        last = fitted[t];
      } else if (last == last) {
        fitted[t] = last;
      }
    }
    for (int t = T - 1; t >= 0; --t) {
      if (fitted[t] == fitted[t]) {
        last = fitted[t];
      } else {
        fitted[t] = (last == last) ? last : 0.0;
      }
    }
    for (int t = 0; t < T; ++t) st.beta1[t * S + s] = fitted[t] + rng.normal(0.0, 0.1);
  }

  // phi, beta2, eps from their priors.
  st.phi[0] = rng.normal(0.0, std::sqrt(cfg.prior_scale_coeff));
  for (int t = 1; t < T; ++t) {
    st.phi[t] = rng.normal(st.phi[t - 1], std::sqrt(st.sigma2_phi));
  }
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      st.beta2[t * S + s] = rng.normal(st.phi[t], std::sqrt(st.sigma2_beta));
    }
  }
  // eps starts at the prior mode (zero): a prior draw with a large sigma_eps
  // can initialize the chain on the beta/eps translation ridge, which the
  // shift moves would then have to walk back out of.
  return st;
}

std::vector<ParameterState> run_chain(const ModelInputs& in, const ModelConfig& cfg,
                                      int chain_idx) {
  Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(chain_idx)));
  ChainWorkspace ws;
  ParameterState st = init_state(in, cfg, rng);

  std::vector<ParameterState> draws;
  draws.reserve((cfg.n_iter - cfg.n_warmup + cfg.thin - 1) / cfg.thin);
  for (int iter = 0; iter < cfg.n_iter; ++iter) {
    update_beta1(st, in, cfg, rng);
    update_beta2(st, in, rng);
    update_phi(st, in, cfg, rng);
    update_eps(st, in, cfg, rng);
    update_level_shifts(st, in, cfg, rng);
    update_rho(st, in, cfg, rng);
    update_sigmas(st, in, cfg, rng, ws);
    if (iter >= cfg.n_warmup && (iter - cfg.n_warmup) % cfg.thin == 0) {
      draws.push_back(st);
    }
  }
  return draws;
}

}  // namespace

PosteriorSamples run_mcmc(const ModelInputs& inputs, const ModelConfig& config) {
  config.validate();

  PosteriorSamples out;
  out.config = config;
  out.seed = config.seed;
  out.dims = inputs.dims();
  out.region_codes = inputs.region_codes();
  out.chains.resize(config.n_chains);

  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || config.n_chains == 1) {
    for (int c = 0; c < config.n_chains; ++c) out.chains[c] = run_chain(inputs, config, c);
  } else {
    std::vector<std::future<std::vector<ParameterState>>> futures;
    futures.reserve(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) {
      futures.push_back(std::async(std::launch::async,
                                   [&inputs, &config, c] { return run_chain(inputs, config, c); }));
    }
    for (int c = 0; c < config.n_chains; ++c) out.chains[c] = futures[c].get();
  }

  if (config.n_chains >= 2 && out.draws_per_chain() >= 10) {
    out.rhat = gelman_rubin(out);
    for (const auto& [name, r] : out.rhat) {
      if (r > config.rhat_threshold) {
        out.converged = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace migstock
