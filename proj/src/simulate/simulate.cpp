// Synthetic panel generation from known parameters; the ground-truth oracle
// for recovery, calibration and backtest ordering tests.

#include "migstock/simulate.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "migstock/rng.hpp"

namespace migstock {

namespace {
constexpr double kPropFloor = 1e-8;

double clamp_proportion(double p) {
  return std::min(std::max(p, kPropFloor), 1.0 - kPropFloor);
}
}  // namespace

int SimConfig::n_years() const {
  int last = std::max(survey_year_end, wave_year_end);
  return last - survey_year_start + 1;
}

void SimConfig::validate() const {
  if (regions < 2) fail(Errc::bad_config, "need at least 2 regions");
  if (survey_year_end < survey_year_start) fail(Errc::bad_config, "bad survey year range");
  if (wave_year_end < wave_year_start) fail(Errc::bad_config, "bad wave year range");
  if (wave_year_start < survey_year_start) {
    fail(Errc::bad_config, "waves cannot predate the survey panel");
  }
  if (waves_per_year < 1) fail(Errc::bad_config, "waves_per_year must be >= 1");
  if (sigma_s_survey < 0 || sigma_fb < 0 || sigma_ns < 0 || sigma_beta1 < 0 || sigma_beta < 0 ||
      sigma_phi < 0 || sigma_eps < 0) {
    fail(Errc::bad_config, "noise scales must be non-negative");
  }
  if (fb_population < 1) fail(Errc::bad_config, "fb_population must be positive");
  if (rho_min < 0 || rho_max > 1 || rho_min > rho_max) fail(Errc::bad_config, "bad rho range");
  if (alpha1 == 0.0) fail(Errc::bad_config, "alpha1 must be nonzero (the adjustment inverts it)");
}

nlohmann::json SimConfig::to_json() const {
  return nlohmann::json{{"regions", regions},
                        {"survey_year_start", survey_year_start},
                        {"survey_year_end", survey_year_end},
                        {"wave_year_start", wave_year_start},
                        {"wave_year_end", wave_year_end},
                        {"waves_per_year", waves_per_year},
                        {"origin", origin},
                        {"sigma_s_survey", sigma_s_survey},
                        {"fb_population", fb_population},
                        {"beta1_level", beta1_level},
                        {"beta1_spread", beta1_spread},
                        {"sigma_beta1", sigma_beta1},
                        {"sigma_beta", sigma_beta},
                        {"sigma_phi", sigma_phi},
                        {"sigma_eps", sigma_eps},
                        {"rho_min", rho_min},
                        {"rho_max", rho_max},
                        {"sigma_fb", sigma_fb},
                        {"sigma_ns", sigma_ns},
                        {"alpha0", alpha0},
                        {"alpha1", alpha1},
                        {"fb_sampling_noise", fb_sampling_noise}};
}

PrincipalComponents canonical_components() {
  // A smooth hump for the baseline schedule and a young/old contrast that
  // changes sign mid-grid, orthonormalized.
  Eigen::VectorXd v1(kNumAgeGroups), v2(kNumAgeGroups);
  v1 << -0.25, -0.30, -0.34, -0.37, -0.38, -0.37, -0.35, -0.32, -0.28;
  v2 << -0.50, -0.40, -0.25, -0.10, 0.05, 0.20, 0.35, 0.45, 0.50;
  v1.normalize();
  v2 -= v1 * v1.dot(v2);
  v2.normalize();

  PrincipalComponents pc;
  pc.z1 = v1;
  pc.z2 = v2;
  if (pc.z1.sum() > 0) pc.z1 = -pc.z1;
  if (pc.z2(kNumAgeGroups - 1) < 0) pc.z2 = -pc.z2;
  pc.singular1 = 1.0;
  pc.singular2 = 1.0;
  for (const auto& l : AgeGrid::labels()) pc.age_labels.push_back(l);
  return pc;
}

SimTruth draw_truth(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);

  SimTruth truth;
  truth.config = config;
  truth.seed = seed;
  truth.components = canonical_components();

  const int S = config.regions;
  const int T = config.n_years();
  const int X = kNumAgeGroups;
  truth.dims = {X, T, S, config.survey_year_start};
  for (int s = 0; s < S; ++s) {
    char code[16];
    std::snprintf(code, sizeof code, "R%02d", s + 1);
    truth.region_codes.push_back(code);
  }

  ParameterState st = ParameterState::zeros(truth.dims);
  st.sigma2_beta1 = config.sigma_beta1 * config.sigma_beta1;
  st.sigma2_beta = config.sigma_beta * config.sigma_beta;
  st.sigma2_phi = config.sigma_phi * config.sigma_phi;
  st.sigma2_eps = config.sigma_eps * config.sigma_eps;
  st.sigma2_ns = config.sigma_ns * config.sigma_ns;

  for (int s = 0; s < S; ++s) st.beta1[s] = rng.normal(config.beta1_level, config.beta1_spread);
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      st.beta1[t * S + s] = rng.normal(st.beta1[(t - 1) * S + s], config.sigma_beta1);
    }
  }
  st.phi[0] = 0.0;
  for (int t = 1; t < T; ++t) st.phi[t] = rng.normal(st.phi[t - 1], config.sigma_phi);
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      st.beta2[t * S + s] = rng.normal(st.phi[t], config.sigma_beta);
    }
  }
  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      st.rho[x * S + s] = config.rho_min + rng.uniform() * (config.rho_max - config.rho_min);
      double rho = st.rho[x * S + s];
      double* e = st.eps.data() + (static_cast<std::size_t>(x) * S + s) * T;
      double denom = 1.0 - rho * rho;
      double w0 = denom > 0 ? st.sigma2_eps / denom : st.sigma2_eps * 1e3;
      e[0] = config.sigma_eps > 0 ? rng.normal(0.0, std::sqrt(w0)) : 0.0;
      for (int t = 1; t < T; ++t) e[t] = rng.normal(rho * e[t - 1], config.sigma_eps);
    }
  }
  truth.state = std::move(st);

  BiasCoefficients bias;
  bias.alpha0 = config.alpha0;
  bias.alpha1 = config.alpha1;
  bias.age_effects.assign(X, 0.0);
  for (int x = 1; x < X; ++x) bias.age_effects[x] = 0.05 * x;  // older ages more under-represented
  bias.regions = truth.region_codes;
  bias.region_effects.assign(S, 0.0);
  for (int s = 1; s < S; ++s) bias.region_effects[s] = (s % 2 == 0 ? 0.05 : -0.05);
  bias.sigma2_fb = config.sigma_fb * config.sigma_fb;
  bias.anchor_year = config.survey_year_end;
  bias.n_obs = 0;
  truth.bias = bias;
  return truth;
}

SimOutput generate_from_truth(const SimTruth& truth, std::uint64_t seed) {
  const SimConfig& cfg = truth.config;
  const int S = truth.dims.regions, T = truth.dims.years, X = truth.dims.ages;
  const ParameterState& st = truth.state;

  if (static_cast<int>(truth.region_codes.size()) != S ||
      static_cast<int>(st.beta1.size()) != T * S ||
      static_cast<int>(st.eps.size()) != X * T * S ||
      truth.components.z1.size() != X) {
    fail(Errc::invalid_truth, "truth record sizes do not match dims");
  }
  for (double r : st.rho) {
    if (!(r >= 0 && r <= 1)) fail(Errc::invalid_truth, "rho outside [0,1]");
  }
  if (truth.bias.alpha1 == 0.0) fail(Errc::invalid_truth, "alpha1 must be nonzero");

  Rng rng(seed);
  auto log_mu_at = [&](int x, int t, int s) {
    return st.beta1[t * S + s] * truth.components.z1(x) +
           st.beta2[t * S + s] * truth.components.z2(x) +
           st.eps[(static_cast<std::size_t>(x) * S + s) * T + t];
  };

  std::vector<Region> regions;
  for (const auto& c : truth.region_codes) regions.push_back({c, c});

  std::vector<Observation> survey_obs;
  for (int s = 0; s < S; ++s) {
    for (int year = cfg.survey_year_start; year <= cfg.survey_year_end; ++year) {
      int t = year - truth.dims.year0;
      for (int x = 0; x < X; ++x) {
        double lm = log_mu_at(x, t, s);
        double y = cfg.sigma_s_survey > 0 ? rng.normal(lm, cfg.sigma_s_survey) : lm;
        Observation o;
        o.age = x;
        o.year = year;
        o.region = s;
        o.proportion = clamp_proportion(std::exp(y));
        o.se = cfg.sigma_s_survey * o.proportion;  // delta method inverts back exactly
        o.source = Source::survey;
        survey_obs.push_back(o);
      }
    }
  }

  std::vector<Observation> social_obs;
  int wave_id = 1;
  for (int year = cfg.wave_year_start; year <= cfg.wave_year_end; ++year) {
    for (int w = 0; w < cfg.waves_per_year; ++w, ++wave_id) {
      int t = year - truth.dims.year0;
      for (int s = 0; s < S; ++s) {
        for (int x = 0; x < X; ++x) {
          double target = log_mu_at(x, t, s);
          if (cfg.sigma_fb > 0) target += rng.normal(0.0, cfg.sigma_fb);
          if (cfg.sigma_ns > 0) target += rng.normal(0.0, cfg.sigma_ns);
          double log_fb = (target - truth.bias.alpha0 - truth.bias.age_effects[x] -
                           truth.bias.region_effects[s]) /
                          truth.bias.alpha1;
          double p_fb = clamp_proportion(std::exp(log_fb));
          if (cfg.fb_sampling_noise) {
            double samp_sd = std::sqrt(p_fb * (1.0 - p_fb) / cfg.fb_population);
            p_fb = clamp_proportion(p_fb + rng.normal(0.0, samp_sd));
          }
          Observation o;
          o.age = x;
          o.year = year;
          o.region = s;
          o.proportion = p_fb;
          o.source = Source::social;
          o.wave_id = wave_id;
          o.population_count = cfg.fb_population;
          social_obs.push_back(o);
        }
      }
    }
  }

  SimOutput out{MigrantPanel(cfg.origin, regions, std::move(survey_obs)),
                MigrantPanel(cfg.origin, regions, std::move(social_obs)), truth};
  return out;
}

SimOutput generate(const SimConfig& config, std::uint64_t seed) {
  SimTruth truth = draw_truth(config, Rng::derive(seed, 1));
  SimOutput out = generate_from_truth(truth, Rng::derive(seed, 2));
  out.truth.seed = seed;
  return out;
}

namespace {
nlohmann::json state_to_json(const ParameterState& st) {
  return nlohmann::json{{"beta1", st.beta1},
                        {"beta2", st.beta2},
                        {"phi", st.phi},
                        {"eps", st.eps},
                        {"rho", st.rho},
                        {"sigma2_beta1", st.sigma2_beta1},
                        {"sigma2_beta", st.sigma2_beta},
                        {"sigma2_phi", st.sigma2_phi},
                        {"sigma2_eps", st.sigma2_eps},
                        {"sigma2_ns", st.sigma2_ns}};
}
}  // namespace

nlohmann::json SimTruth::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["config"] = config.to_json();
  j["dims"] = {{"ages", dims.ages},
               {"years", dims.years},
               {"regions", dims.regions},
               {"year0", dims.year0}};
  j["region_codes"] = region_codes;
  j["state"] = state_to_json(state);
  j["bias"] = bias.to_json();
  j["components"] = components.to_json();
  return j;
}

}  // namespace migstock
