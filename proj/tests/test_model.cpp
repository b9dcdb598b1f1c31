#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "migstock/diagnostics.hpp"
#include "migstock/rng.hpp"
#include "migstock/sampler.hpp"
#include "migstock/simulate.hpp"
#include "migstock/summary.hpp"
#include "testutil.hpp"

using namespace migstock;

namespace {

PrincipalComponents toy_components(int ages) {
  PrincipalComponents pc;
  pc.z1.resize(ages);
  pc.z2.resize(ages);
  for (int i = 0; i < ages; ++i) {
    pc.z1(i) = -1.0 / std::sqrt(static_cast<double>(ages));
    pc.z2(i) = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(static_cast<double>(ages));
  }
  for (int i = 0; i < ages; ++i) pc.age_labels.push_back("age" + std::to_string(i));
  return pc;
}

ModelObservation make_obs(int age, int t, int s, int year, double log_p, double var,
                          bool social) {
  ModelObservation o;
  o.age = age;
  o.t = t;
  o.s = s;
  o.year = year;
  o.log_p = log_p;
  o.sampling_var = var;
  o.social = social;
  return o;
}

ModelConfig quick_config(int chains = 2, int iter = 400, int warmup = 200, int thin = 2,
                         std::uint64_t seed = 5) {
  ModelConfig cfg;
  cfg.n_chains = chains;
  cfg.n_iter = iter;
  cfg.n_warmup = warmup;
  cfg.thin = thin;
  cfg.seed = seed;
  return cfg;
}

MigrantPanel tiny_survey(int regions, int year_from, int year_to, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dp(0.01, 0.2);
  std::vector<Region> regs;
  for (int i = 0; i < regions; ++i) {
    std::string c = "R" + std::to_string(i);
    regs.push_back({c, c});
  }
  std::vector<Observation> obs;
  for (int r = 0; r < regions; ++r) {
    for (int y = year_from; y <= year_to; ++y) {
      for (int a = 0; a < kNumAgeGroups; ++a) {
        Observation o;
        o.age = a;
        o.year = y;
        o.region = r;
        o.proportion = dp(gen);
        o.se = 0.05 * o.proportion;
        o.source = Source::survey;
        obs.push_back(o);
      }
    }
  }
  return MigrantPanel("x", regs, obs);
}

}  // namespace

TEST_CASE("build_inputs spans the survey, social and horizon years") {
  MigrantPanel survey = tiny_survey(3, 2001, 2016, 1);
  PrincipalComponents pc = canonical_components();

  std::vector<AdjustedObservation> social;
  for (int year : {2017, 2018}) {
    AdjustedObservation a;
    a.age = 0;
    a.year = year;
    a.region = "R0";
    a.wave_id = year - 2016;
    a.log_adjusted = std::log(0.05);
    a.proportion_raw = 0.02;
    a.population_count = 10000;
    social.push_back(a);
  }

  ModelInputs in = build_inputs(survey, social, 0.01, pc, 2);
  CHECK(in.dims().year0 == 2001);
  CHECK(in.dims().years == 18);  // 2001..2018
  CHECK(in.year(in.dims().years - 1) == 2018);
  CHECK(in.max_observed_year() == 2018);
  CHECK(in.social_indices().size() == 2);

  // no social observations: still valid
  ModelInputs acs_only = build_inputs(survey, {}, 0.0, pc, 0);
  CHECK(acs_only.dims().years == 16);

  // survey-only with horizon 1: final year carries no observations
  ModelInputs fc = build_inputs(survey, {}, 0.0, pc, 1);
  CHECK(fc.dims().years == 17);
  CHECK(fc.max_observed_year() == 2016);
  int last_t = fc.dims().years - 1;
  for (int s = 0; s < fc.dims().regions; ++s) CHECK(fc.obs_in_ts(last_t, s).empty());
}

TEST_CASE("build_inputs error paths") {
  MigrantPanel survey = tiny_survey(2, 2001, 2004, 2);
  PrincipalComponents bad = toy_components(4);
  CHECK_THROWS_AS(build_inputs(survey, {}, 0.0, bad, 1), Error);

  MigrantPanel empty("x", {}, {});
  try {
    build_inputs(empty, {}, 0.0, canonical_components(), 1);
    FAIL("expected EmptyInputs");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_inputs);
  }
}

TEST_CASE("log_posterior observation terms match the Gaussian density") {
  const int X = 4;
  PrincipalComponents pc = toy_components(X);
  ModelDims dims{X, 1, 1, 2000};
  ModelConfig cfg;

  ParameterState st = ParameterState::zeros(dims);
  st.sigma2_beta1 = st.sigma2_beta = st.sigma2_phi = st.sigma2_eps = st.sigma2_ns = 0.5;

  const double v = 0.04;
  double mu0 = log_mu(st, ModelInputs(dims, pc, {}, 0.0, {"R0"}), 0, 0, 0);

  // zero-residual observation adds exactly -0.5 log(2 pi v)
  ModelInputs in0(dims, pc, {}, 0.0, {"R0"});
  ModelInputs in1(dims, pc, {make_obs(0, 0, 0, 2000, mu0, v, false)}, 0.0, {"R0"});
  double base = log_posterior(st, in0, cfg);
  double with_obs = log_posterior(st, in1, cfg);
  CHECK(with_obs - base ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI * v)).epsilon(1e-10));

  // doubling a unit residual at v = 1 changes the term by -3/2
  ModelInputs r1(dims, pc, {make_obs(0, 0, 0, 2000, mu0 + 1.0, 1.0, false)}, 0.0, {"R0"});
  ModelInputs r2(dims, pc, {make_obs(0, 0, 0, 2000, mu0 + 2.0, 1.0, false)}, 0.0, {"R0"});
  CHECK(log_posterior(st, r2, cfg) - log_posterior(st, r1, cfg) ==
        doctest::Approx(-1.5).epsilon(1e-10));

  // social observation uses sampling var + sigma2_fb + sigma2_ns
  double fb = 0.02;
  ModelInputs f(dims, pc, {make_obs(0, 0, 0, 2000, mu0, 0.01, true)}, fb, {"R0"});
  double vtot = 0.01 + fb + st.sigma2_ns;
  CHECK(log_posterior(st, f, cfg) - base ==
        doctest::Approx(-0.5 * std::log(2.0 * M_PI * vtot)).epsilon(1e-10));
}

TEST_CASE("log_posterior with rho 0 and zero eps reduces to iid Normal terms") {
  const int X = 3;
  PrincipalComponents pc = toy_components(X);
  ModelDims dims{X, 4, 2, 2000};
  ModelConfig cfg;
  ModelInputs in(dims, pc, {}, 0.0, {"R0", "R1"});

  ParameterState st = ParameterState::zeros(dims);
  st.sigma2_beta1 = st.sigma2_beta = st.sigma2_phi = st.sigma2_ns = 1.0;
  st.sigma2_eps = 0.25;

  double lp = log_posterior(st, in, cfg);
  // eps contribution: X*T*S iid N(0, sigma2_eps) densities at zero
  // (stationary init with rho=0 equals sigma2_eps as well)
  double eps_part = X * 4 * 2 * (-0.5 * std::log(2.0 * M_PI * 0.25));
  // remove it by shrinking sigma2_eps? instead verify via difference of two
  // eps values: raising one eps entry to c changes lp by -c^2/(2 sigma2_eps)
  ParameterState st2 = st;
  st2.eps[0] = 0.3;
  double dlp = log_posterior(st2, in, cfg) - lp;
  CHECK(dlp == doctest::Approx(-0.5 * 0.09 / 0.25).epsilon(1e-10));
  CHECK(std::isfinite(eps_part));

  // invariant breach surfaces as NonFiniteDensity
  ParameterState bad = st;
  bad.rho[0] = 1.5;
  CHECK_THROWS_AS(log_posterior(bad, in, cfg), Error);
}

TEST_CASE("run_mcmc is deterministic given the seed") {
  MigrantPanel survey = tiny_survey(2, 2001, 2006, 3);
  PrincipalComponents pc = canonical_components();
  ModelInputs in = build_inputs(survey, {}, 0.0, pc, 1);
  ModelConfig cfg = quick_config(2, 120, 60, 2, 99);

  PosteriorSamples a = run_mcmc(in, cfg);
  PosteriorSamples b = run_mcmc(in, cfg);
  REQUIRE(a.chains.size() == b.chains.size());
  REQUIRE(a.draws_per_chain() == b.draws_per_chain());
  for (std::size_t c = 0; c < a.chains.size(); ++c) {
    for (std::size_t d = 0; d < a.chains[c].size(); ++d) {
      CHECK(a.chains[c][d].beta1 == b.chains[c][d].beta1);
      CHECK(a.chains[c][d].eps == b.chains[c][d].eps);
      CHECK(a.chains[c][d].sigma2_ns == b.chains[c][d].sigma2_ns);
      CHECK(a.chains[c][d].rho == b.chains[c][d].rho);
    }
  }
}

TEST_CASE("stripping social observations reproduces the survey-only graph") {
  MigrantPanel survey = tiny_survey(2, 2001, 2008, 4);
  PrincipalComponents pc = canonical_components();
  std::vector<AdjustedObservation> social;
  AdjustedObservation a;
  a.age = 2;
  a.year = 2009;
  a.region = "R0";
  a.wave_id = 1;
  a.log_adjusted = -2.5;
  a.proportion_raw = 0.05;
  a.population_count = 50000;
  social.push_back(a);

  ModelConfig cfg = quick_config(2, 100, 50, 1, 7);
  ModelInputs with_social = build_inputs(survey, social, 0.01, pc, 1);
  ModelInputs stripped = build_inputs(survey, {}, 0.01, pc, 1);

  // Same T span here (social year == survey_max + horizon), same seed, no
  // social rows: identical graphs must give identical seeded draws.
  CHECK(with_social.dims().years == stripped.dims().years);
  PosteriorSamples sa = run_mcmc(stripped, cfg);
  ModelInputs rebuilt = build_inputs(survey, {}, 0.01, pc, 1);
  PosteriorSamples sb = run_mcmc(rebuilt, cfg);
  for (std::size_t d = 0; d < sa.draws_per_chain(); ++d) {
    CHECK(sa.chains[0][d].beta1 == sb.chains[0][d].beta1);
  }
}

TEST_CASE("prior-only run reproduces the prior moments") {
  const int X = 9;
  PrincipalComponents pc = canonical_components();
  ModelDims dims{X, 3, 2, 2000};
  ModelInputs in(dims, pc, {}, 0.0, {"R0", "R1"});
  // The phi/beta2 translation mode mixes slowly under the diffuse prior, so
  // run long, thin hard, and use batch-means Monte-Carlo errors throughout.
  ModelConfig cfg = quick_config(4, 82000, 2000, 20, 31);

  PosteriorSamples s = run_mcmc(in, cfg);
  auto collect = [&](auto get) {
    std::vector<std::vector<double>> per_chain;
    for (const auto& chain : s.chains) {
      std::vector<double> v;
      for (const auto& st : chain) v.push_back(get(st));
      per_chain.push_back(std::move(v));
    }
    return per_chain;
  };
  // Pooled mean with a per-chain batch-means standard error.
  auto mean_se = [](const std::vector<std::vector<double>>& per_chain) {
    double mean = 0.0, se2 = 0.0;
    for (const auto& v : per_chain) {
      mean += testutil::moments(v).first;
      double se = testutil::batch_se(v);
      se2 += se * se;
    }
    double c = static_cast<double>(per_chain.size());
    return std::pair<double, double>(mean / c, std::sqrt(se2) / c);
  };
  auto check_moment = [&](const std::vector<std::vector<double>>& per_chain, double target,
                          const char* what) {
    auto [m, se] = mean_se(per_chain);
    INFO(what, ": estimate ", m, " target ", target, " se ", se);
    CHECK(std::abs(m - target) < 3.0 * se);
  };
  auto squared_dev = [](const std::vector<std::vector<double>>& per_chain, double center) {
    std::vector<std::vector<double>> out;
    for (const auto& v : per_chain) {
      std::vector<double> sq;
      for (double x : v) sq.push_back((x - center) * (x - center));
      out.push_back(std::move(sq));
    }
    return out;
  };

  auto beta1_init = collect([](const ParameterState& st) { return st.beta1[0]; });
  auto phi1 = collect([](const ParameterState& st) { return st.phi[0]; });
  auto sigma_ns = collect([](const ParameterState& st) { return std::sqrt(st.sigma2_ns); });
  auto rho0 = collect([](const ParameterState& st) { return st.rho[0]; });

  // beta_{1,s,1} ~ N(0, 100); phi_1 ~ N(0, 100)
  check_moment(beta1_init, 0.0, "mean beta1[0]");
  check_moment(squared_dev(beta1_init, 0.0), 100.0, "var beta1[0]");
  check_moment(phi1, 0.0, "mean phi[0]");
  check_moment(squared_dev(phi1, 0.0), 100.0, "var phi[0]");

  // sigma_ns ~ half-Normal(0,1)
  check_moment(sigma_ns, std::sqrt(2.0 / M_PI), "mean sigma_ns");

  // rho ~ Uniform(0,1): the Metropolis-within-Gibbs step must preserve it
  check_moment(rho0, 0.5, "mean rho[0]");
  auto [mr, se_r] = mean_se(squared_dev(rho0, 0.5));
  CHECK(std::abs(mr - 1.0 / 12.0) < std::max(3.0 * se_r, 0.005));
}

TEST_CASE("precision weighting pulls the posterior toward the survey source") {
  const int X = 9;
  PrincipalComponents pc = canonical_components();
  ModelDims dims{X, 1, 1, 2016};
  const double v = 0.01, fb = 0.02;
  const double y_survey = -3.0, y_social = -2.0;

  int closer = 0, runs = 5;
  for (int seed = 0; seed < runs; ++seed) {
    std::vector<ModelObservation> obs = {
        make_obs(4, 0, 0, 2016, y_survey, v, false),
        make_obs(4, 0, 0, 2016, y_social, v, true),
    };
    ModelInputs in(dims, pc, obs, fb, {"R0"});
    ModelConfig cfg = quick_config(2, 1500, 500, 2, 1000 + seed);
    PosteriorSamples s = run_mcmc(in, cfg);

    double acc = 0;
    std::size_t cnt = 0;
    for (const auto& chain : s.chains) {
      for (const auto& st : chain) {
        acc += log_mu(st, in, 4, 0, 0);
        ++cnt;
      }
    }
    double post_mean = acc / cnt;
    CHECK(post_mean > y_survey);
    CHECK(post_mean < y_social);
    if (std::abs(post_mean - y_survey) < std::abs(post_mean - y_social)) ++closer;
  }
  CHECK(closer == runs);
}

TEST_CASE("post-warmup draws respect the state invariants") {
  MigrantPanel survey = tiny_survey(2, 2001, 2006, 8);
  ModelInputs in = build_inputs(survey, {}, 0.0, canonical_components(), 1);
  ModelConfig cfg = quick_config(2, 200, 100, 1, 17);
  PosteriorSamples s = run_mcmc(in, cfg);
  for (const auto& chain : s.chains) {
    for (const auto& st : chain) {
      for (double r : st.rho) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
      }
      CHECK(st.sigma2_beta1 > 0);
      CHECK(st.sigma2_eps > 0);
      for (int x = 0; x < in.dims().ages; ++x) {
        for (int t = 0; t < in.dims().years; ++t) {
          for (int sreg = 0; sreg < in.dims().regions; ++sreg) {
            CHECK(std::isfinite(log_mu(st, in, x, t, sreg)));
          }
        }
      }
    }
  }
}

TEST_CASE("stationarity smoke test: the log posterior series is stable") {
  // Chains started from overdispersed points must settle into the same
  // log-posterior distribution, and running further must not shift it:
  // split R-hat on the derived lp series checks both at once.
  SimConfig sim;
  sim.regions = 3;
  sim.survey_year_start = 2001;
  sim.survey_year_end = 2010;
  sim.wave_year_start = 2011;
  sim.wave_year_end = 2011;
  MigrantPanel survey = generate(sim, 12).survey;
  ModelInputs in = build_inputs(survey, {}, 0.0, canonical_components(), 0);
  ModelConfig cfg = quick_config(3, 8000, 2000, 3, 23);
  PosteriorSamples s = run_mcmc(in, cfg);

  std::vector<std::vector<double>> lp(s.chains.size());
  for (std::size_t c = 0; c < s.chains.size(); ++c) {
    for (const auto& st : s.chains[c]) lp[c].push_back(log_posterior(st, in, cfg));
  }
  CHECK(split_rhat(lp) < 1.05);
}

TEST_CASE("split_rhat reference behaviors") {
  // identical constant chains -> 1 by convention
  std::vector<std::vector<double>> constant(3, std::vector<double>(100, 2.5));
  CHECK(split_rhat(constant) == 1.0);

  // two chains from the same Normal: close to 1
  Rng rng(5);
  std::vector<std::vector<double>> same(2);
  for (auto& c : same) {
    for (int i = 0; i < 1000; ++i) c.push_back(rng.normal());
  }
  double r_same = split_rhat(same);
  CHECK(r_same < 1.05);
  CHECK(r_same >= 0.99);

  // two chains at means +-5, sd 1: far above 3
  std::vector<std::vector<double>> apart(2);
  for (int i = 0; i < 1000; ++i) {
    apart[0].push_back(rng.normal(-5.0, 1.0));
    apart[1].push_back(rng.normal(5.0, 1.0));
  }
  CHECK(split_rhat(apart) > 3.0);

  CHECK_THROWS_AS(split_rhat({{1.0, 2.0}}), Error);
}

TEST_CASE("gelman_rubin covers the monitored set and flags convergence") {
  MigrantPanel survey = tiny_survey(2, 2001, 2006, 5);
  ModelInputs in = build_inputs(survey, {}, 0.0, canonical_components(), 0);
  ModelConfig cfg = quick_config(2, 1200, 400, 2, 9);
  PosteriorSamples s = run_mcmc(in, cfg);
  REQUIRE(!s.rhat.empty());
  CHECK(s.rhat.count("sigma2_eps") == 1);
  CHECK(s.rhat.count("sigma2_ns") == 1);
  int n_beta1 = 0;
  for (const auto& [k, v] : s.rhat) {
    if (k.rfind("beta1[", 0) == 0) ++n_beta1;
    CHECK(v > 0.0);
  }
  CHECK(n_beta1 == in.dims().years * in.dims().regions);

  auto sel = gelman_rubin(s, {"sigma2_eps"});
  CHECK(sel.size() == 1);
  CHECK(sel.count("sigma2_eps") == 1);
}

TEST_CASE("summarize: point mass, quantile interpolation, ordering") {
  const int X = 2;
  PrincipalComponents pc;
  pc.z1.resize(X);
  pc.z2.resize(X);
  pc.z1 << -1.0, 0.0;
  pc.z2 << 0.0, 1.0;
  pc.age_labels = {"age0", "age1"};
  ModelDims dims{X, 1, 1, 2010};
  ModelInputs in(dims, pc, {}, 0.0, {"R0"});

  // constant draws c: median and both endpoints equal exp(c)
  PosteriorSamples s;
  s.dims = dims;
  s.region_codes = {"R0"};
  s.config = quick_config();
  s.chains.resize(1);
  ParameterState st = ParameterState::zeros(dims);
  st.beta1[0] = 2.0;  // log mu(age0) = -2.0 via z1 = -1
  for (int i = 0; i < 50; ++i) s.chains[0].push_back(st);
  auto rows = summarize(s, in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].median == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(rows[0].lower95 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(rows[0].upper95 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  // draws {1..100}/100 on the log scale: 2.5% close to exp(log-quantile)
  s.chains[0].clear();
  for (int k = 1; k <= 100; ++k) {
    ParameterState d = ParameterState::zeros(dims);
    d.beta1[0] = -static_cast<double>(k) / 100.0;  // log mu(age0) = k/100
    s.chains[0].push_back(d);
  }
  rows = summarize(s, in);
  double log_q = 0.01 * (1.0 + 0.025 * 99.0);  // type-7 on the log draws
  CHECK(rows[0].lower95 == doctest::Approx(std::exp(log_q)).epsilon(1e-3));
  CHECK(rows[0].median == doctest::Approx((std::exp(0.50) + std::exp(0.51)) / 2).epsilon(1e-6));
  for (const auto& r : rows) {
    CHECK(r.lower95 <= r.median);
    CHECK(r.median <= r.upper95);
  }
}

TEST_CASE("quantile oracle") {
  std::vector<double> v;
  for (int k = 1; k <= 100; ++k) v.push_back(k / 100.0);
  CHECK(quantile(v, 0.5) == doctest::Approx(0.505));
  CHECK(quantile(v, 0.025) == doctest::Approx(0.01 + 0.01 * 0.025 * 99.0).epsilon(1e-9));
  CHECK(quantile(v, 0.0) == doctest::Approx(0.01));
  CHECK(quantile(v, 1.0) == doctest::Approx(1.0));
}
