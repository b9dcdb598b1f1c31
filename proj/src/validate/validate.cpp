// Backtest of the nowcasting pipeline against three simpler alternatives.

#include "migstock/validate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "migstock/components.hpp"
#include "migstock/rng.hpp"
#include "migstock/sampler.hpp"
#include "migstock/summary.hpp"

namespace migstock {

Predictions moving_average_forecast(const MigrantPanel& survey, int holdout_year, int window,
                                    int* skipped) {
  if (window < 1) fail(Errc::bad_config, "window must be >= 1");
  // Observed survey proportions per (age, region), ordered by year.
  std::map<std::pair<int, std::string>, std::map<int, double>> series;
  for (const auto& o : survey.observations()) {
    if (o.source != Source::survey || o.year >= holdout_year) continue;
    series[{o.age, survey.regions()[o.region].code}][o.year] = o.proportion;
  }
  Predictions out;
  int dropped = 0;
  for (const auto& [key, by_year] : series) {
    if (static_cast<int>(by_year.size()) < window) {
      ++dropped;
      continue;
    }
    double sum = 0.0;
    auto it = by_year.rbegin();
    for (int k = 0; k < window; ++k, ++it) sum += it->second;
    out[key] = sum / window;
  }
  if (skipped) *skipped = dropped;
  if (out.empty()) fail(Errc::insufficient_history, "no cell has enough survey history");
  return out;
}

Predictions social_only_forecast(const std::vector<AdjustedObservation>& adjusted,
                                 int holdout_year, int* skipped) {
  std::map<std::pair<int, std::string>, std::pair<double, int>> acc;
  for (const auto& a : adjusted) {
    if (a.year != holdout_year) continue;
    auto& e = acc[{a.age, a.region}];
    e.first += a.log_adjusted;
    e.second += 1;
  }
  if (acc.empty()) fail(Errc::no_wave_data, "no adjusted waves in the holdout year");
  Predictions out;
  for (const auto& [key, e] : acc) out[key] = std::exp(e.first / e.second);
  if (skipped) *skipped = 0;
  return out;
}

double rmse(const Predictions& predictions, const Predictions& truth) {
  double ssq = 0.0;
  int n = 0;
  for (const auto& [key, p] : predictions) {
    auto it = truth.find(key);
    if (it == truth.end()) continue;
    double d = p - it->second;
    ssq += d * d;
    ++n;
  }
  if (n == 0) fail(Errc::no_overlap, "no cells shared between predictions and truth");
  return std::sqrt(ssq / n);
}

namespace {

Predictions model_predictions(const std::vector<CellSummary>& summary, int year) {
  Predictions out;
  for (const auto& cs : summary) {
    if (cs.year == year) out[{cs.age, cs.region}] = cs.median;
  }
  return out;
}

}  // namespace

ValidationReport run_validation(const MigrantPanel& survey, const MigrantPanel& social,
                                const ModelConfig& config) {
  std::vector<int> years = survey.survey_years();
  if (years.size() < 4) fail(Errc::insufficient_data, "need at least 4 survey years");
  const int holdout = years.back();
  const int fit_end = years[years.size() - 2];

  MigrantPanel fit_survey = survey.restrict_source(Source::survey).restrict_years(survey.year_min(), fit_end);
  MigrantPanel holdout_survey = survey.restrict_source(Source::survey).restrict_years(holdout, holdout);
  // Only waves already available by the holdout year may inform the backtest.
  MigrantPanel fit_social = social.restrict_source(Source::social).restrict_years(social.year_min(), holdout);

  Predictions truth;
  for (const auto& o : holdout_survey.observations()) {
    truth[{o.age, holdout_survey.regions()[o.region].code}] = o.proportion;
  }
  if (truth.empty()) fail(Errc::no_overlap, "no survey truth in the holdout year");

  ValidationReport rep;
  rep.holdout_year = holdout;

  // Bias fit anchored on the latest survey year in the fitted panel.
  MigrantPanel anchor_survey = fit_survey.restrict_years(fit_end, fit_end);
  int first_wave = fit_social.first_wave_id();
  if (first_wave < 0) fail(Errc::no_wave_data, "no social waves at or before the holdout year");
  BiasCoefficients bias = fit_bias_model(anchor_survey, fit_social.restrict_wave(first_wave));
  std::vector<AdjustedObservation> adjusted = adjust_wave(bias, fit_social);

  // Components from the fitted survey history.
  LogScheduleMatrix mat = build_log_matrix(fit_survey, fit_survey.year_min(), fit_end);
  PrincipalComponents comps = compute_components(impute_missing(mat));

  const int horizon = holdout - fit_end;

  std::map<std::string, Predictions> preds;
  int ma_skip = 0;
  preds["moving_average"] = moving_average_forecast(survey, holdout, 3, &ma_skip);
  rep.skipped["moving_average"] = ma_skip;
  preds["social_only"] = social_only_forecast(adjusted, holdout);
  rep.skipped["social_only"] = 0;

  ModelConfig cfg = config;
  cfg.horizon = horizon;

  cfg.seed = Rng::derive(config.seed, 101);
  ModelInputs survey_only_in = build_inputs(fit_survey, {}, bias.sigma2_fb, comps, horizon);
  PosteriorSamples survey_only_fit = run_mcmc(survey_only_in, cfg);
  preds["survey_only"] =
      model_predictions(summarize(survey_only_fit, survey_only_in), holdout);
  rep.skipped["survey_only"] = 0;

  cfg.seed = Rng::derive(config.seed, 102);
  ModelInputs combined_in = build_inputs(fit_survey, adjusted, bias.sigma2_fb, comps, horizon);
  PosteriorSamples combined_fit = run_mcmc(combined_in, cfg);
  preds["combined"] = model_predictions(summarize(combined_fit, combined_in), holdout);
  rep.skipped["combined"] = 0;

  // Common support: cells with truth and a prediction from every model.
  std::set<std::pair<int, std::string>> cells;
  for (const auto& [key, v] : truth) cells.insert(key);
  for (const auto& [name, p] : preds) {
    std::set<std::pair<int, std::string>> keep;
    for (const auto& key : cells) {
      if (p.count(key)) keep.insert(key);
    }
    cells.swap(keep);
  }
  if (cells.empty()) fail(Errc::no_overlap, "no common cells across models");
  rep.n_cells = static_cast<int>(cells.size());

  auto stratum_rmse = [&](const Predictions& p, auto filter) {
    Predictions pf, tf;
    for (const auto& key : cells) {
      if (!filter(key)) continue;
      pf[key] = p.at(key);
      tf[key] = truth.at(key);
    }
    return std::pair<double, int>(pf.empty() ? -1.0 : rmse(pf, tf),
                                  static_cast<int>(pf.size()));
  };

  for (const auto& [name, p] : preds) {
    rep.overall[name] = stratum_rmse(p, [](const auto&) { return true; }).first;
    for (int a = 0; a < kNumAgeGroups; ++a) {
      auto [v, n] = stratum_rmse(p, [a](const auto& key) { return key.first == a; });
      if (n > 0) {
        rep.by_age[name][AgeGrid::labels()[a]] = v;
        rep.age_cells[AgeGrid::labels()[a]] = n;
      }
    }
    std::set<std::string> region_codes;
    for (const auto& key : cells) region_codes.insert(key.second);
    for (const auto& rc : region_codes) {
      auto [v, n] = stratum_rmse(p, [&rc](const auto& key) { return key.second == rc; });
      if (n > 0) {
        rep.by_region[name][rc] = v;
        rep.region_cells[rc] = n;
      }
    }
  }
  return rep;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["holdout_year"] = holdout_year;
  j["n_cells"] = n_cells;
  j["overall"] = overall;
  j["by_age"] = by_age;
  j["by_region"] = by_region;
  j["age_cells"] = age_cells;
  j["region_cells"] = region_cells;
  j["skipped"] = skipped;
  return j;
}

}  // namespace migstock
