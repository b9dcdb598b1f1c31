// Calibration of social-media proportions onto the survey scale.

#include "migstock/bias.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

namespace migstock {

bool BiasCoefficients::has_region(std::string_view code) const {
  return std::find(regions.begin(), regions.end(), code) != regions.end();
}

double BiasCoefficients::region_effect(std::string_view code) const {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (regions[i] == code) return region_effects[i];
  }
  fail(Errc::unseen_level, "region '" + std::string(code) + "' was not in the anchor fit");
}

double BiasCoefficients::age_effect(int age) const {
  if (age < 0 || age >= static_cast<int>(age_effects.size())) {
    fail(Errc::unseen_level, "age index " + std::to_string(age) + " out of range");
  }
  return age_effects[age];
}

nlohmann::json BiasCoefficients::to_json() const {
  nlohmann::json j;
  j["alpha0"] = alpha0;
  j["alpha1"] = alpha1;
  nlohmann::json ag = nlohmann::json::object();
  for (int i = 0; i < static_cast<int>(age_effects.size()); ++i) {
    ag[AgeGrid::labels()[i]] = age_effects[i];
  }
  j["age_effects"] = ag;
  nlohmann::json rg = nlohmann::json::object();
  for (std::size_t i = 0; i < regions.size(); ++i) rg[regions[i]] = region_effects[i];
  j["region_effects"] = rg;
  j["sigma2_fb"] = sigma2_fb;
  j["anchor_year"] = anchor_year;
  j["n_obs"] = n_obs;
  return j;
}

BiasCoefficients BiasCoefficients::from_json(const nlohmann::json& j) {
  BiasCoefficients c;
  c.alpha0 = j.at("alpha0").get<double>();
  c.alpha1 = j.at("alpha1").get<double>();
  c.age_effects.assign(kNumAgeGroups, 0.0);
  for (int i = 0; i < kNumAgeGroups; ++i) {
    c.age_effects[i] = j.at("age_effects").at(AgeGrid::labels()[i]).get<double>();
  }
  for (const auto& [code, v] : j.at("region_effects").items()) {
    c.regions.push_back(code);
    c.region_effects.push_back(v.get<double>());
  }
  c.sigma2_fb = j.at("sigma2_fb").get<double>();
  c.anchor_year = j.at("anchor_year").get<int>();
  c.n_obs = j.at("n_obs").get<int>();
  return c;
}

BiasCoefficients fit_bias_model(const MigrantPanel& survey_anchor,
                                const MigrantPanel& social_anchor) {
  // Pair cells on (age, region code). Survey cells are unique by panel
  // invariant; every social observation with a matching survey cell becomes
  // one regression row.
  std::map<std::pair<int, std::string>, double> survey_logp;
  int anchor_year = 0;
  for (const auto& o : survey_anchor.observations()) {
    if (o.source != Source::survey) continue;
    survey_logp[{o.age, survey_anchor.regions()[o.region].code}] = std::log(o.proportion);
    anchor_year = o.year;
  }
  struct Row {
    int age;
    std::string region;
    double log_survey, log_social;
  };
  std::vector<Row> rows;
  std::set<std::string> region_set;
  for (const auto& o : social_anchor.observations()) {
    if (o.source != Source::social) continue;
    const std::string& code = social_anchor.regions()[o.region].code;
    auto it = survey_logp.find({o.age, code});
    if (it == survey_logp.end()) continue;  // unpaired cells are dropped
    rows.push_back({o.age, code, it->second, std::log(o.proportion)});
    region_set.insert(code);
  }

  std::vector<std::string> regions(region_set.begin(), region_set.end());
  std::map<std::string, int> region_idx;
  for (std::size_t i = 0; i < regions.size(); ++i) region_idx[regions[i]] = static_cast<int>(i);

  const int n = static_cast<int>(rows.size());
  const int n_regions = static_cast<int>(regions.size());
  const int k = 2 + (kNumAgeGroups - 1) + std::max(0, n_regions - 1);
  if (n < k) {
    fail(Errc::insufficient_data, std::to_string(n) + " matched cells for " +
                                      std::to_string(k) + " coefficients");
  }

  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n, k);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const Row& r = rows[i];
    design(i, 0) = 1.0;
    design(i, 1) = r.log_social;
    if (r.age > 0) design(i, 2 + r.age - 1) = 1.0;
    int ri = region_idx.at(r.region);
    if (ri > 0) design(i, 2 + (kNumAgeGroups - 1) + ri - 1) = 1.0;
    y(i) = r.log_survey;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k) {
    fail(Errc::rank_deficient, "design rank " + std::to_string(qr.rank()) + " < " +
                                   std::to_string(k));
  }
  Eigen::VectorXd coef = qr.solve(y);
  Eigen::VectorXd resid = y - design * coef;
  int dof = n - k;
  double rss = resid.squaredNorm();

  BiasCoefficients out;
  out.alpha0 = coef(0);
  out.alpha1 = coef(1);
  out.age_effects.assign(kNumAgeGroups, 0.0);
  for (int a = 1; a < kNumAgeGroups; ++a) out.age_effects[a] = coef(2 + a - 1);
  out.regions = regions;
  out.region_effects.assign(n_regions, 0.0);
  for (int ri = 1; ri < n_regions; ++ri) {
    out.region_effects[ri] = coef(2 + (kNumAgeGroups - 1) + ri - 1);
  }
  out.sigma2_fb = dof > 0 ? rss / dof : 0.0;
  out.anchor_year = anchor_year;
  out.n_obs = n;
  return out;
}

double AdjustedObservation::log_sampling_var() const {
  double v = sampling_variance_social(proportion_raw, population_count);
  return log_scale_variance(proportion_raw, std::sqrt(v));
}

std::vector<AdjustedObservation> adjust_wave(const BiasCoefficients& coefs,
                                             const MigrantPanel& social) {
  std::vector<AdjustedObservation> out;
  out.reserve(social.observations().size());
  for (const auto& o : social.observations()) {
    if (o.source != Source::social) continue;
    const std::string& code = social.regions()[o.region].code;
    AdjustedObservation a;
    a.age = o.age;
    a.year = o.year;
    a.region = code;
    a.wave_id = o.wave_id;
    a.proportion_raw = o.proportion;
    a.population_count = o.population_count;
    a.log_adjusted = coefs.alpha0 + coefs.alpha1 * std::log(o.proportion) +
                     coefs.age_effect(o.age) + coefs.region_effect(code);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace migstock
