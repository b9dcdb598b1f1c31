#include <cmath>
#include <map>
#include <set>

#include "migstock/model.hpp"

namespace migstock {

namespace {
constexpr double kVarianceFloor = 1e-12;
}

void ModelConfig::validate() const {
  if (n_chains < 1) fail(Errc::bad_config, "n_chains must be >= 1");
  if (n_iter < 1) fail(Errc::bad_config, "n_iter must be >= 1");
  if (n_warmup < 0 || n_warmup >= n_iter) fail(Errc::bad_config, "need 0 <= n_warmup < n_iter");
  if (thin < 1) fail(Errc::bad_config, "thin must be >= 1");
  if (!(prior_scale_coeff > 0) || !(prior_scale_sd > 0)) {
    fail(Errc::bad_config, "prior scales must be positive");
  }
  if (!(rhat_threshold > 0)) fail(Errc::bad_config, "rhat_threshold must be positive");
  if (horizon < 0) fail(Errc::bad_config, "horizon must be >= 0");
  if (!(variance_floor > 0) || !(eps_init_cap >= 1)) fail(Errc::bad_config, "bad numeric guards");
}

ModelInputs::ModelInputs(ModelDims dims, PrincipalComponents components,
                         std::vector<ModelObservation> observations, double sigma2_fb,
                         std::vector<std::string> region_codes)
    : dims_(dims),
      components_(std::move(components)),
      obs_(std::move(observations)),
      sigma2_fb_(sigma2_fb),
      region_codes_(std::move(region_codes)) {
  if (dims_.ages < 2 || dims_.years < 1 || dims_.regions < 1) {
    fail(Errc::bad_config, "bad model dimensions");
  }
  if (components_.z1.size() != dims_.ages || components_.z2.size() != dims_.ages) {
    fail(Errc::age_grid_mismatch, "components not defined on the model age grid");
  }
  if (static_cast<int>(region_codes_.size()) != dims_.regions) {
    fail(Errc::bad_config, "region code table does not match dims");
  }
  if (!(sigma2_fb_ >= 0) || !std::isfinite(sigma2_fb_)) {
    fail(Errc::bad_config, "sigma2_fb must be finite and non-negative");
  }

  by_ts_.assign(static_cast<std::size_t>(dims_.years) * dims_.regions, {});
  by_xs_.assign(static_cast<std::size_t>(dims_.ages) * dims_.regions, {});
  max_observed_year_ = dims_.year0 - 1;
  for (int i = 0; i < static_cast<int>(obs_.size()); ++i) {
    const auto& o = obs_[i];
    if (o.age < 0 || o.age >= dims_.ages || o.t < 0 || o.t >= dims_.years || o.s < 0 ||
        o.s >= dims_.regions) {
      fail(Errc::bad_config, "observation outside the model grid");
    }
    if (!(o.sampling_var > 0) || !std::isfinite(o.sampling_var)) {
      fail(Errc::bad_config, "observation variance must be positive");
    }
    if (!std::isfinite(o.log_p)) fail(Errc::bad_config, "non-finite observation");
    by_ts_[o.t * dims_.regions + o.s].push_back(i);
    by_xs_[o.age * dims_.regions + o.s].push_back(i);
    if (o.social) social_idx_.push_back(i);
    max_observed_year_ = std::max(max_observed_year_, o.year);
  }
}

ModelInputs build_inputs(const MigrantPanel& survey,
                         const std::vector<AdjustedObservation>& social, double sigma2_fb,
                         const PrincipalComponents& components, int horizon) {
  if (horizon < 0) fail(Errc::bad_config, "horizon must be >= 0");
  if (static_cast<int>(components.age_labels.size()) != kNumAgeGroups) {
    fail(Errc::age_grid_mismatch, "components age grid has wrong size");
  }
  for (int i = 0; i < kNumAgeGroups; ++i) {
    if (components.age_labels[i] != AgeGrid::labels()[i]) {
      fail(Errc::age_grid_mismatch, "components age labels differ from the panel grid");
    }
  }

  bool any_survey = false;
  int year_min = 0, year_max = 0;
  std::set<std::string> codes;
  for (const auto& o : survey.observations()) {
    if (o.source != Source::survey) continue;
    if (!any_survey) {
      year_min = year_max = o.year;
      any_survey = true;
    }
    year_min = std::min(year_min, o.year);
    year_max = std::max(year_max, o.year);
    codes.insert(survey.regions()[o.region].code);
  }
  if (!any_survey) fail(Errc::empty_inputs, "no survey observations");

  int last_year = year_max + horizon;
  for (const auto& a : social) {
    codes.insert(a.region);
    last_year = std::max(last_year, a.year);
    if (a.year < year_min) {
      fail(Errc::bad_config, "social observation predates the survey panel");
    }
  }

  ModelDims dims;
  dims.ages = kNumAgeGroups;
  dims.year0 = year_min;
  dims.years = last_year - year_min + 1;
  dims.regions = static_cast<int>(codes.size());

  std::vector<std::string> region_codes(codes.begin(), codes.end());
  std::map<std::string, int> region_idx;
  for (int i = 0; i < dims.regions; ++i) region_idx[region_codes[i]] = i;

  std::vector<ModelObservation> obs;
  for (const auto& o : survey.observations()) {
    if (o.source != Source::survey) continue;
    ModelObservation m;
    m.age = o.age;
    m.year = o.year;
    m.t = o.year - dims.year0;
    m.s = region_idx.at(survey.regions()[o.region].code);
    m.log_p = std::log(o.proportion);
    m.sampling_var = std::max(log_sampling_variance(o), kVarianceFloor);
    m.social = false;
    obs.push_back(m);
  }
  for (const auto& a : social) {
    ModelObservation m;
    m.age = a.age;
    m.year = a.year;
    m.t = a.year - dims.year0;
    m.s = region_idx.at(a.region);
    m.log_p = a.log_adjusted;
    m.sampling_var = std::max(a.log_sampling_var(), kVarianceFloor);
    m.social = true;
    m.wave_id = a.wave_id;
    obs.push_back(m);
  }

  return ModelInputs(dims, components, std::move(obs), sigma2_fb, std::move(region_codes));
}

ParameterState ParameterState::zeros(const ModelDims& dims) {
  ParameterState st;
  st.beta1.assign(static_cast<std::size_t>(dims.years) * dims.regions, 0.0);
  st.beta2.assign(static_cast<std::size_t>(dims.years) * dims.regions, 0.0);
  st.phi.assign(dims.years, 0.0);
  st.eps.assign(static_cast<std::size_t>(dims.ages) * dims.regions * dims.years, 0.0);
  st.rho.assign(static_cast<std::size_t>(dims.ages) * dims.regions, 0.0);
  return st;
}

}  // namespace migstock
