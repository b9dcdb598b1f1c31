// migstock: nowcasting engine for migrant-stock proportions.
// Subcommands: simulate | fit | validate | export-plots.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "migstock/components.hpp"
#include "migstock/diagnostics.hpp"
#include "migstock/forecast.hpp"
#include "migstock/sampler.hpp"
#include "migstock/simulate.hpp"
#include "migstock/store.hpp"
#include "migstock/summary.hpp"
#include "migstock/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace migstock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;

// Effective run settings: config-file values overridden by explicit flags.
class Settings {
 public:
  void load_file(const fs::path& p) { file_ = read_config_file(p); }
  void override_value(const std::string& key, const std::string& value) { flags_[key] = value; }

  std::string get(const std::string& key, const std::string& def) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    return def;
  }
  long long get_int(const std::string& key, long long def) const {
    std::string v = get(key, "");
    if (v.empty()) return def;
    try {
      return std::stoll(v);
    } catch (...) {
      fail(Errc::bad_config, "bad integer for '" + key + "': " + v);
    }
  }
  double get_double(const std::string& key, double def) const {
    std::string v = get(key, "");
    if (v.empty()) return def;
    try {
      return std::stod(v);
    } catch (...) {
      fail(Errc::bad_config, "bad number for '" + key + "': " + v);
    }
  }
  bool get_bool(const std::string& key, bool def) const {
    std::string v = get(key, "");
    if (v.empty()) return def;
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(Errc::bad_config, "bad boolean for '" + key + "': " + v);
  }

 private:
  std::map<std::string, std::string> file_, flags_;
};

ModelConfig model_config(const Settings& s) {
  ModelConfig cfg;
  cfg.n_chains = static_cast<int>(s.get_int("chains", cfg.n_chains));
  cfg.n_iter = static_cast<int>(s.get_int("iters", cfg.n_iter));
  cfg.n_warmup = static_cast<int>(s.get_int("warmup", cfg.n_warmup));
  cfg.thin = static_cast<int>(s.get_int("thin", cfg.thin));
  cfg.seed = static_cast<std::uint64_t>(s.get_int("seed", 1));
  cfg.prior_scale_coeff = s.get_double("prior_scale_coeff", cfg.prior_scale_coeff);
  cfg.prior_scale_sd = s.get_double("prior_scale_sd", cfg.prior_scale_sd);
  cfg.rhat_threshold = s.get_double("rhat_threshold", cfg.rhat_threshold);
  cfg.horizon = static_cast<int>(s.get_int("horizon", cfg.horizon));
  cfg.validate();
  return cfg;
}

json model_config_echo(const ModelConfig& cfg) {
  return json{{"chains", cfg.n_chains},
              {"iters", cfg.n_iter},
              {"warmup", cfg.n_warmup},
              {"thin", cfg.thin},
              {"seed", cfg.seed},
              {"prior_scale_coeff", cfg.prior_scale_coeff},
              {"prior_scale_sd", cfg.prior_scale_sd},
              {"rhat_threshold", cfg.rhat_threshold},
              {"horizon", cfg.horizon}};
}

SimConfig sim_config(const Settings& s) {
  SimConfig cfg;
  cfg.regions = static_cast<int>(s.get_int("sim.regions", cfg.regions));
  cfg.survey_year_start = static_cast<int>(s.get_int("sim.survey_year_start", cfg.survey_year_start));
  cfg.survey_year_end = static_cast<int>(s.get_int("sim.survey_year_end", cfg.survey_year_end));
  cfg.wave_year_start = static_cast<int>(s.get_int("sim.wave_year_start", cfg.wave_year_start));
  cfg.wave_year_end = static_cast<int>(s.get_int("sim.wave_year_end", cfg.wave_year_end));
  cfg.waves_per_year = static_cast<int>(s.get_int("sim.waves_per_year", cfg.waves_per_year));
  cfg.origin = s.get("sim.origin", cfg.origin);
  cfg.sigma_s_survey = s.get_double("sim.sigma_s", cfg.sigma_s_survey);
  cfg.fb_population = s.get_int("sim.fb_population", cfg.fb_population);
  cfg.fb_sampling_noise = s.get_bool("sim.fb_sampling_noise", cfg.fb_sampling_noise);
  cfg.beta1_level = s.get_double("sim.beta1_level", cfg.beta1_level);
  cfg.beta1_spread = s.get_double("sim.beta1_spread", cfg.beta1_spread);
  cfg.sigma_beta1 = s.get_double("sim.sigma_beta1", cfg.sigma_beta1);
  cfg.sigma_beta = s.get_double("sim.sigma_beta", cfg.sigma_beta);
  cfg.sigma_phi = s.get_double("sim.sigma_phi", cfg.sigma_phi);
  cfg.sigma_eps = s.get_double("sim.sigma_eps", cfg.sigma_eps);
  cfg.rho_min = s.get_double("sim.rho_min", cfg.rho_min);
  cfg.rho_max = s.get_double("sim.rho_max", cfg.rho_max);
  cfg.sigma_fb = s.get_double("sim.sigma_fb", cfg.sigma_fb);
  cfg.sigma_ns = s.get_double("sim.sigma_ns", cfg.sigma_ns);
  cfg.alpha0 = s.get_double("sim.alpha0", cfg.alpha0);
  cfg.alpha1 = s.get_double("sim.alpha1", cfg.alpha1);
  cfg.validate();
  return cfg;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + p.string());
  out << content;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

json digest_entry(const std::string& path_as_given, const fs::path& actual) {
  return json{{"path", path_as_given}, {"sha256", sha256_file(actual)}};
}

// Output digests, computed after all files exist; paths relative to out_dir.
json output_digests(const fs::path& out_dir, const std::vector<std::string>& names) {
  json j;
  for (const auto& n : names) j[n] = sha256_file(out_dir / n);
  return j;
}

struct FitArtifacts {
  BiasCoefficients bias;
  std::vector<AdjustedObservation> adjusted;
  PrincipalComponents components;
  ModelInputs inputs;
  PosteriorSamples samples;
  int anchor_year = 0;
};

FitArtifacts run_fit_pipeline(const MigrantPanel& survey, const std::optional<MigrantPanel>& social,
                              int anchor_year, const ModelConfig& cfg) {
  BiasCoefficients bias;
  std::vector<AdjustedObservation> adjusted;
  if (social && !social->empty()) {
    MigrantPanel anchor_panel = survey.restrict_years(anchor_year, anchor_year);
    if (anchor_panel.empty()) {
      fail(Errc::empty_selection, "no survey rows in anchor year " + std::to_string(anchor_year));
    }
    int first_wave = social->first_wave_id();
    bias = fit_bias_model(anchor_panel, social->restrict_wave(first_wave));
    adjusted = adjust_wave(bias, *social);
  } else {
    bias.age_effects.assign(kNumAgeGroups, 0.0);
    bias.anchor_year = anchor_year;
  }

  LogScheduleMatrix mat = build_log_matrix(survey, survey.year_min(), survey.year_max());
  PrincipalComponents comps = compute_components(impute_missing(mat));

  ModelInputs inputs = build_inputs(survey, adjusted, bias.sigma2_fb, comps, cfg.horizon);
  PosteriorSamples samples = run_mcmc(inputs, cfg);
  return FitArtifacts{std::move(bias), std::move(adjusted), std::move(comps),
                      std::move(inputs), std::move(samples), anchor_year};
}

void write_adjusted_csv(const std::vector<AdjustedObservation>& adjusted, const fs::path& p) {
  std::ofstream out(p);
  if (!out) fail(Errc::io_error, "cannot write " + p.string());
  out << "age_group,year,region,wave_id,log_adjusted,proportion_raw,population_count\n";
  for (const auto& a : adjusted) {
    out << AgeGrid::labels()[a.age] << ',' << a.year << ',' << a.region << ',' << a.wave_id << ','
        << format_full(a.log_adjusted) << ',' << format_full(a.proportion_raw) << ','
        << a.population_count << '\n';
  }
}

void write_biasfit_csv(const MigrantPanel& survey_anchor, const MigrantPanel& social_first_wave,
                       const BiasCoefficients& bias, const fs::path& p) {
  std::map<std::pair<int, std::string>, double> survey_logp;
  for (const auto& o : survey_anchor.observations()) {
    survey_logp[{o.age, survey_anchor.regions()[o.region].code}] = std::log(o.proportion);
  }
  std::ofstream out(p);
  if (!out) fail(Errc::io_error, "cannot write " + p.string());
  out << "age_group,region,log_survey,log_social_raw,log_social_adjusted\n";
  for (const auto& o : social_first_wave.observations()) {
    const std::string& code = social_first_wave.regions()[o.region].code;
    auto it = survey_logp.find({o.age, code});
    if (it == survey_logp.end()) continue;
    double raw = std::log(o.proportion);
    double adj = bias.alpha0 + bias.alpha1 * raw + bias.age_effect(o.age) + bias.region_effect(code);
    out << AgeGrid::labels()[o.age] << ',' << code << ',' << format_full(it->second) << ','
        << format_full(raw) << ',' << format_full(adj) << '\n';
  }
}

// ---- subcommands -----------------------------------------------------------

int cmd_simulate(const Settings& settings, const fs::path& out_dir) {
  SimConfig cfg = sim_config(settings);
  std::uint64_t seed = static_cast<std::uint64_t>(settings.get_int("seed", 1));
  SimOutput out = generate(cfg, seed);

  fs::create_directories(out_dir);
  serialize_panel(out.survey, out_dir / "survey.csv");
  serialize_panel(out.social, out_dir / "social.csv");
  write_json(out_dir / "truth.json", out.truth.to_json());

  json manifest;
  manifest["command"] = "simulate";
  manifest["seed"] = seed;
  manifest["config"] = cfg.to_json();
  manifest["outputs"] = output_digests(out_dir, {"survey.csv", "social.csv", "truth.json"});
  write_json(out_dir / "manifest.json", manifest);
  return kExitOk;
}

int cmd_fit(const Settings& settings, const std::string& survey_path,
            const std::string& social_path, const fs::path& out_dir) {
  ModelConfig cfg = model_config(settings);
  MigrantPanel survey = parse_panel(survey_path, Source::survey);
  std::optional<MigrantPanel> social;
  if (!social_path.empty()) social = parse_panel(social_path, Source::social);

  int anchor_default = 0;
  for (int y : survey.survey_years()) anchor_default = y;
  int anchor_year = static_cast<int>(settings.get_int("anchor_year", anchor_default));

  FitArtifacts art = run_fit_pipeline(survey, social, anchor_year, cfg);

  fs::create_directories(out_dir);
  write_json(out_dir / "bias.json", art.bias.to_json());
  write_json(out_dir / "components.json", art.components.to_json());
  write_summary_csv(summarize(art.samples, art.inputs), out_dir / "summary.csv", true);
  write_adjusted_csv(art.adjusted, out_dir / "adjusted.csv");
  if (social && !social->empty()) {
    write_biasfit_csv(survey.restrict_years(anchor_year, anchor_year),
                      social->restrict_wave(social->first_wave_id()), art.bias,
                      out_dir / "biasfit.csv");
  } else {
    write_text(out_dir / "biasfit.csv",
               "age_group,region,log_survey,log_social_raw,log_social_adjusted\n");
  }
  write_samples_csv(art.samples, out_dir / "samples");

  double rhat_max = 0.0;
  json rhat_table;
  for (const auto& [name, v] : art.samples.rhat) {
    rhat_table[name] = v;
    rhat_max = std::max(rhat_max, v);
  }

  json manifest;
  manifest["command"] = "fit";
  manifest["config"] = model_config_echo(cfg);
  manifest["anchor_year"] = anchor_year;
  manifest["inputs"]["survey"] = digest_entry(survey_path, survey_path);
  if (!social_path.empty()) manifest["inputs"]["social"] = digest_entry(social_path, social_path);
  manifest["sigma2_fb"] = art.bias.sigma2_fb;
  manifest["rhat"] = rhat_table;
  manifest["rhat_max"] = rhat_max;
  manifest["converged"] = art.samples.converged;
  std::vector<std::string> outs = {"bias.json", "components.json", "summary.csv",
                                   "adjusted.csv", "biasfit.csv"};
  for (int c = 0; c < cfg.n_chains; ++c) outs.push_back("samples/chain_" + std::to_string(c) + ".csv");
  outs.push_back("samples/manifest.json");
  manifest["outputs"] = output_digests(out_dir, outs);
  write_json(out_dir / "manifest.json", manifest);

  if (!art.samples.converged) {
    std::cerr << "warning: R-hat " << rhat_max << " exceeds threshold " << cfg.rhat_threshold
              << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_validate(const Settings& settings, const std::string& survey_path,
                 const std::string& social_path, const fs::path& out_dir) {
  ModelConfig cfg = model_config(settings);
  MigrantPanel survey = parse_panel(survey_path, Source::survey);
  MigrantPanel social = parse_panel(social_path, Source::social);

  ValidationReport rep = run_validation(survey, social, cfg);

  fs::create_directories(out_dir);
  write_json(out_dir / "report.json", rep.to_json());

  std::string overall = "model,rmse,n_cells\n";
  for (const auto& [model, v] : rep.overall) {
    overall += model + "," + format_full(v) + "," + std::to_string(rep.n_cells) + "\n";
  }
  write_text(out_dir / "rmse_overall.csv", overall);

  std::string by_age = "model,age_group,rmse,n_cells\n";
  for (const auto& [model, m] : rep.by_age) {
    for (const auto& [age, v] : m) {
      by_age += model + "," + age + "," + format_full(v) + "," +
                std::to_string(rep.age_cells.at(age)) + "\n";
    }
  }
  write_text(out_dir / "rmse_by_age.csv", by_age);

  std::string by_region = "model,region,rmse,n_cells\n";
  for (const auto& [model, m] : rep.by_region) {
    for (const auto& [rc, v] : m) {
      by_region += model + "," + rc + "," + format_full(v) + "," +
                   std::to_string(rep.region_cells.at(rc)) + "\n";
    }
  }
  write_text(out_dir / "rmse_by_region.csv", by_region);

  json manifest;
  manifest["command"] = "validate";
  manifest["config"] = model_config_echo(cfg);
  manifest["inputs"]["survey"] = digest_entry(survey_path, survey_path);
  manifest["inputs"]["social"] = digest_entry(social_path, social_path);
  manifest["holdout_year"] = rep.holdout_year;
  manifest["outputs"] = output_digests(
      out_dir, {"report.json", "rmse_overall.csv", "rmse_by_age.csv", "rmse_by_region.csv"});
  write_json(out_dir / "manifest.json", manifest);
  return kExitOk;
}

// ---- export-plots ----------------------------------------------------------

struct SummaryRow {
  std::string age, region, kind;
  int year;
  double median, lower, upper;
};

std::vector<SummaryRow> read_summary(const fs::path& p) {
  std::ifstream in(p);
  if (!in) fail(Errc::io_error, "cannot open " + p.string());
  std::string line;
  std::getline(in, line);
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SummaryRow r;
    std::stringstream ss(line);
    std::string f;
    std::getline(ss, r.age, ',');
    std::getline(ss, f, ',');
    r.year = std::stoi(f);
    std::getline(ss, r.region, ',');
    std::getline(ss, f, ',');
    r.median = std::stod(f);
    std::getline(ss, f, ',');
    r.lower = std::stod(f);
    std::getline(ss, f, ',');
    r.upper = std::stod(f);
    if (!std::getline(ss, r.kind, ',')) r.kind = "estimate";
    rows.push_back(std::move(r));
  }
  return rows;
}

int export_timeseries(const fs::path& run_dir, const fs::path& out_dir) {
  json manifest = json::parse(read_text(run_dir / "manifest.json"));
  auto rows = read_summary(run_dir / "summary.csv");

  // survey observations, keyed (age, year, region)
  std::map<std::tuple<std::string, int, std::string>, std::pair<double, double>> survey_pts;
  std::string survey_path = manifest.at("inputs").at("survey").at("path").get<std::string>();
  MigrantPanel survey = parse_panel(survey_path, Source::survey);
  for (const auto& o : survey.observations()) {
    survey_pts[{AgeGrid::labels()[o.age], o.year, survey.regions()[o.region].code}] = {
        o.proportion, o.has_se() ? o.se : std::nan("")};
  }

  // adjusted social means per cell
  std::map<std::tuple<std::string, int, std::string>, std::pair<double, int>> social_acc;
  std::ifstream adj(run_dir / "adjusted.csv");
  if (adj) {
    std::string line;
    std::getline(adj, line);
    while (std::getline(adj, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string age, year_s, region, wave, logp;
      std::getline(ss, age, ',');
      std::getline(ss, year_s, ',');
      std::getline(ss, region, ',');
      std::getline(ss, wave, ',');
      std::getline(ss, logp, ',');
      auto& e = social_acc[{age, std::stoi(year_s), region}];
      e.first += std::stod(logp);
      e.second += 1;
    }
  }

  std::string out = "age_group,year,region,kind,median,lower95,upper95,survey_proportion,"
                    "survey_se,social_adjusted_mean\n";
  for (const auto& r : rows) {
    out += r.age + "," + std::to_string(r.year) + "," + r.region + "," + r.kind + "," +
           format_full(r.median) + "," + format_full(r.lower) + "," + format_full(r.upper) + ",";
    auto sp = survey_pts.find({r.age, r.year, r.region});
    if (sp != survey_pts.end()) {
      out += format_full(sp->second.first);
      out += ",";
      if (sp->second.second == sp->second.second) out += format_full(sp->second.second);
    } else {
      out += ",";
    }
    out += ",";
    auto sa = social_acc.find({r.age, r.year, r.region});
    if (sa != social_acc.end()) out += format_full(std::exp(sa->second.first / sa->second.second));
    out += "\n";
  }
  fs::create_directories(out_dir);
  write_text(out_dir / "timeseries.csv", out);
  return kExitOk;
}

int export_age_dist(const fs::path& run_dir, const fs::path& out_dir) {
  auto rows = read_summary(run_dir / "summary.csv");
  std::map<std::pair<std::string, int>, double> totals;
  for (const auto& r : rows) totals[{r.region, r.year}] += r.median;
  std::string out = "region,year,age_group,median,lower95,upper95,share\n";
  for (const auto& r : rows) {
    double tot = totals.at({r.region, r.year});
    out += r.region + "," + std::to_string(r.year) + "," + r.age + "," + format_full(r.median) +
           "," + format_full(r.lower) + "," + format_full(r.upper) + "," +
           format_full(tot > 0 ? r.median / tot : 0.0) + "\n";
  }
  fs::create_directories(out_dir);
  write_text(out_dir / "age_dist.csv", out);
  return kExitOk;
}

int export_bias_fit(const fs::path& run_dir, const fs::path& out_dir) {
  std::string content = read_text(run_dir / "biasfit.csv");
  fs::create_directories(out_dir);
  write_text(out_dir / "bias_fit.csv", content);
  return kExitOk;
}

int export_rmse(const fs::path& run_dir, const fs::path& out_dir) {
  json rep = json::parse(read_text(run_dir / "report.json"));
  std::string out = "model,stratum_kind,stratum,rmse,n_cells\n";
  for (const auto& [model, v] : rep.at("overall").items()) {
    out += model + ",overall,all," + format_full(v.get<double>()) + "," +
           std::to_string(rep.at("n_cells").get<int>()) + "\n";
  }
  for (const auto& [model, m] : rep.at("by_age").items()) {
    for (const auto& [age, v] : m.items()) {
      out += model + ",age," + age + "," + format_full(v.get<double>()) + "," +
             std::to_string(rep.at("age_cells").at(age).get<int>()) + "\n";
    }
  }
  for (const auto& [model, m] : rep.at("by_region").items()) {
    for (const auto& [rc, v] : m.items()) {
      out += model + ",region," + rc + "," + format_full(v.get<double>()) + "," +
             std::to_string(rep.at("region_cells").at(rc).get<int>()) + "\n";
    }
  }
  fs::create_directories(out_dir);
  write_text(out_dir / "rmse_long.csv", out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Migrant-stock nowcasting engine: combines a survey panel with "
               "bias-adjusted social-media reach data"};
  app.require_subcommand(1);

  std::string config_file, out_dir, survey_path, social_path, run_dir, kind;
  std::vector<std::pair<std::string, std::string>> overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Run configuration file (key = value lines)");
    cmd->add_option("--out-dir", out_dir, "Output directory")->required();
  };
  auto add_sampler_flags = [&](CLI::App* cmd) {
    for (const char* key : {"seed", "chains", "iters", "warmup", "thin", "horizon",
                            "anchor_year", "prior_scale_coeff", "prior_scale_sd",
                            "rhat_threshold"}) {
      std::string flag = "--" + std::string(key);
      for (auto& c : flag) {
        if (c == '_') c = '-';
      }
      cmd->add_option_function<std::string>(
          flag, [&overrides, key](const std::string& v) { overrides.push_back({key, v}); });
    }
  };

  CLI::App* sim = app.add_subcommand("simulate", "Generate synthetic survey and social panels");
  add_common(sim);
  sim->add_option_function<std::string>(
      "--seed", [&](const std::string& v) { overrides.push_back({"seed", v}); });

  CLI::App* fit = app.add_subcommand("fit", "Fit the combined model and write nowcasts");
  add_common(fit);
  fit->add_option("--survey", survey_path, "Survey panel CSV")->required();
  fit->add_option("--social", social_path, "Social-media panel CSV");
  add_sampler_flags(fit);

  CLI::App* val = app.add_subcommand("validate", "Hold out the final survey year and compare models");
  add_common(val);
  val->add_option("--survey", survey_path, "Survey panel CSV")->required();
  val->add_option("--social", social_path, "Social-media panel CSV")->required();
  add_sampler_flags(val);

  CLI::App* exp = app.add_subcommand("export-plots", "Export tidy CSVs from a run directory");
  exp->add_option("--run-dir", run_dir, "fit or validate output directory")->required();
  exp->add_option("--kind", kind, "timeseries | age-dist | bias-fit | rmse")->required();
  exp->add_option("--out-dir", out_dir, "Output directory (default <run-dir>/plots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Settings settings;
    if (!config_file.empty()) settings.load_file(config_file);
    for (const auto& [k, v] : overrides) settings.override_value(k, v);

    if (sim->parsed()) return cmd_simulate(settings, out_dir);
    if (fit->parsed()) return cmd_fit(settings, survey_path, social_path, out_dir);
    if (val->parsed()) return cmd_validate(settings, survey_path, social_path, out_dir);
    if (exp->parsed()) {
      fs::path rd = run_dir;
      fs::path od = out_dir.empty() ? rd / "plots" : fs::path(out_dir);
      if (kind == "timeseries") return export_timeseries(rd, od);
      if (kind == "age-dist") return export_age_dist(rd, od);
      if (kind == "bias-fit") return export_bias_fit(rd, od);
      if (kind == "rmse") return export_rmse(rd, od);
      std::cerr << "unknown --kind '" << kind << "'\n";
      return kExitUsage;
    }
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
