// Parsing, validation and alignment of survey / social-media panels.

#include "migstock/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace migstock {

const std::array<std::string, kNumAgeGroups>& AgeGrid::labels() {
  static const std::array<std::string, kNumAgeGroups> kLabels = {
      "15-19", "20-24", "25-29", "30-34", "35-39", "40-44", "45-49", "50-54", "55-59"};
  return kLabels;
}

int AgeGrid::index_of(std::string_view label) {
  const auto& l = labels();
  for (int i = 0; i < kNumAgeGroups; ++i) {
    if (l[i] == label) return i;
  }
  return -1;
}

MigrantPanel::MigrantPanel(std::string origin, std::vector<Region> regions,
                           std::vector<Observation> observations)
    : origin_(std::move(origin)), regions_(std::move(regions)), obs_(std::move(observations)) {
  std::set<std::string> codes;
  for (const auto& r : regions_) {
    if (!codes.insert(r.code).second) {
      fail(Errc::bad_row, "duplicate region code '" + r.code + "'");
    }
  }
  std::set<std::tuple<int, int, int>> survey_cells;
  std::set<std::tuple<int, int, int, int>> wave_cells;
  year_min_ = obs_.empty() ? 0 : obs_.front().year;
  year_max_ = year_min_;
  for (const auto& o : obs_) {
    if (o.age < 0 || o.age >= kNumAgeGroups) fail(Errc::bad_age_group, "age index out of range");
    if (o.region < 0 || o.region >= static_cast<int>(regions_.size())) {
      fail(Errc::bad_row, "region index out of range");
    }
    if (!(o.proportion > 0.0 && o.proportion < 1.0)) {
      fail(Errc::bad_proportion, "proportion outside (0,1)");
    }
    if (o.has_se() && !std::isfinite(o.se)) fail(Errc::bad_row, "non-finite standard error");
    if (o.source == Source::survey) {
      if (o.wave_id >= 0) fail(Errc::unexpected_field, "survey observation carries a wave id");
      if (!survey_cells.insert({o.age, o.year, o.region}).second) {
        fail(Errc::duplicate_survey_cell, "duplicate survey cell");
      }
    } else {
      if (o.wave_id < 0) fail(Errc::missing_wave_id, "social observation without wave id");
      if (o.population_count < 1) fail(Errc::missing_population, "social observation without population count");
      if (!wave_cells.insert({o.age, o.year, o.region, o.wave_id}).second) {
        fail(Errc::duplicate_wave_cell, "duplicate social cell within a wave");
      }
    }
    year_min_ = std::min(year_min_, o.year);
    year_max_ = std::max(year_max_, o.year);
  }
}

int MigrantPanel::region_index(std::string_view code) const {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].code == code) return static_cast<int>(i);
  }
  return -1;
}

MigrantPanel MigrantPanel::restrict_source(Source s) const {
  std::vector<Observation> keep;
  for (const auto& o : obs_) {
    if (o.source == s) keep.push_back(o);
  }
  return MigrantPanel(origin_, regions_, std::move(keep));
}

MigrantPanel MigrantPanel::restrict_years(int from, int to) const {
  std::vector<Observation> keep;
  for (const auto& o : obs_) {
    if (o.year >= from && o.year <= to) keep.push_back(o);
  }
  return MigrantPanel(origin_, regions_, std::move(keep));
}

MigrantPanel MigrantPanel::restrict_wave(int wave_id) const {
  std::vector<Observation> keep;
  for (const auto& o : obs_) {
    if (o.source == Source::social && o.wave_id == wave_id) keep.push_back(o);
  }
  return MigrantPanel(origin_, regions_, std::move(keep));
}

int MigrantPanel::first_wave_id() const {
  int first = -1;
  for (const auto& o : obs_) {
    if (o.source == Source::social && (first < 0 || o.wave_id < first)) first = o.wave_id;
  }
  return first;
}

std::vector<int> MigrantPanel::survey_years() const {
  std::set<int> years;
  for (const auto& o : obs_) {
    if (o.source == Source::survey) years.insert(o.year);
  }
  return {years.begin(), years.end()};
}

namespace {

const std::array<std::string, 9> kColumns = {"origin",     "region", "age_group",
                                             "year",       "proportion", "se",
                                             "source",     "wave_id",    "population_count"};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::bad_row, std::string("row ") + std::to_string(row) + ": bad " + what + " '" + s + "'");
  }
}

long long parse_int(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::bad_row, std::string("row ") + std::to_string(row) + ": bad " + what + " '" + s + "'");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MigrantPanel parse_panel(const std::filesystem::path& path, Source source_kind) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) fail(Errc::missing_column, "empty file " + path.string());
  auto header = split_csv(line);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);
  for (const auto& c : kColumns) {
    if (!col.count(c)) fail(Errc::missing_column, "missing column '" + c + "' in " + path.string());
  }

  std::string origin;
  std::set<std::string> region_codes;
  struct RawRow {
    std::string region;
    Observation obs;
  };
  std::vector<RawRow> raw;

  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() < kColumns.size()) {
      fail(Errc::bad_row, "row " + std::to_string(row_no) + ": expected " +
                              std::to_string(kColumns.size()) + " fields, got " +
                              std::to_string(f.size()));
    }
    auto field = [&](const char* name) -> const std::string& { return f[col.at(name)]; };

    RawRow r;
    r.obs.year = static_cast<int>(parse_int(field("year"), row_no, "year"));
    r.region = field("region");
    if (r.region.empty()) fail(Errc::bad_row, "row " + std::to_string(row_no) + ": empty region");

    const std::string& age = field("age_group");
    r.obs.age = AgeGrid::index_of(age);
    if (r.obs.age < 0) {
      fail(Errc::bad_age_group, "row " + std::to_string(row_no) + ": unknown age group '" + age + "'");
    }

    r.obs.proportion = parse_double(field("proportion"), row_no, "proportion");
    if (!(r.obs.proportion > 0.0 && r.obs.proportion < 1.0)) {
      fail(Errc::bad_proportion,
           "row " + std::to_string(row_no) + ": proportion " + field("proportion") + " outside (0,1)");
    }

    const std::string& src = field("source");
    if (src == "survey") {
      r.obs.source = Source::survey;
    } else if (src == "social") {
      r.obs.source = Source::social;
    } else {
      fail(Errc::bad_row, "row " + std::to_string(row_no) + ": unknown source '" + src + "'");
    }
    if (r.obs.source != source_kind) {
      fail(Errc::source_mismatch,
           "row " + std::to_string(row_no) + ": source '" + src + "' does not match the requested kind");
    }

    if (!field("se").empty()) {
      r.obs.se = parse_double(field("se"), row_no, "se");
      if (!(r.obs.se >= 0.0) || !std::isfinite(r.obs.se)) {
        fail(Errc::bad_row, "row " + std::to_string(row_no) + ": negative or non-finite se");
      }
    }
    if (!field("wave_id").empty()) {
      r.obs.wave_id = static_cast<int>(parse_int(field("wave_id"), row_no, "wave_id"));
      if (r.obs.source == Source::survey) {
        fail(Errc::unexpected_field, "row " + std::to_string(row_no) + ": wave_id on a survey row");
      }
      if (r.obs.wave_id < 0) fail(Errc::bad_row, "row " + std::to_string(row_no) + ": negative wave_id");
    } else if (r.obs.source == Source::social) {
      fail(Errc::missing_wave_id, "row " + std::to_string(row_no) + ": social row without wave_id");
    }
    if (!field("population_count").empty()) {
      r.obs.population_count = parse_int(field("population_count"), row_no, "population_count");
      if (r.obs.population_count < 1) {
        fail(Errc::bad_row, "row " + std::to_string(row_no) + ": population_count must be positive");
      }
    } else if (r.obs.source == Source::social) {
      fail(Errc::missing_population,
           "row " + std::to_string(row_no) + ": social row without population_count");
    }

    const std::string& org = field("origin");
    if (origin.empty()) {
      origin = org;
    } else if (origin != org) {
      fail(Errc::origin_mismatch,
           "row " + std::to_string(row_no) + ": origin '" + org + "' differs from '" + origin + "'");
    }
    region_codes.insert(r.region);
    raw.push_back(std::move(r));
  }

  std::vector<Region> regions;
  std::map<std::string, int> region_idx;
  for (const auto& code : region_codes) {
    region_idx[code] = static_cast<int>(regions.size());
    regions.push_back({code, code});
  }
  std::vector<Observation> obs;
  obs.reserve(raw.size());
  for (auto& r : raw) {
    r.obs.region = region_idx.at(r.region);
    obs.push_back(r.obs);
  }
  return MigrantPanel(origin, std::move(regions), std::move(obs));
}

void serialize_panel(const MigrantPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  out << "origin,region,age_group,year,proportion,se,source,wave_id,population_count\n";
  for (const auto& o : panel.observations()) {
    out << panel.origin() << ',' << panel.regions()[o.region].code << ','
        << AgeGrid::labels()[o.age] << ',' << o.year << ',' << format_double(o.proportion) << ',';
    if (o.has_se()) out << format_double(o.se);
    out << ',' << (o.source == Source::survey ? "survey" : "social") << ',';
    if (o.wave_id >= 0) out << o.wave_id;
    out << ',';
    if (o.population_count >= 0) out << o.population_count;
    out << '\n';
  }
}

MigrantPanel align(const MigrantPanel& survey, const MigrantPanel& social) {
  if (survey.origin() != social.origin()) {
    fail(Errc::origin_mismatch,
         "'" + survey.origin() + "' vs '" + social.origin() + "'");
  }
  std::set<std::string> codes;
  for (const auto& r : survey.regions()) codes.insert(r.code);
  for (const auto& r : social.regions()) codes.insert(r.code);
  std::vector<Region> regions;
  std::map<std::string, int> idx;
  for (const auto& c : codes) {
    idx[c] = static_cast<int>(regions.size());
    regions.push_back({c, c});
  }
  std::vector<Observation> obs;
  for (const auto& o : survey.observations()) {
    Observation m = o;
    m.region = idx.at(survey.regions()[o.region].code);
    obs.push_back(m);
  }
  for (const auto& o : social.observations()) {
    Observation m = o;
    m.region = idx.at(social.regions()[o.region].code);
    obs.push_back(m);
  }
  return MigrantPanel(survey.origin(), std::move(regions), std::move(obs));
}

double sampling_variance_social(double proportion, std::int64_t population_count) {
  if (!(proportion > 0.0 && proportion < 1.0)) {
    fail(Errc::domain_error, "proportion outside (0,1)");
  }
  if (population_count < 1) fail(Errc::domain_error, "population_count must be >= 1");
  return proportion * (1.0 - proportion) / static_cast<double>(population_count);
}

double log_scale_variance(double proportion, double se_proportion) {
  if (!(proportion > 0.0)) fail(Errc::domain_error, "proportion must be positive");
  if (!(se_proportion >= 0.0)) fail(Errc::domain_error, "se must be non-negative");
  double r = se_proportion / proportion;
  return r * r;
}

double log_sampling_variance(const Observation& obs) {
  if (obs.source == Source::survey) {
    if (obs.has_se()) return log_scale_variance(obs.proportion, obs.se);
    if (obs.population_count >= 1) {
      double v = sampling_variance_social(obs.proportion, obs.population_count);
      return log_scale_variance(obs.proportion, std::sqrt(v));
    }
    fail(Errc::missing_standard_error,
         "survey observation carries neither se nor an effective sample size");
  }
  double v = sampling_variance_social(obs.proportion, obs.population_count);
  return log_scale_variance(obs.proportion, std::sqrt(v));
}

}  // namespace migstock
