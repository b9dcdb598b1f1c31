#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "migstock/error.hpp"

namespace migstock {

inline constexpr int kNumAgeGroups = 9;

/// The fixed five-year age grid 15-19 .. 50-54.
struct AgeGrid {
  static const std::array<std::string, kNumAgeGroups>& labels();
  static int index_of(std::string_view label);  // -1 when unknown
  static int lower_bound(int index) { return 15 + 5 * index; }
};

enum class Source { survey, social };

struct Region {
  std::string code;
  std::string name;
};

struct Observation {
  int age = -1;    // AgeGrid index
  int year = 0;    // calendar year
  int region = -1; // index into the owning panel's region table
  double proportion = 0.0;
  double se = std::numeric_limits<double>::quiet_NaN();  // proportion-scale SE, NaN = absent
  Source source = Source::survey;
  int wave_id = -1;                     // social rows only
  std::int64_t population_count = -1;   // social: platform population; survey: optional
                                        // effective sample size for the SE fallback
  bool has_se() const { return se == se; }
};

/// Indexed panel of migrant-proportion observations for one origin group.
class MigrantPanel {
 public:
  MigrantPanel() = default;
  MigrantPanel(std::string origin, std::vector<Region> regions,
               std::vector<Observation> observations);

  const std::string& origin() const { return origin_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<Observation>& observations() const { return obs_; }
  bool empty() const { return obs_.empty(); }
  int year_min() const { return year_min_; }
  int year_max() const { return year_max_; }
  int region_index(std::string_view code) const;  // -1 when unknown

  MigrantPanel restrict_source(Source s) const;
  MigrantPanel restrict_years(int from, int to) const;
  MigrantPanel restrict_wave(int wave_id) const;
  /// Smallest wave id among social observations, or -1 if none.
  int first_wave_id() const;
  /// Distinct survey years, ascending.
  std::vector<int> survey_years() const;

 private:
  std::string origin_;
  std::vector<Region> regions_;
  std::vector<Observation> obs_;
  int year_min_ = 0, year_max_ = 0;
};

MigrantPanel parse_panel(const std::filesystem::path& path, Source source_kind);
void serialize_panel(const MigrantPanel& panel, const std::filesystem::path& path);
MigrantPanel align(const MigrantPanel& survey, const MigrantPanel& social);

/// Binomial sampling variance p(1-p)/N on the proportion scale.
double sampling_variance_social(double proportion, std::int64_t population_count);
/// Delta-method conversion of a proportion-scale SE: (se/p)^2.
double log_scale_variance(double proportion, double se_proportion);
/// Log-scale sampling variance of one observation. Survey rows use the se
/// column, falling back to the binomial approximation with population_count
/// as effective sample size; social rows always use population_count.
double log_sampling_variance(const Observation& obs);

}  // namespace migstock
