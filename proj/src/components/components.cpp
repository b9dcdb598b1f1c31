// Principal age-pattern extraction from the historical survey panel.

#include "migstock/components.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

namespace migstock {

bool LogScheduleMatrix::complete() const {
  for (auto m : missing) {
    if (m) return false;
  }
  return true;
}

LogScheduleMatrix build_log_matrix(const MigrantPanel& panel, int year_from, int year_to) {
  if (year_from > year_to) fail(Errc::empty_selection, "empty year range");
  const int G = kNumAgeGroups;

  // Survey observations only; bucket by (region, year).
  std::map<std::pair<int, int>, std::vector<const Observation*>> cells;
  for (const auto& o : panel.observations()) {
    if (o.source != Source::survey) continue;
    if (o.year < year_from || o.year > year_to) continue;
    cells[{o.region, o.year}].push_back(&o);
  }
  if (cells.empty()) fail(Errc::empty_selection, "no survey observations in the year range");

  LogScheduleMatrix m;
  for (const auto& r : panel.regions()) m.region_codes.push_back(r.code);
  for (const auto& l : AgeGrid::labels()) m.age_labels.push_back(l);

  const int n = static_cast<int>(cells.size());
  m.values = Eigen::MatrixXd::Zero(n, G);
  m.missing.assign(static_cast<std::size_t>(n) * G, 1);
  int row = 0;
  for (const auto& [key, obs] : cells) {
    m.rows.push_back(key);
    for (const Observation* o : obs) {
      m.values(row, o->age) = std::log(o->proportion);
      m.missing[row * G + o->age] = 0;
    }
    ++row;
  }
  return m;
}

LogScheduleMatrix impute_missing(const LogScheduleMatrix& matrix) {
  const int n = static_cast<int>(matrix.values.rows());
  const int g = static_cast<int>(matrix.values.cols());

  // Column means over observed entries.
  std::vector<double> col_sum(g, 0.0);
  std::vector<int> col_cnt(g, 0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < g; ++c) {
      if (!matrix.is_missing(r, c)) {
        col_sum[c] += matrix.values(r, c);
        ++col_cnt[c];
      }
    }
  }
  for (int c = 0; c < g; ++c) {
    if (col_cnt[c] == 0) {
      fail(Errc::empty_column, "age column '" + matrix.age_labels[c] + "' has no observed entries");
    }
  }

  // Per (region, age) series means over observed entries.
  std::map<std::pair<int, int>, std::pair<double, int>> series;  // (region, age) -> (sum, count)
  for (int r = 0; r < n; ++r) {
    int region = matrix.rows[r].first;
    for (int c = 0; c < g; ++c) {
      if (!matrix.is_missing(r, c)) {
        auto& e = series[{region, c}];
        e.first += matrix.values(r, c);
        e.second += 1;
      }
    }
  }

  LogScheduleMatrix out = matrix;
  for (int r = 0; r < n; ++r) {
    int region = matrix.rows[r].first;
    for (int c = 0; c < g; ++c) {
      if (!matrix.is_missing(r, c)) continue;
      auto it = series.find({region, c});
      if (it != series.end() && it->second.second > 0) {
        out.values(r, c) = it->second.first / it->second.second;
      } else {
        out.values(r, c) = col_sum[c] / col_cnt[c];
      }
    }
  }
  return out;
}

PrincipalComponents compute_components(const LogScheduleMatrix& matrix) {
  if (!matrix.complete()) {
    fail(Errc::domain_error, "schedule matrix has unimputed missing cells");
  }
  const int n = static_cast<int>(matrix.values.rows());
  const int g = static_cast<int>(matrix.values.cols());
  if (n < 2 || g < 2) fail(Errc::insufficient_data, "need at least a 2x2 matrix");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix.values, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double s1 = sv(0);
  double s2 = sv.size() > 1 ? sv(1) : 0.0;
  if (!(s2 > 1e-12 * s1)) {
    fail(Errc::degenerate_matrix, "second singular value vanishes (rank < 2)");
  }

  PrincipalComponents pc;
  pc.z1 = svd.matrixV().col(0);
  pc.z2 = svd.matrixV().col(1);
  pc.singular1 = s1;
  pc.singular2 = s2;
  pc.age_labels = matrix.age_labels;
  if (pc.z1.sum() > 0.0) pc.z1 = -pc.z1;
  if (pc.z2(pc.z2.size() - 1) < 0.0) pc.z2 = -pc.z2;
  return pc;
}

nlohmann::json PrincipalComponents::to_json() const {
  nlohmann::json j;
  nlohmann::json z1j, z2j;
  for (int i = 0; i < z1.size(); ++i) {
    z1j[age_labels[i]] = z1(i);
    z2j[age_labels[i]] = z2(i);
  }
  j["z1"] = z1j;
  j["z2"] = z2j;
  j["singular_values"] = {singular1, singular2};
  j["age_groups"] = age_labels;
  return j;
}

PrincipalComponents PrincipalComponents::from_json(const nlohmann::json& j) {
  PrincipalComponents pc;
  pc.age_labels = j.at("age_groups").get<std::vector<std::string>>();
  const int g = static_cast<int>(pc.age_labels.size());
  pc.z1.resize(g);
  pc.z2.resize(g);
  for (int i = 0; i < g; ++i) {
    pc.z1(i) = j.at("z1").at(pc.age_labels[i]).get<double>();
    pc.z2(i) = j.at("z2").at(pc.age_labels[i]).get<double>();
  }
  pc.singular1 = j.at("singular_values").at(0).get<double>();
  pc.singular2 = j.at("singular_values").at(1).get<double>();
  return pc;
}

}  // namespace migstock
