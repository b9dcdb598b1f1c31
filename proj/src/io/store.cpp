#include "migstock/store.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "migstock/diagnostics.hpp"

namespace migstock {

namespace {
std::string age_name(int x, int n_ages) {
  if (n_ages == kNumAgeGroups) return AgeGrid::labels()[x];
  return "age" + std::to_string(x);
}
}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_samples_csv(const PosteriorSamples& samples, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const ModelDims& d = samples.dims;
  const int T = d.years, S = d.regions, X = d.ages;

  // Header: every flattened parameter, fixed order.
  std::string header;
  auto add = [&](const std::string& n) {
    if (!header.empty()) header += ',';
    header += n;
  };
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      add("beta1[" + std::to_string(samples.year(t)) + "][" + samples.region_codes[s] + "]");
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      add("beta2[" + std::to_string(samples.year(t)) + "][" + samples.region_codes[s] + "]");
    }
  }
  for (int t = 0; t < T; ++t) add("phi[" + std::to_string(samples.year(t)) + "]");
  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        add("eps[" + age_name(x, X) + "][" + std::to_string(samples.year(t)) + "][" +
            samples.region_codes[s] + "]");
      }
    }
  }
  for (int x = 0; x < X; ++x) {
    for (int s = 0; s < S; ++s) {
      add("rho[" + age_name(x, X) + "][" + samples.region_codes[s] + "]");
    }
  }
  add("sigma2_beta1");
  add("sigma2_beta");
  add("sigma2_phi");
  add("sigma2_eps");
  add("sigma2_ns");

  for (std::size_t c = 0; c < samples.chains.size(); ++c) {
    std::ofstream out(dir / ("chain_" + std::to_string(c) + ".csv"));
    if (!out) fail(Errc::io_error, "cannot write samples under " + dir.string());
    out << header << '\n';
    for (const auto& st : samples.chains[c]) {
      bool first = true;
      auto emit = [&](double v) {
        if (!first) out << ',';
        out << format_full(v);
        first = false;
      };
      for (double v : st.beta1) emit(v);
      for (double v : st.beta2) emit(v);
      for (double v : st.phi) emit(v);
      for (double v : st.eps) emit(v);
      for (double v : st.rho) emit(v);
      emit(st.sigma2_beta1);
      emit(st.sigma2_beta);
      emit(st.sigma2_phi);
      emit(st.sigma2_eps);
      emit(st.sigma2_ns);
      out << '\n';
    }
  }

  nlohmann::json manifest;
  manifest["config"] = {{"chains", samples.config.n_chains},
                        {"iters", samples.config.n_iter},
                        {"warmup", samples.config.n_warmup},
                        {"thin", samples.config.thin},
                        {"prior_scale_coeff", samples.config.prior_scale_coeff},
                        {"prior_scale_sd", samples.config.prior_scale_sd},
                        {"rhat_threshold", samples.config.rhat_threshold}};
  manifest["seed"] = samples.seed;
  manifest["draws_per_chain"] = samples.draws_per_chain();
  manifest["converged"] = samples.converged;
  nlohmann::json rhat;
  for (const auto& [name, v] : samples.rhat) rhat[name] = v;
  manifest["rhat"] = rhat;
  std::ofstream mf(dir / "manifest.json");
  if (!mf) fail(Errc::io_error, "cannot write samples manifest under " + dir.string());
  mf << manifest.dump(2) << '\n';
}

void write_summary_csv(const std::vector<CellSummary>& rows, const std::filesystem::path& path,
                       bool with_kind) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  out << "age_group,year,region,median,lower95,upper95";
  if (with_kind) out << ",kind";
  out << '\n';
  for (const auto& r : rows) {
    out << AgeGrid::labels()[r.age] << ',' << r.year << ',' << r.region << ','
        << format_full(r.median) << ',' << format_full(r.lower95) << ','
        << format_full(r.upper95);
    if (with_kind) out << ',' << (r.forecast ? "forecast" : "estimate");
    out << '\n';
  }
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return std::string();
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      fail(Errc::bad_config, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      fail(Errc::bad_config, path.string() + ":" + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

}  // namespace migstock
