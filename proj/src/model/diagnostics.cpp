#include "migstock/diagnostics.hpp"

#include <cmath>
#include <set>

#include "migstock/kernels.hpp"

namespace migstock {

namespace {
std::string age_name(int x, int n_ages) {
  if (n_ages == kNumAgeGroups) return AgeGrid::labels()[x];
  return "age" + std::to_string(x);
}
}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) fail(Errc::too_few_chains, "split R-hat needs at least 2 chains");
  std::size_t n = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != n) fail(Errc::bad_config, "unequal chain lengths");
  }
  if (n < 10) fail(Errc::too_few_chains, "split R-hat needs at least 10 draws per chain");

  const std::size_t nh = n / 2;
  std::vector<std::pair<const double*, std::size_t>> seqs;
  for (const auto& c : chains) {
    seqs.push_back({c.data(), nh});
    seqs.push_back({c.data() + (n - nh), nh});
  }

  const double m = static_cast<double>(seqs.size());
  std::vector<double> means(seqs.size()), vars(seqs.size());
  double grand = 0.0;
  for (std::size_t j = 0; j < seqs.size(); ++j) {
    double mu = kernels::sum(seqs[j].first, seqs[j].second) / nh;
    double ssq = 0.0;
    for (std::size_t i = 0; i < nh; ++i) {
      double d = seqs[j].first[i] - mu;
      ssq += d * d;
    }
    means[j] = mu;
    vars[j] = ssq / (nh - 1);
    grand += mu;
  }
  grand /= m;

  double w = kernels::sum(vars.data(), vars.size()) / m;
  double b = 0.0;
  for (double mu : means) b += (mu - grand) * (mu - grand);
  b *= static_cast<double>(nh) / (m - 1);

  // All-constant chains: undefined ratio, reported as 1.
  double scale = 0.0;
  for (double mu : means) scale = std::max(scale, std::abs(mu));
  if (w + b / nh < 1e-30 * (1.0 + scale * scale)) return 1.0;
  if (w <= 0.0) return 1e12;

  double nh_d = static_cast<double>(nh);
  double var_hat = (nh_d - 1.0) / nh_d * w + b / nh_d;
  return std::sqrt(var_hat / w);
}

std::vector<MonitoredParameter> monitored_parameters(const PosteriorSamples& samples) {
  const ModelDims& d = samples.dims;
  const int T = d.years, S = d.regions, X = d.ages;
  std::vector<MonitoredParameter> out;

  auto region = [&](int s) { return samples.region_codes[s]; };
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      int idx = t * S + s;
      out.push_back({"beta1[" + std::to_string(samples.year(t)) + "][" + region(s) + "]",
                     [idx](const ParameterState& st) { return st.beta1[idx]; }});
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      int idx = t * S + s;
      out.push_back({"beta2[" + std::to_string(samples.year(t)) + "][" + region(s) + "]",
                     [idx](const ParameterState& st) { return st.beta2[idx]; }});
    }
  }
  for (int t = 0; t < T; ++t) {
    out.push_back({"phi[" + std::to_string(samples.year(t)) + "]",
                   [t](const ParameterState& st) { return st.phi[t]; }});
  }
  out.push_back({"sigma2_beta1", [](const ParameterState& st) { return st.sigma2_beta1; }});
  out.push_back({"sigma2_beta", [](const ParameterState& st) { return st.sigma2_beta; }});
  out.push_back({"sigma2_phi", [](const ParameterState& st) { return st.sigma2_phi; }});
  out.push_back({"sigma2_eps", [](const ParameterState& st) { return st.sigma2_eps; }});
  out.push_back({"sigma2_ns", [](const ParameterState& st) { return st.sigma2_ns; }});

  // Fixed 10% subsample of the eps array.
  const std::size_t n_eps = static_cast<std::size_t>(X) * T * S;
  for (std::size_t flat = 0; flat < n_eps; flat += 10) {
    std::size_t series = flat / T;
    int t = static_cast<int>(flat % T);
    int x = static_cast<int>(series / S);
    int s = static_cast<int>(series % S);
    out.push_back({"eps[" + age_name(x, X) + "][" + std::to_string(samples.year(t)) + "][" +
                       region(s) + "]",
                   [flat](const ParameterState& st) { return st.eps[flat]; }});
  }
  return out;
}

std::map<std::string, double> gelman_rubin(const PosteriorSamples& samples,
                                           const std::vector<std::string>& selector) {
  if (samples.chains.size() < 2) fail(Errc::too_few_chains, "need >= 2 chains");
  std::set<std::string> wanted(selector.begin(), selector.end());

  std::map<std::string, double> out;
  std::vector<std::vector<double>> series(samples.chains.size());
  for (const auto& p : monitored_parameters(samples)) {
    if (!wanted.empty() && !wanted.count(p.name)) continue;
    for (std::size_t c = 0; c < samples.chains.size(); ++c) {
      series[c].clear();
      for (const auto& draw : samples.chains[c]) series[c].push_back(p.get(draw));
    }
    out[p.name] = split_rhat(series);
  }
  return out;
}

}  // namespace migstock
