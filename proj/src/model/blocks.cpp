// Sampler primitives: exact Gaussian chain draws and slice sampling.

#include "migstock/blocks.hpp"

#include <cmath>

#include "migstock/error.hpp"

namespace migstock {

namespace {

// Cholesky of a SPD tridiagonal matrix: L lower-bidiagonal with diagonal ld
// and subdiagonal lo.
void tridiag_cholesky(const Tridiag& prec, std::vector<double>& ld, std::vector<double>& lo) {
  const std::size_t n = prec.diag.size();
  ld.resize(n);
  lo.resize(n > 0 ? n - 1 : 0);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = prec.diag[i] - (i > 0 ? prev * prev : 0.0);
    if (!(d > 0.0)) fail(Errc::non_finite_density, "precision matrix not positive definite");
    ld[i] = std::sqrt(d);
    if (i + 1 < n) {
      lo[i] = prec.off[i] / ld[i];
      prev = lo[i];
    }
  }
}

}  // namespace

std::vector<double> chain_posterior_mean(const Tridiag& prec, const std::vector<double>& b) {
  std::vector<double> ld, lo;
  tridiag_cholesky(prec, ld, lo);
  const std::size_t n = b.size();
  // Solve L u = b, then L^T m = u.
  std::vector<double> u(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (b[i] - (i > 0 ? lo[i - 1] * u[i - 1] : 0.0)) / ld[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    m[i] = (u[i] - (i + 1 < n ? lo[i] * m[i + 1] : 0.0)) / ld[i];
  }
  return m;
}

std::vector<double> sample_gaussian_chain(const Tridiag& prec, const std::vector<double>& b,
                                          Rng& rng) {
  std::vector<double> ld, lo;
  tridiag_cholesky(prec, ld, lo);
  const std::size_t n = b.size();
  std::vector<double> u(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (b[i] - (i > 0 ? lo[i - 1] * u[i - 1] : 0.0)) / ld[i];
  }
  // Back substitution of L^T x = u + z gives mean plus correlated noise.
  for (std::size_t i = n; i-- > 0;) {
    double rhs = u[i] + rng.normal();
    x[i] = (rhs - (i + 1 < n ? lo[i] * x[i + 1] : 0.0)) / ld[i];
  }
  return x;
}

double update_ar1_coefficient(const double* eps, int n, double sigma2_eps, double current,
                              double init_cap, Rng& rng) {
  auto init_logpdf = [&](double rho) {
    double denom = 1.0 - rho * rho;
    double scale = (denom > 0.0) ? std::min(1.0 / denom, init_cap) : init_cap;
    double w0 = sigma2_eps * scale;
    return -0.5 * (std::log(w0) + eps[0] * eps[0] / w0);
  };

  double a = 0.0, b = 0.0;
  for (int t = 1; t < n; ++t) {
    a += eps[t - 1] * eps[t - 1];
    b += eps[t] * eps[t - 1];
  }
  double proposal = (a > 0.0)
                        ? rng.truncated_normal(b / a, std::sqrt(sigma2_eps / a), 0.0, 1.0)
                        : rng.uniform();
  double log_acc = init_logpdf(proposal) - init_logpdf(current);
  if (std::log(rng.uniform()) < log_acc) return proposal;
  return current;
}

double slice_sample(double x0, double lo, double hi, double width,
                    const std::function<double(double)>& logf, Rng& rng, int max_steps) {
  double fx0 = logf(x0);
  double level = fx0 + std::log(rng.uniform());

  // Step out.
  double u = rng.uniform();
  double left = x0 - width * u;
  double right = left + width;
  int steps_left = static_cast<int>(std::floor(rng.uniform() * max_steps));
  int steps_right = max_steps - 1 - steps_left;
  while (steps_left-- > 0 && left > lo && logf(std::max(left, lo)) > level) left -= width;
  while (steps_right-- > 0 && right < hi && logf(std::min(right, hi)) > level) right += width;
  left = std::max(left, lo);
  right = std::min(right, hi);

  // Shrink.
  for (int i = 0; i < 1000; ++i) {
    double x = left + rng.uniform() * (right - left);
    if (logf(x) > level) return x;
    if (x < x0) {
      left = x;
    } else {
      right = x;
    }
  }
  return x0;  // pathological target; keep the current point
}

}  // namespace migstock
