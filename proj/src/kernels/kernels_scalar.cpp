#include <cmath>

#include "migstock/kernels.hpp"

namespace migstock::kernels::scalar {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sumsq(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double ar1_innovation_ssq(const double* e, std::size_t n, double rho) {
  double acc = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    double d = e[t] - rho * e[t - 1];
    acc += d * d;
  }
  return acc;
}

double gaussian_loglik(const double* resid, const double* var, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::log(var[i]) + resid[i] * resid[i] / var[i];
  }
  return -0.5 * (static_cast<double>(n) * kLog2Pi + acc);
}

double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = var[i] + shift;
    acc += std::log(v) + resid[i] * resid[i] / v;
  }
  return -0.5 * (static_cast<double>(n) * kLog2Pi + acc);
}

double gaussian_loglik_const(const double* resid, double var, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += resid[i] * resid[i];
  return -0.5 * (static_cast<double>(n) * (kLog2Pi + std::log(var)) + acc / var);
}

}  // namespace migstock::kernels::scalar
