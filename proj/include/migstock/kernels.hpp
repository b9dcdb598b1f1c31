#pragma once

#include <cstddef>

// Data-parallel reduction kernels behind the likelihood and sampler inner
// loops. The scalar implementations are the reference; an AVX2+FMA variant
// is selected once at startup when the CPU supports it. Set
// MIGSTOCK_KERNELS=scalar in the environment to force the reference path.

namespace migstock::kernels {

namespace scalar {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
/// Sum over t = 1..n-1 of (e[t] - rho * e[t-1])^2.
double ar1_innovation_ssq(const double* e, std::size_t n, double rho);
/// Sum of Normal log densities: -0.5 * (log(2*pi*var[i]) + resid[i]^2 / var[i]).
double gaussian_loglik(const double* resid, const double* var, std::size_t n);
/// Same with per-element variance var[i] + shift (shift >= 0).
double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n);
/// Same with one common variance.
double gaussian_loglik_const(const double* resid, double var, std::size_t n);
}  // namespace scalar

#if defined(MIGSTOCK_HAVE_AVX2)
namespace avx2 {
double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
double ar1_innovation_ssq(const double* e, std::size_t n, double rho);
double gaussian_loglik(const double* resid, const double* var, std::size_t n);
double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n);
double gaussian_loglik_const(const double* resid, double var, std::size_t n);
}  // namespace avx2
#endif

bool avx2_compiled();
/// Name of the backend the dispatcher picked ("avx2" or "scalar").
const char* active_backend();

double sum(const double* a, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sumsq(const double* a, std::size_t n);
double ar1_innovation_ssq(const double* e, std::size_t n, double rho);
double gaussian_loglik(const double* resid, const double* var, std::size_t n);
double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n);
double gaussian_loglik_const(const double* resid, double var, std::size_t n);

}  // namespace migstock::kernels
