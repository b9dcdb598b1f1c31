#include <cstdlib>
#include <string_view>

#include "migstock/kernels.hpp"

namespace migstock::kernels {

namespace {

struct Backend {
  const char* name;
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*ar1_innovation_ssq)(const double*, std::size_t, double);
  double (*gaussian_loglik)(const double*, const double*, std::size_t);
  double (*gaussian_loglik_shifted)(const double*, const double*, double, std::size_t);
  double (*gaussian_loglik_const)(const double*, double, std::size_t);
};

constexpr Backend kScalar = {
    "scalar",        scalar::sum,
    scalar::dot,     scalar::sumsq,
    scalar::ar1_innovation_ssq, scalar::gaussian_loglik,
    scalar::gaussian_loglik_shifted, scalar::gaussian_loglik_const,
};

#if defined(MIGSTOCK_HAVE_AVX2)
constexpr Backend kAvx2 = {
    "avx2",        avx2::sum,
    avx2::dot,     avx2::sumsq,
    avx2::ar1_innovation_ssq, avx2::gaussian_loglik,
    avx2::gaussian_loglik_shifted, avx2::gaussian_loglik_const,
};
#endif

Backend pick_backend() {
#if defined(MIGSTOCK_HAVE_AVX2)
  const char* env = std::getenv("MIGSTOCK_KERNELS");
  bool forced_scalar = env != nullptr && std::string_view(env) == "scalar";
  if (!forced_scalar && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return kAvx2;
  }
#endif
  return kScalar;
}

const Backend& backend() {
  static const Backend b = pick_backend();
  return b;
}

}  // namespace

bool avx2_compiled() {
#if defined(MIGSTOCK_HAVE_AVX2)
  return true;
#else
  return false;
#endif
}

const char* active_backend() { return backend().name; }

double sum(const double* a, std::size_t n) { return backend().sum(a, n); }
double dot(const double* a, const double* b, std::size_t n) { return backend().dot(a, b, n); }
double sumsq(const double* a, std::size_t n) { return backend().sumsq(a, n); }
double ar1_innovation_ssq(const double* e, std::size_t n, double rho) {
  return backend().ar1_innovation_ssq(e, n, rho);
}
double gaussian_loglik(const double* resid, const double* var, std::size_t n) {
  return backend().gaussian_loglik(resid, var, n);
}
double gaussian_loglik_shifted(const double* resid, const double* var, double shift,
                               std::size_t n) {
  return backend().gaussian_loglik_shifted(resid, var, shift, n);
}
double gaussian_loglik_const(const double* resid, double var, std::size_t n) {
  return backend().gaussian_loglik_const(resid, var, n);
}

}  // namespace migstock::kernels
