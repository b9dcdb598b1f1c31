#pragma once

#include <functional>
#include <vector>

#include "migstock/rng.hpp"

namespace migstock {

/// Symmetric positive-definite tridiagonal precision matrix.
struct Tridiag {
  std::vector<double> diag;  // size n
  std::vector<double> off;   // size n-1, entries (i, i+1)
};

/// Exact draw from N(prec^-1 b, prec^-1) via the bidiagonal Cholesky factor.
std::vector<double> sample_gaussian_chain(const Tridiag& prec, const std::vector<double>& b,
                                          Rng& rng);

/// Mean of N(prec^-1 b, prec^-1); exposed for closed-form checks.
std::vector<double> chain_posterior_mean(const Tridiag& prec, const std::vector<double>& b);

/// Univariate slice sampler (stepping out + shrinkage) on [lo, hi].
double slice_sample(double x0, double lo, double hi, double width,
                    const std::function<double(double)>& logf, Rng& rng, int max_steps = 64);

/// One Metropolis-within-Gibbs update of an AR(1) coefficient on [0,1]:
/// truncated-Gaussian proposal from the transition terms, accepted with the
/// stationary-initialization density ratio (init variance capped at
/// init_cap * sigma2_eps near the rho = 1 boundary).
double update_ar1_coefficient(const double* eps, int n, double sigma2_eps, double current,
                              double init_cap, Rng& rng);

}  // namespace migstock
