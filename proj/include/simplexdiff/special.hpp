#ifndef SIMPLEXDIFF_SPECIAL_HPP
#define SIMPLEXDIFF_SPECIAL_HPP

#include <span>
#include <vector>

namespace simplexdiff {

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma_fn(double x);

// ln( I_nu(z) * exp(-z) ) for nu >= -1, z >= 0.
// The exp(-z) scaling keeps the value representable for large z.
// z = 0: returns 0 for nu = 0, -inf for nu > 0, +inf for nu in [-1, 0).
double log_bessel_i_scaled(double nu, double z);

// I_{nu+1}(z) / I_nu(z), computed from the scaled logs.
double bessel_i_ratio(double nu, double z);

// logsumexp over a vector; -inf entries are handled.
double log_sum_exp(std::span<const double> v);

}  // namespace simplexdiff

#endif
