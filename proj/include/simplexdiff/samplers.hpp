#ifndef SIMPLEXDIFF_SAMPLERS_HPP
#define SIMPLEXDIFF_SAMPLERS_HPP

#include <cstdint>

#include "simplexdiff/rng.hpp"

namespace simplexdiff {

// One draw from Gamma(shape, rate), shape > 0, rate > 0.
// Marsaglia-Tsang squeeze; shapes below 1 use the boosting identity
// G(a) = G(a+1) * U^{1/a} with the power taken in log space.
double sample_gamma(double shape, double rate, RngStream& rng);

// Poisson(mean), mean >= 0. Sequential inversion below mean = 10,
// transformed rejection (PTRS) above.
std::uint64_t sample_poisson(double mean, RngStream& rng);

// Non-central chi-squared via the Poisson mixture:
// N ~ Poisson(noncentrality / 2), result ~ 2 * Gamma(dof/2 + N, 1).
// Valid for any dof > 0, including dof < 2.
double sample_noncentral_chi2(double dof, double noncentrality,
                              RngStream& rng);

}  // namespace simplexdiff

#endif
