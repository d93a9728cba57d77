#include "simplexdiff/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace simplexdiff {

namespace {

double gamma_shape_ge1(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(rate)) {
    throw std::domain_error("sample_gamma: shape and rate must be positive");
  }
  if (shape < 1.0) {
    const double g = gamma_shape_ge1(shape + 1.0, rng);
    const double u = rng.uniform();
    return g * std::exp(std::log(u) / shape) / rate;
  }
  return gamma_shape_ge1(shape, rng) / rate;
}

std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::domain_error("sample_poisson: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // inversion by sequential search
    const double p0 = std::exp(-mean);
    double p = p0;
    double f = p0;
    double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > f && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      f += p;
    }
    return k;
  }
  // PTRS transformed rejection (Hormann 1993).
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mu - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

double sample_noncentral_chi2(double dof, double noncentrality,
                              RngStream& rng) {
  if (!(dof > 0.0) || noncentrality < 0.0 || !std::isfinite(dof) ||
      !std::isfinite(noncentrality)) {
    throw std::domain_error("sample_noncentral_chi2: invalid parameters");
  }
  const std::uint64_t n = sample_poisson(0.5 * noncentrality, rng);
  return 2.0 * sample_gamma(0.5 * dof + static_cast<double>(n), 1.0, rng);
}

}  // namespace simplexdiff
