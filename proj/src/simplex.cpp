#include "simplexdiff/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "simplexdiff/samplers.hpp"
#include "simplexdiff/special.hpp"

namespace simplexdiff {

SimplexParams::SimplexParams(std::vector<double> alpha_, double b_, double T_)
    : alpha(std::move(alpha_)), b(b_), T(T_) {
  if (alpha.size() < 2) {
    throw std::invalid_argument("SimplexParams: need n >= 2");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("SimplexParams: alpha entries must be > 0");
    }
  }
  if (!(b > 0.0) || !(T > 0.0)) {
    throw std::invalid_argument("SimplexParams: b and T must be > 0");
  }
}

double dirichlet_log_density(const SimplexParams& sp,
                             std::span<const double> x) {
  if (x.size() != sp.dim()) {
    throw std::invalid_argument("dirichlet_log_density: dimension mismatch");
  }
  double sum = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) {
      throw std::domain_error("dirichlet_log_density: x must be interior");
    }
    sum += xi;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::domain_error("dirichlet_log_density: x must sum to 1");
  }
  double alpha_sum = 0.0;
  double log_z = 0.0;
  double val = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    val += (sp.alpha[i] - 1.0) * std::log(x[i]);
    log_z += log_gamma_fn(sp.alpha[i]);
    alpha_sum += sp.alpha[i];
  }
  log_z -= log_gamma_fn(alpha_sum);
  return val - log_z;
}

std::vector<double> sample_dirichlet(const SimplexParams& sp, RngStream& rng) {
  const std::size_t n = sp.dim();
  std::vector<double> y(n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = sample_gamma(sp.alpha[i], 1.0, rng);
      sum += y[i];
    }
    if (sum > 0.0) {
      for (double& v : y) v /= sum;
      return y;
    }
  }
  throw std::runtime_error("sample_dirichlet: gamma draws underflowed to 0");
}

std::vector<double> project_to_simplex(std::span<const double> y) {
  double sum = 0.0;
  for (double v : y) {
    if (v < 0.0) {
      throw std::domain_error("project_to_simplex: negative component");
    }
    sum += v;
  }
  if (!(sum > 0.0)) {
    throw std::domain_error("project_to_simplex: zero-sum vector");
  }
  std::vector<double> x(y.begin(), y.end());
  for (double& v : x) v /= sum;
  return x;
}

std::vector<double> forward_noise(const SimplexParams& sp,
                                  std::span<const double> y0, double t,
                                  RngStream& rng) {
  if (y0.size() != sp.dim()) {
    throw std::invalid_argument("forward_noise: dimension mismatch");
  }
  RngStream base = rng.split();
  std::vector<double> y(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) {
    RngStream sub = base.substream(i);
    y[i] = sample_transition_exact(sp.coord(i), TransitionQuery(y0[i], t), sub);
  }
  return y;
}

Trajectory simulate_forward_trajectory(const SimplexParams& sp,
                                       std::span<const double> y0,
                                       std::span<const double> grid,
                                       const Scheme& scheme, RngStream& rng) {
  if (y0.size() != sp.dim()) {
    throw std::invalid_argument(
        "simulate_forward_trajectory: dimension mismatch");
  }
  const std::size_t n = sp.dim();
  RngStream base = rng.split();
  Trajectory traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.states.assign(grid.size(), std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    RngStream sub = base.substream(i);
    Trajectory1d path = simulate_path(sp.coord(i), y0[i], grid, scheme, sub);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      traj.states[k][i] = path.values[k];
    }
  }
  return traj;
}

}  // namespace simplexdiff
