#include "simplexdiff/cir.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplexdiff/samplers.hpp"
#include "simplexdiff/special.hpp"

namespace simplexdiff {

CirParams::CirParams(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("CirParams: a and b must be positive");
  }
}

TransitionQuery::TransitionQuery(double theta0_, double t_)
    : theta0(theta0_), t(t_) {
  if (!(t > 0.0) || theta0 < 0.0 || !std::isfinite(t) ||
      !std::isfinite(theta0)) {
    throw std::invalid_argument("TransitionQuery: need t > 0, theta0 >= 0");
  }
}

double conditional_mean(const CirParams& p, const TransitionQuery& q) {
  const double e = std::exp(-p.b * q.t);
  return q.theta0 * e + p.a * (1.0 - e);
}

double conditional_variance(const CirParams& p, const TransitionQuery& q) {
  const double e = std::exp(-p.b * q.t);
  const double one_me = 1.0 - e;
  return 2.0 * q.theta0 * e * one_me + p.a * one_me * one_me;
}

double log_transition_density(const CirParams& p, const TransitionQuery& q,
                              double theta_t) {
  if (!(theta_t > 0.0) || !std::isfinite(theta_t)) {
    throw std::domain_error("log_transition_density: theta_t must be > 0");
  }
  const double e = std::exp(-p.b * q.t);
  const double s = 1.0 - e;  // Gamma-limit scale
  if (q.theta0 == 0.0) {
    return (p.a - 1.0) * std::log(theta_t) - theta_t / s -
           p.a * std::log(s) - std::lgamma(p.a);
  }
  const double c = 1.0 / s;
  const double nu = p.a - 1.0;
  const double z = 2.0 * c * std::sqrt(q.theta0 * theta_t * e);
  return std::log(c) - c * (q.theta0 * e + theta_t) +
         0.5 * nu * (std::log(theta_t) - std::log(q.theta0) + p.b * q.t) +
         log_bessel_i_scaled(nu, z) + z;
}

double grad_log_transition_density(const CirParams& p,
                                   const TransitionQuery& q, double theta_t) {
  if (!(theta_t > 0.0) || !std::isfinite(theta_t)) {
    throw std::domain_error(
        "grad_log_transition_density: theta_t must be > 0");
  }
  const double e = std::exp(-p.b * q.t);
  const double c = 1.0 / (1.0 - e);
  if (q.theta0 == 0.0) {
    return (p.a - 1.0) / theta_t - c;
  }
  const double nu = p.a - 1.0;
  const double z = 2.0 * c * std::sqrt(q.theta0 * theta_t * e);
  // R_nu(z) = I_nu'(z)/I_nu(z) = nu/z + I_{nu+1}(z)/I_nu(z)
  const double ratio = nu / z + bessel_i_ratio(nu, z);
  return -c + 0.5 * nu / theta_t +
         c * std::sqrt(q.theta0 * e / theta_t) * ratio;
}

double sample_transition_exact(const CirParams& p, const TransitionQuery& q,
                               RngStream& rng) {
  const double e = std::exp(-p.b * q.t);
  const double s = 1.0 - e;
  const double noncentrality = 2.0 * q.theta0 * e / s;
  const double k = sample_noncentral_chi2(2.0 * p.a, noncentrality, rng);
  return 0.5 * s * k;
}

Trajectory1d simulate_path(const CirParams& p, double theta0,
                           std::span<const double> grid, const Scheme& scheme,
                           RngStream& rng) {
  if (grid.size() < 1 || grid[0] != 0.0) {
    throw std::invalid_argument("simulate_path: grid must start at 0");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw std::invalid_argument("simulate_path: grid must be increasing");
    }
  }
  if (scheme.kind == SchemeKind::SquaredOU) {
    return sample_squared_ou(p, theta0, grid, rng);
  }
  Trajectory1d traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.values.resize(grid.size());
  traj.values[0] = theta0;
  double x = theta0;
  if (scheme.kind == SchemeKind::Exact) {
    for (std::size_t k = 1; k < grid.size(); ++k) {
      x = sample_transition_exact(p, TransitionQuery(x, grid[k] - grid[k - 1]),
                                  rng);
      traj.values[k] = x;
    }
    return traj;
  }
  // EulerFullTruncation
  if (!(scheme.step > 0.0)) {
    throw std::invalid_argument("simulate_path: Euler scheme needs step > 0");
  }
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    const double xp = std::max(x, 0.0);
    const double diff = std::sqrt(2.0 * p.b * std::max(xp, scheme.epsilon));
    x = x + p.b * (p.a - xp) * dt + diff * std::sqrt(dt) * rng.normal();
    traj.values[k] = std::max(x, 0.0);
  }
  return traj;
}

Trajectory1d sample_squared_ou(const CirParams& p, double theta0,
                               std::span<const double> grid, RngStream& rng) {
  const double d_real = 2.0 * p.a;
  const int d = static_cast<int>(std::lround(d_real));
  if (d < 1 || std::abs(d_real - d) > 1e-12) {
    throw std::invalid_argument(
        "sample_squared_ou: 2a must be a positive integer");
  }
  if (grid.size() < 1 || grid[0] != 0.0) {
    throw std::invalid_argument("sample_squared_ou: grid must start at 0");
  }
  std::vector<double> u(d, 0.0);
  u[0] = std::sqrt(theta0);
  Trajectory1d traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.values.resize(grid.size());
  traj.values[0] = theta0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    if (!(dt > 0.0)) {
      throw std::invalid_argument("sample_squared_ou: grid must be increasing");
    }
    // dU = -(b/2) U dt + sqrt(b/2) dW, exact transition:
    // U(t+dt) = U(t) e^{-b dt / 2} + sqrt((1 - e^{-b dt}) / 2) * xi
    const double decay = std::exp(-0.5 * p.b * dt);
    const double sd = std::sqrt(0.5 * (1.0 - decay * decay));
    double sum = 0.0;
    for (int i = 0; i < d; ++i) {
      u[i] = u[i] * decay + sd * rng.normal();
      sum += u[i] * u[i];
    }
    traj.values[k] = sum;
  }
  return traj;
}

}  // namespace simplexdiff
