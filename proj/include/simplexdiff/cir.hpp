#ifndef SIMPLEXDIFF_CIR_HPP
#define SIMPLEXDIFF_CIR_HPP

#include <span>
#include <vector>

#include "simplexdiff/rng.hpp"

namespace simplexdiff {

// One CIR coordinate d theta = b (a - theta) dt + sqrt(2 b theta) dW,
// i.e. the sigma^2 = 2b convention, stationary law Gamma(a, 1).
struct CirParams {
  double a;  // shape, > 0
  double b;  // mean-reversion speed, > 0

  CirParams(double a_, double b_);
};

struct TransitionQuery {
  double theta0;  // state at time 0, >= 0
  double t;       // elapsed time, > 0

  TransitionQuery(double theta0_, double t_);
};

enum class SchemeKind { Exact, EulerFullTruncation, SquaredOU };

struct Scheme {
  SchemeKind kind = SchemeKind::Exact;
  double step = 0.0;     // time step, discretized kinds only
  double epsilon = 0.0;  // diffusion floor, EulerFullTruncation only
};

struct Trajectory1d {
  std::vector<double> times;
  std::vector<double> values;
};

// E[theta_t | theta_0] = theta_0 e^{-bt} + a (1 - e^{-bt})
double conditional_mean(const CirParams& p, const TransitionQuery& q);

// var[theta_t | theta_0] = 2 theta_0 (e^{-bt} - e^{-2bt}) + a (1 - e^{-bt})^2
double conditional_variance(const CirParams& p, const TransitionQuery& q);

// ln f(theta_t | theta_0); theta_0 = 0 uses the Gamma(a, 1 - e^{-bt}) limit.
double log_transition_density(const CirParams& p, const TransitionQuery& q,
                              double theta_t);

// d/d theta_t of log_transition_density.
double grad_log_transition_density(const CirParams& p,
                                   const TransitionQuery& q, double theta_t);

// Exact draw: ((1 - e^{-bt}) / 2) * chi2(2a, 2 theta_0 e^{-bt}/(1 - e^{-bt})).
double sample_transition_exact(const CirParams& p, const TransitionQuery& q,
                               RngStream& rng);

// Path on `grid` (grid[0] = 0, value theta0 there). Exact chains exact
// transitions over increments; EulerFullTruncation uses positive parts in
// drift and diffusion plus the epsilon floor; SquaredOU delegates to
// sample_squared_ou.
Trajectory1d simulate_path(const CirParams& p, double theta0,
                           std::span<const double> grid, const Scheme& scheme,
                           RngStream& rng);

// Sum of d = 2a squared OU processes (exact Gaussian transitions), equal in
// law to the CIR path. Requires 2a to be a positive integer. Initial mass is
// placed in the first OU coordinate.
Trajectory1d sample_squared_ou(const CirParams& p, double theta0,
                               std::span<const double> grid, RngStream& rng);

}  // namespace simplexdiff

#endif
