#ifndef SIMPLEXDIFF_REVERSE_HPP
#define SIMPLEXDIFF_REVERSE_HPP

#include <span>
#include <vector>

#include "simplexdiff/rng.hpp"
#include "simplexdiff/score.hpp"
#include "simplexdiff/simplex.hpp"

namespace simplexdiff {

enum class ReverseIntegrator { EulerMaruyama, ExplicitEuler, LogDomainEuler };

struct ReverseConfig {
  SimplexParams sp;
  const ScoreFunction* score = nullptr;
  int steps = 600;                  // uniform grid on [0, T]
  double clamp_floor = 1e-8;        // state floor during integration
  ReverseIntegrator integrator = ReverseIntegrator::EulerMaruyama;
};

// Reverse-time drift at state z given the score value:
// -b (alpha_i - z_i) + 2 b z_i s_i + 2 b  per coordinate.
std::vector<double> reverse_drift(const SimplexParams& sp,
                                  std::span<const double> score_value,
                                  std::span<const double> z);

// Euler-Maruyama integration of the reverse SDE from a p_ref draw
// (product of Gamma(alpha_i, 1)); returns the terminal state, an
// approximate sample of the data law. States are floored at clamp_floor
// before score evaluation and the square-root diffusion term.
std::vector<double> reverse_sde_sample(const ReverseConfig& cfg,
                                       RngStream& rng);

// Probability-flow ODE integrated backward from T to 0, starting at the
// supplied p_ref draw. ExplicitEuler steps y directly; LogDomainEuler
// steps u = ln y (equivalent in exact arithmetic).
std::vector<double> ode_sample_from(const ReverseConfig& cfg,
                                    std::span<const double> init);

// Convenience: draws the initial state from p_ref and integrates.
std::vector<double> ode_sample(const ReverseConfig& cfg, RngStream& rng);

// Right-hand side of the probability-flow ODE at forward time t:
// b (alpha - 1 - y - diag(y) * score).
std::vector<double> probability_flow_rhs(const SimplexParams& sp,
                                         const ScoreFunction& score, double t,
                                         std::span<const double> y);

struct PosteriorQuery {
  SimplexParams sp;
  std::vector<double> prior;  // over one-hot vertices, sums to 1
  double t;
  std::vector<double> x_t;    // strictly positive
};

// Bayes posterior over the n one-hot vertices given a noisy state x_t.
std::vector<double> categorical_posterior(const PosteriorQuery& q);

}  // namespace simplexdiff

#endif
