#include "simplexdiff/reverse.hpp"

#include <cmath>
#include <stdexcept>

#include "simplexdiff/samplers.hpp"
#include "simplexdiff/special.hpp"

namespace simplexdiff {

namespace {

std::vector<double> sample_p_ref(const SimplexParams& sp, RngStream& rng) {
  std::vector<double> z(sp.dim());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = sample_gamma(sp.alpha[i], 1.0, rng);
  }
  return z;
}

void check_cfg(const ReverseConfig& cfg) {
  if (cfg.score == nullptr) {
    throw std::invalid_argument("ReverseConfig: score is required");
  }
  if (cfg.steps < 0 || !(cfg.clamp_floor > 0.0)) {
    throw std::invalid_argument("ReverseConfig: bad steps or clamp_floor");
  }
}

void check_finite(std::span<const double> z, int step) {
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("reverse integration: non-finite state at step " +
                               std::to_string(step));
    }
  }
}

}  // namespace

std::vector<double> reverse_drift(const SimplexParams& sp,
                                  std::span<const double> score_value,
                                  std::span<const double> z) {
  if (score_value.size() != sp.dim() || z.size() != sp.dim()) {
    throw std::invalid_argument("reverse_drift: dimension mismatch");
  }
  std::vector<double> d(sp.dim());
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    d[i] = -sp.b * (sp.alpha[i] - z[i]) + 2.0 * sp.b * z[i] * score_value[i] +
           2.0 * sp.b;
  }
  return d;
}

std::vector<double> reverse_sde_sample(const ReverseConfig& cfg,
                                       RngStream& rng) {
  check_cfg(cfg);
  const SimplexParams& sp = cfg.sp;
  std::vector<double> z = sample_p_ref(sp, rng);
  if (cfg.steps == 0) return z;
  const double dt = sp.T / cfg.steps;
  const double sqrt_dt = std::sqrt(dt);
  for (int k = 0; k < cfg.steps; ++k) {
    for (double& v : z) v = std::max(v, cfg.clamp_floor);
    // reverse-clock time k*dt corresponds to forward time T - k*dt
    const double t_fwd = sp.T - k * dt;
    const std::vector<double> s = cfg.score->evaluate(t_fwd, z);
    const std::vector<double> drift = reverse_drift(sp, s, z);
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double diff = std::sqrt(2.0 * sp.b * z[i]);
      z[i] += drift[i] * dt + diff * sqrt_dt * rng.normal();
    }
    check_finite(z, k);
  }
  for (double& v : z) v = std::max(v, cfg.clamp_floor);
  return z;
}

std::vector<double> probability_flow_rhs(const SimplexParams& sp,
                                         const ScoreFunction& score, double t,
                                         std::span<const double> y) {
  const std::vector<double> s = score.evaluate(t, y);
  std::vector<double> f(sp.dim());
  for (std::size_t i = 0; i < sp.dim(); ++i) {
    f[i] = sp.b * (sp.alpha[i] - 1.0 - y[i] - y[i] * s[i]);
  }
  return f;
}

std::vector<double> ode_sample_from(const ReverseConfig& cfg,
                                    std::span<const double> init) {
  check_cfg(cfg);
  if (cfg.integrator == ReverseIntegrator::EulerMaruyama) {
    throw std::invalid_argument("ode_sample_from: needs an ODE integrator");
  }
  const SimplexParams& sp = cfg.sp;
  std::vector<double> y(init.begin(), init.end());
  if (cfg.steps == 0) return y;
  const double dt = sp.T / cfg.steps;
  const bool log_domain = cfg.integrator == ReverseIntegrator::LogDomainEuler;
  const double log_floor = std::log(cfg.clamp_floor);
  for (int k = 0; k < cfg.steps; ++k) {
    for (double& v : y) v = std::max(v, cfg.clamp_floor);
    const double t_fwd = sp.T - k * dt;
    if (log_domain) {
      // du_i/dt = b ((alpha_i - 1)/y_i - 1 - s_i), stepped backward in t
      const std::vector<double> s = cfg.score->evaluate(t_fwd, y);
      for (std::size_t i = 0; i < y.size(); ++i) {
        double u = std::log(y[i]);
        u -= dt * sp.b * ((sp.alpha[i] - 1.0) / y[i] - 1.0 - s[i]);
        y[i] = std::exp(std::max(u, log_floor));
      }
    } else {
      const std::vector<double> f = probability_flow_rhs(sp, *cfg.score,
                                                         t_fwd, y);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= dt * f[i];
    }
    check_finite(y, k);
  }
  for (double& v : y) v = std::max(v, cfg.clamp_floor);
  return y;
}

std::vector<double> ode_sample(const ReverseConfig& cfg, RngStream& rng) {
  check_cfg(cfg);
  std::vector<double> init = sample_p_ref(cfg.sp, rng);
  return ode_sample_from(cfg, init);
}

std::vector<double> categorical_posterior(const PosteriorQuery& q) {
  const std::size_t n = q.sp.dim();
  if (q.prior.size() != n || q.x_t.size() != n) {
    throw std::invalid_argument("categorical_posterior: dimension mismatch");
  }
  double prior_sum = 0.0;
  for (double p : q.prior) prior_sum += p;
  if (std::abs(prior_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("categorical_posterior: prior must sum to 1");
  }
  for (double x : q.x_t) {
    if (!(x > 0.0)) {
      throw std::domain_error("categorical_posterior: x_t must be positive");
    }
  }
  std::vector<double> logp(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (q.prior[j] == 0.0) {
      logp[j] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double l = std::log(q.prior[j]);
    for (std::size_t i = 0; i < n; ++i) {
      const double y0i = (i == j) ? 1.0 : 0.0;
      l += log_transition_density(q.sp.coord(i), TransitionQuery(y0i, q.t),
                                  q.x_t[i]);
    }
    logp[j] = l;
  }
  const double lse = log_sum_exp(logp);
  std::vector<double> post(n);
  for (std::size_t j = 0; j < n; ++j) post[j] = std::exp(logp[j] - lse);
  return post;
}

}  // namespace simplexdiff
