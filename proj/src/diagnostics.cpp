#include "simplexdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplexdiff/quadrature.hpp"
#include "simplexdiff/special.hpp"

namespace simplexdiff {

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_statistic: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

namespace {

double ks_default_threshold(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

double ks_from_sorted_cdf(std::span<const double> cdf_vals) {
  const double n = static_cast<double>(cdf_vals.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_vals.size(); ++i) {
    d = std::max(d, std::max(cdf_vals[i] - i / n, (i + 1) / n - cdf_vals[i]));
  }
  return d;
}

}  // namespace

KsReport ks_test(std::span<const double> samples,
                 const std::function<double(double)>& cdf, double threshold) {
  KsReport r;
  r.n_samples = samples.size();
  r.threshold = threshold > 0.0 ? threshold : ks_default_threshold(r.n_samples);
  r.statistic = ks_statistic(samples, cdf);
  r.pass = r.statistic < r.threshold;
  return r;
}

KsReport ks_test_log_density(std::span<const double> samples,
                             const std::function<double(double)>& log_pdf,
                             double lower, double threshold) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_test_log_density: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::vector<double> cdf_vals = cdf_at_sorted(sorted, log_pdf, lower);
  KsReport r;
  r.n_samples = samples.size();
  r.threshold = threshold > 0.0 ? threshold : ks_default_threshold(r.n_samples);
  r.statistic = ks_from_sorted_cdf(cdf_vals);
  r.pass = r.statistic < r.threshold;
  return r;
}

KlEstimate estimate_elbo_gap(const SimplexParams& sp, const DataSet& data,
                             const ScoreFunction& score, int n_paths,
                             int n_time, RngStream& rng) {
  if (n_paths < 1 || n_time < 1) {
    throw std::invalid_argument("estimate_elbo_gap: need n_paths, n_time >= 1");
  }
  const std::size_t n = sp.dim();
  const AnalyticMixtureScore truth(sp, data);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  std::vector<double> y0;
  for (int p = 0; p < n_paths; ++p) {
    double u = rng.uniform();
    std::size_t k = 0;
    double acc = data.weights[0];
    while (u > acc && k + 1 < data.points.size()) acc += data.weights[++k];
    y0 = data.points[k];
    for (int j = 0; j < n_time; ++j) {
      const double t = (j + 0.5) * sp.T / n_time;
      std::vector<double> y = forward_noise(sp, y0, t, rng);
      for (double& v : y) v = std::max(v, 1e-300);
      const std::vector<double> g = truth.evaluate(t, y);
      const std::vector<double> s = score.evaluate(t, y);
      double term = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g[i] - s[i];
        term += y[i] * r * r;
      }
      term *= sp.b;
      sum += term;
      sum_sq += term * term;
      ++count;
    }
  }
  KlEstimate est;
  const double mean = sum / count;
  est.delta_i = sp.T * mean;
  const double var = std::max(0.0, sum_sq / count - mean * mean);
  est.std_error = sp.T * std::sqrt(var / count);

  if (data.points.size() == 1) {
    // product structure: KL factorizes over coordinates
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const CirParams cp = sp.coord(i);
      const TransitionQuery q(data.points[0][i], sp.T);
      const double m = conditional_mean(cp, q);
      const double sd = std::sqrt(conditional_variance(cp, q));
      const double hi =
          std::max(m + 12.0 * sd, cp.a + 12.0 * std::sqrt(cp.a) + 1.0);
      auto integrand = [&](double u) {
        const double theta = std::exp(u);
        const double lf = log_transition_density(cp, q, theta);
        if (!std::isfinite(lf)) return 0.0;
        const double lg =
            (cp.a - 1.0) * u - theta - std::lgamma(cp.a);
        return std::exp(lf + u) * (lf - lg);
      };
      const double u_hi = std::log(hi);
      kl += adaptive_simpson(integrand, u_hi - 120.0, u_hi, 1e-10, 64);
    }
    est.boundary_kl = std::max(kl, 0.0);
  } else {
    // mixture at time T: Monte Carlo with logsumexp density ratios
    const int n_mc = std::max(n_paths * n_time, 1000);
    double acc_kl = 0.0;
    for (int p = 0; p < n_mc; ++p) {
      double u = rng.uniform();
      std::size_t k = 0;
      double w_acc = data.weights[0];
      while (u > w_acc && k + 1 < data.points.size()) w_acc += data.weights[++k];
      std::vector<double> y = forward_noise(sp, data.points[k], sp.T, rng);
      for (double& v : y) v = std::max(v, 1e-300);
      double log_pt = truth.log_marginal(sp.T, y);
      double log_ref = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        log_ref += (sp.alpha[i] - 1.0) * std::log(y[i]) - y[i] -
                   std::lgamma(sp.alpha[i]);
      }
      acc_kl += log_pt - log_ref;
    }
    est.boundary_kl = std::max(acc_kl / n_mc, 0.0);
  }
  return est;
}

RankReport rank_diagnostic(const SimplexParams& sp, std::size_t true_index,
                           double t, int n_trials, RngStream& rng) {
  const std::size_t n = sp.dim();
  if (true_index >= n) {
    throw std::invalid_argument("rank_diagnostic: true_index out of range");
  }
  if (n_trials < 1) {
    throw std::invalid_argument("rank_diagnostic: need n_trials >= 1");
  }
  std::vector<double> y0(n, 0.0);
  y0[true_index] = 1.0;
  std::vector<std::size_t> counts(n, 0);
  for (int trial = 0; trial < n_trials; ++trial) {
    const std::vector<double> y = forward_noise(sp, y0, t, rng);
    const double v = y[true_index];
    std::size_t rank = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == true_index) continue;
      if (y[i] > v || (y[i] == v && i < true_index)) ++rank;
    }
    ++counts[rank - 1];
  }
  RankReport r;
  r.n = n;
  r.t = t;
  r.n_trials = static_cast<std::size_t>(n_trials);
  r.ranks.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.ranks[i] = static_cast<double>(counts[i]) / n_trials;
  }
  auto quantile = [&](double q) -> std::size_t {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += r.ranks[i];
      if (acc >= q) return i + 1;
    }
    return n;
  };
  r.q50 = quantile(0.5);
  r.q90 = quantile(0.9);
  r.q99 = quantile(0.99);
  return r;
}

std::vector<MomentGridPoint> default_moment_grid() {
  std::vector<MomentGridPoint> grid;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double b : {0.5, 1.0}) {
      for (double theta0 : {0.0, 0.5, 2.0}) {
        for (double t : {0.1, 1.0, 5.0}) {
          grid.push_back({a, b, theta0, t});
        }
      }
    }
  }
  return grid;
}

std::vector<MomentCheck> moment_validation_suite(
    std::span<const MomentGridPoint> grid, std::size_t n_samples,
    RngStream& rng) {
  if (grid.empty()) {
    throw std::invalid_argument("moment_validation_suite: empty grid");
  }
  std::vector<MomentCheck> out;
  out.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const MomentGridPoint& gp = grid[gi];
    MomentCheck mc;
    mc.point = gp;
    const CirParams p(gp.a, gp.b);
    const TransitionQuery q(gp.theta0, gp.t);
    mc.analytic_mean = conditional_mean(p, q);
    mc.analytic_var = conditional_variance(p, q);
    if (mc.analytic_var < 1e-12) {
      mc.status = "degenerate";
      out.push_back(mc);
      continue;
    }
    RngStream sub = rng.substream(gi);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    const double center = mc.analytic_mean;  // accumulate around the mean
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double x = sample_transition_exact(p, q, sub) - center;
      s1 += x;
      const double x2 = x * x;
      s2 += x2;
      s3 += x2 * x;
      s4 += x2 * x2;
    }
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    const double m1 = s1 * inv_n;
    const double m2 = s2 * inv_n;
    const double m4c = s4 * inv_n - 4.0 * m1 * (s3 * inv_n) +
                       6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    mc.mc_mean = center + m1;
    mc.mc_var = m2 - m1 * m1;
    const double se_mean = std::sqrt(mc.mc_var * inv_n);
    const double se_var =
        std::sqrt(std::max(m4c - mc.mc_var * mc.mc_var, 0.0) * inv_n);
    mc.z_mean = (mc.mc_mean - mc.analytic_mean) / se_mean;
    mc.z_var = (mc.mc_var - mc.analytic_var) / se_var;
    mc.status =
        (std::abs(mc.z_mean) <= 4.0 && std::abs(mc.z_var) <= 4.0) ? "pass"
                                                                  : "fail";
    out.push_back(mc);
  }
  return out;
}

}  // namespace simplexdiff
