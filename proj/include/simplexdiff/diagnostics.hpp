#ifndef SIMPLEXDIFF_DIAGNOSTICS_HPP
#define SIMPLEXDIFF_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "simplexdiff/cir.hpp"
#include "simplexdiff/rng.hpp"
#include "simplexdiff/score.hpp"
#include "simplexdiff/simplex.hpp"

namespace simplexdiff {

struct KsReport {
  double statistic = 0.0;
  std::size_t n_samples = 0;
  double threshold = 0.0;
  bool pass = false;
};

// One-sample Kolmogorov-Smirnov statistic sup |F_emp - F|.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

// Default threshold is the asymptotic alpha ~ 0.01 critical value 1.63/sqrt(N)
// when `threshold` <= 0.
KsReport ks_test(std::span<const double> samples,
                 const std::function<double(double)>& cdf,
                 double threshold = 0.0);

// KS of a sample against a density given in log form, with the CDF obtained
// by cumulative quadrature from `lower` (0 allowed for integrable
// singularities).
KsReport ks_test_log_density(std::span<const double> samples,
                             const std::function<double(double)>& log_pdf,
                             double lower, double threshold = 0.0);

struct KlEstimate {
  double delta_i = 0.0;      // Monte Carlo estimate of the Girsanov integral
  double boundary_kl = 0.0;  // KL(p_T || p_ref)
  double std_error = 0.0;    // standard error of delta_i
};

// Girsanov decomposition of the path KL: delta_i averages the
// Sigma-weighted squared score error over forward draws at midpoint times;
// boundary_kl is computed by per-coordinate quadrature for point-mass data
// and by Monte Carlo with logsumexp density ratios otherwise.
KlEstimate estimate_elbo_gap(const SimplexParams& sp, const DataSet& data,
                             const ScoreFunction& score, int n_paths,
                             int n_time, RngStream& rng);

struct RankReport {
  std::size_t n = 0;
  double t = 0.0;
  std::size_t n_trials = 0;
  std::vector<double> ranks;  // probability vector over ranks 1..n
  std::size_t q50 = 0, q90 = 0, q99 = 0;
};

// Forward-noises the one-hot vertex e_{true_index} (0-based) n_trials times
// and records the descending-sort rank of the ground-truth coordinate
// (ties broken toward the lowest index).
RankReport rank_diagnostic(const SimplexParams& sp, std::size_t true_index,
                           double t, int n_trials, RngStream& rng);

struct MomentGridPoint {
  double a, b, theta0, t;
};

struct MomentCheck {
  MomentGridPoint point{};
  double analytic_mean = 0.0, analytic_var = 0.0;
  double mc_mean = 0.0, mc_var = 0.0;
  double z_mean = 0.0, z_var = 0.0;
  std::string status;  // "pass", "fail" or "degenerate"
};

// Default grid from the CIR module contract:
// a in {0.5,1,2} x b in {0.5,1} x theta0 in {0,0.5,2} x t in {0.1,1,5}.
std::vector<MomentGridPoint> default_moment_grid();

// Monte Carlo mean/variance of the exact transition sampler against the
// analytic conditional moments, pass at |z| <= 4.
std::vector<MomentCheck> moment_validation_suite(
    std::span<const MomentGridPoint> grid, std::size_t n_samples,
    RngStream& rng);

}  // namespace simplexdiff

#endif
