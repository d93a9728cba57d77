#ifndef SIMPLEXDIFF_SCORE_HPP
#define SIMPLEXDIFF_SCORE_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "simplexdiff/rng.hpp"
#include "simplexdiff/simplex.hpp"

namespace simplexdiff {

// Estimate of grad_y log p_t(y) on the strictly positive orthant.
class ScoreFunction {
 public:
  virtual ~ScoreFunction() = default;
  virtual std::vector<double> evaluate(double t,
                                       std::span<const double> y) const = 0;
};

// Finite-support data distribution (typically one-hot vertices).
struct DataSet {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;  // sums to 1

  DataSet(std::vector<std::vector<double>> pts, std::vector<double> w);
  // K equally weighted one-hot points e_{indices[k]} in dimension n (0-based).
  static DataSet one_hot(std::size_t n, std::span<const std::size_t> indices);
};

// Exact marginal score for a finite mixture of CIR transition laws:
// p_t(y) = sum_k w_k prod_i f(y_i | y0^{(k)}_i), assembled with softmax
// responsibilities over the mixture components.
class AnalyticMixtureScore : public ScoreFunction {
 public:
  AnalyticMixtureScore(SimplexParams sp, DataSet data);

  std::vector<double> evaluate(double t,
                               std::span<const double> y) const override;
  // ln p_t(y); exposed for finite-difference checks and KL estimation.
  double log_marginal(double t, std::span<const double> y) const;

 private:
  SimplexParams sp_;
  DataSet data_;
};

// Score of the stationary product law prod_i Gamma(alpha_i, 1):
// s_i(y) = (alpha_i - 1)/y_i - 1, independent of t.
class StationaryGammaScore : public ScoreFunction {
 public:
  explicit StationaryGammaScore(std::vector<double> alpha)
      : alpha_(std::move(alpha)) {}
  std::vector<double> evaluate(double t,
                               std::span<const double> y) const override;

 private:
  std::vector<double> alpha_;
};

// Small fully connected score model. Input is (ln y, sinusoidal features of
// t); tanh hidden units, linear output in score coordinates.
class MlpScoreModel : public ScoreFunction {
 public:
  static MlpScoreModel create(const SimplexParams& sp,
                              std::span<const int> hidden_widths,
                              RngStream& rng);

  std::vector<double> evaluate(double t,
                               std::span<const double> y) const override;

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  const SimplexParams& params_meta() const { return sp_; }
  std::uint64_t training_seed() const { return training_seed_; }
  void set_training_seed(std::uint64_t s) { training_seed_ = s; }
  std::uint64_t trained_steps() const { return trained_steps_; }
  void set_trained_steps(std::uint64_t s) { trained_steps_ = s; }

  void save(const std::string& path) const;
  static MlpScoreModel load(const std::string& path);

  // Backprop: adds d(loss)/d(params) into grad_accum given d(loss)/d(score).
  void accumulate_gradient(double t, std::span<const double> y,
                           std::span<const double> dloss_dscore,
                           std::span<double> grad_accum) const;

  std::span<const int> widths() const { return widths_; }

 private:
  MlpScoreModel(SimplexParams sp, std::vector<int> widths);

  std::vector<double> features(double t, std::span<const double> y) const;
  // forward pass keeping all layer activations
  std::vector<std::vector<double>> forward_layers(
      std::span<const double> input) const;

  SimplexParams sp_;
  std::vector<int> widths_;  // input, hidden..., n
  std::vector<double> omegas_;
  std::vector<double> params_;
  std::vector<std::size_t> w_off_, b_off_;
  std::uint64_t training_seed_ = 0;
  std::uint64_t trained_steps_ = 0;

  static constexpr int kTimeFeaturePairs = 8;
};

struct DsmBatchSample {
  double t;
  std::vector<double> y0;
  std::vector<double> y_t;
};

struct DsmBatchLoss {
  double value = 0.0;
  std::vector<double> gradient;
};

// Sigma-weighted denoising score matching loss over a batch:
// mean_k b * sum_i y_{t,i} (g_i - s_i)^2 with g the conditional score
// grad log p_{t|0}(y_t | y0). Gradient is the exact reverse-mode derivative
// with respect to the model parameters.
DsmBatchLoss dsm_loss_and_gradient(const MlpScoreModel& model,
                                   const SimplexParams& sp,
                                   std::span<const DsmBatchSample> batch);

struct TrainConfig {
  int steps = 2000;
  int batch_size = 128;
  double learning_rate = 1e-3;
  double t_min = 1e-3;
};

struct TrainingDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Draws one DSM training triple (uniform t, weighted data point, exact
// forward noising); components of y_t below 1e-12 trigger a resample.
DsmBatchSample draw_dsm_sample(const SimplexParams& sp, const DataSet& data,
                               double t_min, RngStream& rng);

// Plain SGD on dsm_loss_and_gradient; returns the per-step loss curve.
// Throws TrainingDivergence when the loss stops being finite.
std::vector<double> train_score_model(MlpScoreModel& model,
                                      const SimplexParams& sp,
                                      const DataSet& data,
                                      const TrainConfig& config,
                                      RngStream& rng);

}  // namespace simplexdiff

#endif
