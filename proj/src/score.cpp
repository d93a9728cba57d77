#include "simplexdiff/score.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "simplexdiff/special.hpp"

namespace simplexdiff {

DataSet::DataSet(std::vector<std::vector<double>> pts, std::vector<double> w)
    : points(std::move(pts)), weights(std::move(w)) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("DataSet: need K >= 1 points with weights");
  }
  double sum = 0.0;
  for (double wk : weights) {
    if (wk < 0.0) throw std::invalid_argument("DataSet: negative weight");
    sum += wk;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("DataSet: weights must sum to 1");
  }
  for (const auto& p : points) {
    if (p.size() != points[0].size()) {
      throw std::invalid_argument("DataSet: inconsistent dimensions");
    }
  }
}

DataSet DataSet::one_hot(std::size_t n, std::span<const std::size_t> indices) {
  std::vector<std::vector<double>> pts;
  for (std::size_t idx : indices) {
    if (idx >= n) throw std::invalid_argument("DataSet::one_hot: bad index");
    std::vector<double> p(n, 0.0);
    p[idx] = 1.0;
    pts.push_back(std::move(p));
  }
  std::vector<double> w(indices.size(), 1.0 / indices.size());
  return DataSet(std::move(pts), std::move(w));
}

AnalyticMixtureScore::AnalyticMixtureScore(SimplexParams sp, DataSet data)
    : sp_(std::move(sp)), data_(std::move(data)) {
  if (data_.points[0].size() != sp_.dim()) {
    throw std::invalid_argument("AnalyticMixtureScore: dimension mismatch");
  }
}

double AnalyticMixtureScore::log_marginal(double t,
                                          std::span<const double> y) const {
  const std::size_t n = sp_.dim();
  std::vector<double> comp(data_.points.size());
  for (std::size_t k = 0; k < data_.points.size(); ++k) {
    double l = std::log(data_.weights[k]);
    for (std::size_t i = 0; i < n; ++i) {
      l += log_transition_density(sp_.coord(i),
                                  TransitionQuery(data_.points[k][i], t),
                                  y[i]);
    }
    comp[k] = l;
  }
  return log_sum_exp(comp);
}

std::vector<double> AnalyticMixtureScore::evaluate(
    double t, std::span<const double> y) const {
  const std::size_t n = sp_.dim();
  if (y.size() != n) {
    throw std::invalid_argument("AnalyticMixtureScore: dimension mismatch");
  }
  for (double yi : y) {
    if (!(yi > 0.0)) {
      throw std::domain_error("AnalyticMixtureScore: y must be positive");
    }
  }
  const std::size_t K = data_.points.size();
  std::vector<double> log_comp(K);
  std::vector<std::vector<double>> grad_comp(K, std::vector<double>(n));
  for (std::size_t k = 0; k < K; ++k) {
    double l = std::log(data_.weights[k]);
    for (std::size_t i = 0; i < n; ++i) {
      TransitionQuery q(data_.points[k][i], t);
      l += log_transition_density(sp_.coord(i), q, y[i]);
      grad_comp[k][i] = grad_log_transition_density(sp_.coord(i), q, y[i]);
    }
    log_comp[k] = l;
  }
  const double lse = log_sum_exp(log_comp);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const double resp = std::exp(log_comp[k] - lse);
    for (std::size_t i = 0; i < n; ++i) out[i] += resp * grad_comp[k][i];
  }
  return out;
}

std::vector<double> StationaryGammaScore::evaluate(
    double /*t*/, std::span<const double> y) const {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = (alpha_[i] - 1.0) / y[i] - 1.0;
  }
  return out;
}

MlpScoreModel::MlpScoreModel(SimplexParams sp, std::vector<int> widths)
    : sp_(std::move(sp)), widths_(std::move(widths)) {
  // log-spaced frequencies covering slow and fast time scales on [0, T]
  const double lo = 2.0 * M_PI / (8.0 * sp_.T);
  const double ratio = std::pow(1600.0, 1.0 / (kTimeFeaturePairs - 1));
  double w = lo;
  for (int j = 0; j < kTimeFeaturePairs; ++j) {
    omegas_.push_back(w);
    w *= ratio;
  }
  std::size_t off = 0;
  for (std::size_t l = 1; l < widths_.size(); ++l) {
    w_off_.push_back(off);
    off += static_cast<std::size_t>(widths_[l]) * widths_[l - 1];
    b_off_.push_back(off);
    off += widths_[l];
  }
  params_.assign(off, 0.0);
}

MlpScoreModel MlpScoreModel::create(const SimplexParams& sp,
                                    std::span<const int> hidden_widths,
                                    RngStream& rng) {
  const int n = static_cast<int>(sp.dim());
  std::vector<int> widths;
  widths.push_back(n + 2 * kTimeFeaturePairs);
  for (int h : hidden_widths) {
    if (h < 1) throw std::invalid_argument("MlpScoreModel: bad hidden width");
    widths.push_back(h);
  }
  widths.push_back(n);
  MlpScoreModel m(sp, std::move(widths));
  for (std::size_t l = 0; l + 1 < m.widths_.size(); ++l) {
    const int fan_in = m.widths_[l];
    const int fan_out = m.widths_[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int i = 0; i < fan_out * fan_in; ++i) {
      m.params_[m.w_off_[l] + i] = scale * rng.normal();
    }
  }
  return m;
}

std::vector<double> MlpScoreModel::features(double t,
                                            std::span<const double> y) const {
  std::vector<double> f;
  f.reserve(widths_[0]);
  for (double yi : y) {
    if (!(yi > 0.0)) {
      throw std::domain_error("MlpScoreModel: y must be positive");
    }
    f.push_back(std::log(yi));
  }
  for (double w : omegas_) {
    f.push_back(std::sin(w * t));
    f.push_back(std::cos(w * t));
  }
  return f;
}

std::vector<std::vector<double>> MlpScoreModel::forward_layers(
    std::span<const double> input) const {
  std::vector<std::vector<double>> acts;
  acts.emplace_back(input.begin(), input.end());
  const std::size_t n_layers = widths_.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    const double* W = params_.data() + w_off_[l];
    const double* b = params_.data() + b_off_[l];
    const std::vector<double>& a = acts.back();
    std::vector<double> z(out);
    for (int i = 0; i < out; ++i) {
      double s = b[i];
      const double* row = W + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) s += row[j] * a[j];
      z[i] = (l + 1 < n_layers) ? std::tanh(s) : s;
    }
    acts.push_back(std::move(z));
  }
  return acts;
}

std::vector<double> MlpScoreModel::evaluate(double t,
                                            std::span<const double> y) const {
  if (y.size() != sp_.dim()) {
    throw std::invalid_argument("MlpScoreModel: dimension mismatch");
  }
  auto acts = forward_layers(features(t, y));
  return acts.back();
}

void MlpScoreModel::accumulate_gradient(double t, std::span<const double> y,
                                        std::span<const double> dloss_dscore,
                                        std::span<double> grad_accum) const {
  auto acts = forward_layers(features(t, y));
  const std::size_t n_layers = widths_.size() - 1;
  std::vector<double> delta(dloss_dscore.begin(), dloss_dscore.end());
  for (std::size_t l = n_layers; l-- > 0;) {
    const int in = widths_[l];
    const int out = widths_[l + 1];
    const std::vector<double>& a = acts[l];
    double* gW = grad_accum.data() + w_off_[l];
    double* gb = grad_accum.data() + b_off_[l];
    for (int i = 0; i < out; ++i) {
      gb[i] += delta[i];
      double* row = gW + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) row[j] += delta[i] * a[j];
    }
    if (l == 0) break;
    const double* W = params_.data() + w_off_[l];
    std::vector<double> prev(in, 0.0);
    for (int i = 0; i < out; ++i) {
      const double* row = W + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) prev[j] += row[j] * delta[i];
    }
    // hidden activations are tanh; a[l] holds tanh values
    for (int j = 0; j < in; ++j) prev[j] *= 1.0 - a[j] * a[j];
    delta = std::move(prev);
  }
}

void MlpScoreModel::save(const std::string& path) const {
  nlohmann::ordered_json j;
  j["format"] = "simplexdiff-score-v1";
  j["widths"] = widths_;
  j["alpha"] = sp_.alpha;
  j["b"] = sp_.b;
  j["T"] = sp_.T;
  j["seed"] = training_seed_;
  j["steps_done"] = trained_steps_;
  j["params"] = params_;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("MlpScoreModel::save: cannot open " + path);
  out << j.dump(2) << "\n";
}

MlpScoreModel MlpScoreModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("MlpScoreModel::load: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error("MlpScoreModel::load: corrupt checkpoint");
  }
  if (!j.contains("format") || j["format"] != "simplexdiff-score-v1") {
    throw std::runtime_error("MlpScoreModel::load: unrecognized format");
  }
  SimplexParams sp(j["alpha"].get<std::vector<double>>(), j["b"].get<double>(),
                   j["T"].get<double>());
  MlpScoreModel m(std::move(sp), j["widths"].get<std::vector<int>>());
  auto params = j["params"].get<std::vector<double>>();
  if (params.size() != m.params_.size()) {
    throw std::runtime_error("MlpScoreModel::load: parameter count mismatch");
  }
  m.params_ = std::move(params);
  m.training_seed_ = j["seed"].get<std::uint64_t>();
  if (j.contains("steps_done")) {
    m.trained_steps_ = j["steps_done"].get<std::uint64_t>();
  }
  return m;
}

DsmBatchLoss dsm_loss_and_gradient(const MlpScoreModel& model,
                                   const SimplexParams& sp,
                                   std::span<const DsmBatchSample> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("dsm_loss_and_gradient: empty batch");
  }
  const std::size_t n = sp.dim();
  const double inv_b_size = 1.0 / static_cast<double>(batch.size());
  DsmBatchLoss result;
  result.gradient.assign(model.parameter_count(), 0.0);
  std::vector<double> per_sample;
  per_sample.reserve(batch.size());
  std::vector<double> dls(n);
  for (const DsmBatchSample& s : batch) {
    if (s.y0.size() != n || s.y_t.size() != n) {
      throw std::invalid_argument("dsm_loss_and_gradient: malformed batch");
    }
    const std::vector<double> score = model.evaluate(s.t, s.y_t);
    double l = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = grad_log_transition_density(
          sp.coord(i), TransitionQuery(s.y0[i], s.t), s.y_t[i]);
      const double r = g - score[i];
      l += s.y_t[i] * r * r;
      dls[i] = -2.0 * sp.b * s.y_t[i] * r * inv_b_size;
    }
    per_sample.push_back(sp.b * l);
    model.accumulate_gradient(s.t, s.y_t, dls, result.gradient);
  }
  // sorted fixed-order summation makes the value batch-permutation invariant
  std::sort(per_sample.begin(), per_sample.end());
  double sum = 0.0;
  for (double v : per_sample) sum += v;
  result.value = sum * inv_b_size;
  return result;
}

DsmBatchSample draw_dsm_sample(const SimplexParams& sp, const DataSet& data,
                               double t_min, RngStream& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DsmBatchSample s;
    s.t = t_min + (sp.T - t_min) * rng.uniform();
    double u = rng.uniform();
    std::size_t k = 0;
    double acc = data.weights[0];
    while (u > acc && k + 1 < data.points.size()) acc += data.weights[++k];
    s.y0 = data.points[k];
    s.y_t = forward_noise(sp, s.y0, s.t, rng);
    bool ok = true;
    for (double v : s.y_t) {
      if (v < 1e-12) ok = false;
    }
    if (ok) return s;
  }
  throw std::runtime_error("draw_dsm_sample: persistent degenerate draws");
}

std::vector<double> train_score_model(MlpScoreModel& model,
                                      const SimplexParams& sp,
                                      const DataSet& data,
                                      const TrainConfig& config,
                                      RngStream& rng) {
  if (config.batch_size < 1 || config.steps < 0 || !(config.t_min > 0.0)) {
    throw std::invalid_argument("train_score_model: bad config");
  }
  model.set_training_seed(rng.seed());
  std::vector<double> losses;
  losses.reserve(config.steps);
  std::vector<DsmBatchSample> batch(config.batch_size);
  for (int step = 0; step < config.steps; ++step) {
    for (int k = 0; k < config.batch_size; ++k) {
      batch[k] = draw_dsm_sample(sp, data, config.t_min, rng);
    }
    DsmBatchLoss loss = dsm_loss_and_gradient(model, sp, batch);
    if (!std::isfinite(loss.value)) {
      throw TrainingDivergence("train_score_model: non-finite loss at step " +
                               std::to_string(step));
    }
    std::span<double> params = model.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= config.learning_rate * loss.gradient[i];
    }
    losses.push_back(loss.value);
  }
  return losses;
}

}  // namespace simplexdiff
