#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dcm/dataset.hpp"
#include "dcm/model.hpp"
#include "dcm/nystrom.hpp"

namespace dcm {

// --- downstream learner ----------------------------------------------------

/// Linear ridge regression with an unpenalized intercept. Features are
/// stored one column per sample (p x N), matching transform() output.
struct RidgePredictor {
  VectorXd weights;
  VectorXd feature_mean;
  double intercept = 0.0;
  double lambda = 0.0;

  VectorXd predict(const MatrixXd& features) const;
};

/// Minimizes |y - ybar - w^T (f - fbar)|^2 + lambda |w|^2. When the system
/// is numerically singular lambda is raised tenfold (with a warning) up to
/// eight times before RankDeficient is thrown.
RidgePredictor krr_fit(const MatrixXd& features, const VectorXd& targets,
                       double lambda);

// --- metrics ---------------------------------------------------------------

struct Confusion {
  Index tp = 0, fn = 0, tn = 0, fp = 0;
};

/// Scores >= 0 predict +1. Labels must be +-1.
Confusion confusion(const VectorXd& scores, const VectorXd& labels);

double metric_accuracy(const VectorXd& scores, const VectorXd& labels);
double metric_rmse(const VectorXd& pred, const VectorXd& truth);
double metric_gmean(Index tp, Index fn, Index tn, Index fp);
/// Mann-Whitney statistic; tied pairs count one half.
double metric_auc(const VectorXd& scores, const VectorXd& labels);

enum class Metric { Accuracy, AUC, GMean, RMSE };
std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view name);

/// Maps two distinct label values to -1 / +1 (smaller value first).
/// Throws InvalidInput for any other number of classes.
VectorXd binary_targets(const VectorXd& y);

// --- experiments -----------------------------------------------------------

/// A projection algorithm, or the ridge predictor on the centered input
/// Gram columns ("baseline").
struct Method {
  std::optional<Algorithm> algorithm;

  std::string name() const;
  static Method parse(std::string_view name);
  static Method baseline() { return {}; }
  bool operator==(const Method&) const = default;
};

struct ExperimentConfig {
  std::vector<Method> methods{Method{Algorithm::DCM}};
  std::vector<Metric> metrics;  // empty: defaults for the label kind
  double epsilon = 1e-3;
  double gamma = 0.5;
  std::optional<double> gamma_y;
  Index m = 2;
  Index M = 100;
  double lambda = 1e-3;
  int reps = 20;
  std::uint64_t seed = 0;

  /// Synthetic protocol: a fresh dataset per repetition with seed + i; the
  /// first round(0.7 T) domains train, the rest test.
  SynthConfig synth;
  /// Fixed data instead of the generator: repetitions then differ only in
  /// the landmark seed.
  std::optional<DataSet> data;
  std::set<int> train_domains;  // empty: first round(0.7 T) domains

  void validate() const;
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for one repetition
  std::vector<double> values;
};

struct MethodResult {
  std::string method;
  std::map<std::string, MetricSummary> metrics;
  /// Total wall-clock seconds over all repetitions per stage
  /// ("fit", "transform", "predict").
  std::map<std::string, double> stage_seconds;
};

struct EvalReport {
  ExperimentConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<MethodResult> rows;

  const MethodResult& row(std::string_view method) const;
  std::string to_json() const;
  std::string to_text() const;
  /// One line per (method, repetition) with a column per metric.
  std::string to_csv() const;
};

MetricSummary summarize(std::vector<double> values);

EvalReport run_experiment(const ExperimentConfig& config);

/// Fits `method` on `train` and returns test-set metrics; exposed for the
/// CLI and tests. `seed` drives the landmark sampling of fast methods.
std::map<std::string, double> evaluate_once(
    const Method& method, const DataSet& train, const DataSet& test,
    const ExperimentConfig& config, std::uint64_t seed,
    std::map<std::string, double>* stage_seconds = nullptr);

}  // namespace dcm
