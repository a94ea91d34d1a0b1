#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dcm/eval.hpp"

namespace dcm {

VectorXd RidgePredictor::predict(const MatrixXd& features) const {
  require(features.rows() == weights.size(),
          "predictor expects " + std::to_string(weights.size()) +
              " features, got " + std::to_string(features.rows()));
  VectorXd out = (features.colwise() - feature_mean).transpose() * weights;
  out.array() += intercept;
  return out;
}

RidgePredictor krr_fit(const MatrixXd& features, const VectorXd& targets,
                       double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "ridge lambda must be > 0");
  require(features.cols() == targets.size() && targets.size() >= 1,
          "features and targets disagree in sample count");
  RidgePredictor p;
  p.feature_mean = features.rowwise().mean();
  p.intercept = targets.mean();
  const MatrixXd F = features.colwise() - p.feature_mean;
  const VectorXd t = targets.array() - p.intercept;
  const MatrixXd G = F * F.transpose();
  const VectorXd rhs = F * t;

  double lam = lambda;
  for (int attempt = 0; attempt <= 8; ++attempt, lam *= 10.0) {
    MatrixXd S = G;
    S.diagonal().array() += lam;
    Eigen::LDLT<MatrixXd> ldlt(S);
    // LDLT's rcond estimate can miss an exactly zero pivot; check D itself.
    const VectorXd pivots = ldlt.vectorD().cwiseAbs();
    const bool ok = ldlt.info() == Eigen::Success && pivots.size() > 0 &&
                    pivots.minCoeff() > 1e-13 * pivots.maxCoeff();
    if (ok) {
      if (attempt > 0) {
        spdlog::warn("ridge system singular at lambda = {}; used {}", lambda,
                     lam);
      }
      p.weights = ldlt.solve(rhs);
      p.lambda = lam;
      return p;
    }
  }
  fail(ErrorCode::RankDeficient,
       "ridge system stays singular up to lambda = " + std::to_string(lam));
}

namespace {

void check_labels(const VectorXd& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    require(labels(i) == 1.0 || labels(i) == -1.0,
            "labels must be +1 or -1");
  }
}

}  // namespace

Confusion confusion(const VectorXd& scores, const VectorXd& labels) {
  require(scores.size() == labels.size(), "scores and labels differ in length");
  check_labels(labels);
  Confusion c;
  for (Index i = 0; i < scores.size(); ++i) {
    const bool pred = scores(i) >= 0.0;
    if (labels(i) > 0) {
      ++(pred ? c.tp : c.fn);
    } else {
      ++(pred ? c.fp : c.tn);
    }
  }
  return c;
}

double metric_accuracy(const VectorXd& scores, const VectorXd& labels) {
  require(scores.size() >= 1, "accuracy of an empty set");
  const Confusion c = confusion(scores, labels);
  return 100.0 * static_cast<double>(c.tp + c.tn) /
         static_cast<double>(scores.size());
}

double metric_rmse(const VectorXd& pred, const VectorXd& truth) {
  require(pred.size() == truth.size(), "rmse inputs differ in length");
  require(pred.size() >= 1, "rmse of an empty set");
  return std::sqrt((pred - truth).squaredNorm() /
                   static_cast<double>(pred.size()));
}

double metric_gmean(Index tp, Index fn, Index tn, Index fp) {
  require(tp >= 0 && fn >= 0 && tn >= 0 && fp >= 0, "negative counts");
  if (tp + fn == 0 || tn + fp == 0) {
    fail(ErrorCode::UndefinedMetric, "G-mean needs both classes present");
  }
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return std::sqrt(tpr * tnr);
}

double metric_auc(const VectorXd& scores, const VectorXd& labels) {
  require(scores.size() == labels.size(), "scores and labels differ in length");
  check_labels(labels);
  const Index n = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return scores(a) < scores(b); });

  // Twice the Mann-Whitney count, kept integral so ties are exact.
  std::int64_t twice = 0;
  std::int64_t neg_below = 0, pos_total = 0, neg_total = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::int64_t pos = 0, neg = 0;
    while (j < order.size() && scores(order[j]) == scores(order[i])) {
      (labels(order[j]) > 0 ? pos : neg) += 1;
      ++j;
    }
    twice += 2 * pos * neg_below + pos * neg;
    neg_below += neg;
    pos_total += pos;
    neg_total += neg;
    i = j;
  }
  if (pos_total == 0 || neg_total == 0) {
    fail(ErrorCode::UndefinedMetric, "AUC needs both classes present");
  }
  return static_cast<double>(twice) /
         (2.0 * static_cast<double>(pos_total) * static_cast<double>(neg_total));
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Accuracy: return "accuracy";
    case Metric::AUC: return "auc";
    case Metric::GMean: return "gmean";
    case Metric::RMSE: return "rmse";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::Accuracy, Metric::AUC, Metric::GMean, Metric::RMSE}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorCode::InvalidInput,
       "unknown metric '" + std::string(name) +
           "' (expected accuracy, auc, gmean or rmse)");
}

VectorXd binary_targets(const VectorXd& y) {
  require(y.size() >= 1, "no labels");
  const double lo = y.minCoeff();
  const double hi = y.maxCoeff();
  VectorXd out(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) != lo && y(i) != hi) {
      fail(ErrorCode::InvalidInput,
           "classification needs exactly two label values; multiclass is not "
           "supported");
    }
    out(i) = y(i) == hi ? 1.0 : -1.0;
  }
  require(lo != hi, "classification needs two label values, found one");
  return out;
}

}  // namespace dcm
