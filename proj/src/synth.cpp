#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>

#include "dcm/dataset.hpp"
#include "dcm/error.hpp"

namespace dcm {

namespace {

constexpr std::uint64_t kWeightStream = 0x5eed0b0bULL;

VectorXd unit_gaussian(int n, SplitMix64& rng) {
  boost::random::normal_distribution<double> normal;
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v / v.norm();
}

double sgn(double v) { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace

void SynthConfig::validate() const {
  require(domains >= 1, "domain count must be >= 1");
  require(dim >= 1, "dimension must be >= 1");
  require(eta > 0.0, "eta must be > 0");
  require(mean_count >= 1.0, "mean_count must be >= 1");
  require(b1.size() == 0 || b1.size() == dim, "b1 has the wrong dimension");
  require(b2.size() == 0 || b2.size() == dim, "b2 has the wrong dimension");
}

SynthConfig SynthConfig::resolved() const {
  SynthConfig out = *this;
  if (out.b1.size() == 0 || out.b2.size() == 0) {
    SplitMix64 rng(0, kWeightStream);
    const VectorXd w1 = unit_gaussian(dim, rng);
    const VectorXd w2 = unit_gaussian(dim, rng);
    if (out.b1.size() == 0) out.b1 = w1;
    if (out.b2.size() == 0) out.b2 = w2;
  }
  return out;
}

MatrixXd sample_wishart(double eta, int n, int dof, SplitMix64& rng) {
  require(eta >= 0.0, "Wishart scale must be >= 0");
  require(n >= 1 && dof >= 1, "Wishart needs n >= 1 and dof >= 1");
  boost::random::normal_distribution<double> normal;
  MatrixXd A(dof, n);
  for (int i = 0; i < dof; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
  }
  A *= std::sqrt(eta);
  return A.transpose() * A;
}

DataSet synth_generate(const SynthConfig& config,
                       std::vector<MatrixXd>* covariances) {
  config.validate();
  if (covariances != nullptr) covariances->clear();
  const SynthConfig cfg = config.resolved();
  const int n = cfg.dim;

  std::vector<MatrixXd> blocks;
  std::vector<VectorXd> labels;
  Index total = 0;
  for (int t = 0; t < cfg.domains; ++t) {
    SplitMix64 rng(cfg.seed, static_cast<std::uint64_t>(t) + 1);
    Index count = 0;
    if (cfg.fixed_sizes) {
      count = static_cast<Index>(std::llround(cfg.mean_count));
    } else {
      boost::random::poisson_distribution<Index, double> poisson(cfg.mean_count);
      while (count == 0) count = poisson(rng);
    }

    // Sigma = A^T A, so x = A^T g with g ~ N(0, I_dof) has covariance Sigma
    // without factoring it.
    boost::random::normal_distribution<double> normal;
    MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
    }
    A *= std::sqrt(cfg.eta);
    if (covariances != nullptr) covariances->push_back(A.transpose() * A);

    MatrixXd G(count, n);
    for (Index i = 0; i < count; ++i) {
      for (int j = 0; j < n; ++j) G(i, j) = normal(rng);
    }
    MatrixXd X = G * A;

    VectorXd y(count);
    for (Index i = 0; i < count; ++i) {
      const double e1 = normal(rng);
      const double e2 = normal(rng);
      const double u = X.row(i).dot(cfg.b1) + e1;
      const double v = X.row(i).dot(cfg.b2) + e2;
      y(i) = sgn(sgn(u) * std::log(std::abs(v) + cfg.c));
    }
    total += count;
    blocks.push_back(std::move(X));
    labels.push_back(std::move(y));
  }

  DataSet data;
  data.X.resize(total, n);
  data.y.resize(total);
  data.d.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (int t = 0; t < cfg.domains; ++t) {
    const auto& X = blocks[static_cast<std::size_t>(t)];
    data.X.middleRows(row, X.rows()) = X;
    data.y.segment(row, X.rows()) = labels[static_cast<std::size_t>(t)];
    data.d.insert(data.d.end(), static_cast<std::size_t>(X.rows()), t + 1);
    row += X.rows();
  }
  data.label_kind = LabelKind::Discrete;
  for (int j = 0; j < n; ++j) data.feature_names.push_back("x" + std::to_string(j + 1));
  return data;
}

}  // namespace dcm
