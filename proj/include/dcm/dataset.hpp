#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dcm/random.hpp"

namespace dcm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class LabelKind { Discrete, Continuous };

/// Rows of (x, y, d) with d in 1..T.
struct DataSet {
  MatrixXd X;
  VectorXd y;
  std::vector<int> d;
  LabelKind label_kind = LabelKind::Discrete;
  std::vector<std::string> feature_names;

  Index size() const { return X.rows(); }
  Index dim() const { return X.cols(); }
  int domain_count() const;
  /// Entry t holds the number of rows with label t + 1.
  std::vector<Index> domain_sizes() const;
  std::set<int> domains() const;
  /// Domain labels as an N x 1 matrix, the form the kernels consume.
  MatrixXd domain_column() const;

  void validate() const;
  DataSet subset(const std::vector<Index>& rows) const;
  DataSet permuted(const std::vector<Index>& perm) const { return subset(perm); }
};

struct SynthConfig {
  int domains = 10;
  int dim = 10;
  double eta = 0.5;
  double mean_count = 100.0;
  std::uint64_t seed = 0;
  /// Offset inside the log factor of the label function.
  double c = 0.5;
  /// When set, every domain gets exactly round(mean_count) rows.
  bool fixed_sizes = false;
  /// Weight vectors; left empty they default to unit vectors drawn from
  /// seed 0, independent of `seed`.
  VectorXd b1;
  VectorXd b2;

  void validate() const;
  /// Fills b1/b2 with the defaults when empty.
  SynthConfig resolved() const;
};

/// A^T A with A a dof x n matrix of N(0, eta) entries.
MatrixXd sample_wishart(double eta, int n, int dof, SplitMix64& rng);

/// Multi-domain Gaussian data: domain t draws n_t ~ Poisson(mean_count)
/// points from N(0, Sigma_t), Sigma_t ~ Wishart(eta I, n), and labels
/// y = sgn(sgn(b1.x + e1) * log(|b2.x + e2| + c)) with sgn(0) = +1.
/// When `covariances` is given it receives Sigma_t for every domain.
DataSet synth_generate(const SynthConfig& cfg,
                       std::vector<MatrixXd>* covariances = nullptr);

/// Columns used when reading a CSV. Empty `feature_cols` takes every column
/// that is not the label or domain column.
struct CsvSchema {
  std::vector<std::string> feature_cols;
  std::string label_col = "y";
  std::string domain_col = "d";
  LabelKind label_kind = LabelKind::Discrete;
};

DataSet load_csv(const std::filesystem::path& path, const CsvSchema& schema);
void write_csv(const std::filesystem::path& path, const DataSet& data);
std::string to_csv(const DataSet& data);

/// Rows whose domain is in `train_domains` go to the first set.
std::pair<DataSet, DataSet> split_domains(const DataSet& data,
                                          const std::set<int>& train_domains);

}  // namespace dcm
