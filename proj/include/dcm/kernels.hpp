#pragma once

#include <Eigen/Dense>
#include <span>

#include "dcm/error.hpp"

namespace dcm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class KernelKind { RBF, Delta };

/// k(a, b) = exp(-gamma * |a - b|^2) for RBF; the indicator of a == b for
/// Delta. gamma is 1 / (2 sigma^2) and is ignored by Delta.
struct KernelSpec {
  KernelKind kind = KernelKind::RBF;
  double gamma = 1.0;

  static KernelSpec rbf(double gamma);
  static KernelSpec delta() { return {KernelKind::Delta, 0.0}; }

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

/// Kernels for inputs, outputs and domain labels.
struct KernelSet {
  KernelSpec x = KernelSpec::rbf(1.0);
  KernelSpec y = KernelSpec::delta();
  KernelSpec d = KernelSpec::delta();
};

double eval_kernel(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b);
double eval_kernel(const KernelSpec& spec, double a, double b);

/// Items are the rows of X.
MatrixXd gram(const KernelSpec& spec, const MatrixXd& X);
/// Entry (i, j) = k(X.row(i), Z.row(j)).
MatrixXd cross_gram(const KernelSpec& spec, const MatrixXd& X,
                    const MatrixXd& Z);

/// H K H with H = I - 11^T / N.
MatrixXd center_gram(const MatrixXd& K);
/// Centers test columns against the training statistics of K:
/// column j becomes H (Kz[:, j] - rowmean(K)).
MatrixXd center_cross(const MatrixXd& Kz, const MatrixXd& K);

/// Centered Gram matrices of inputs, outputs and domains.
struct GramBundle {
  MatrixXd Kx;
  MatrixXd Ky;
  MatrixXd Kd;
  bool centered = false;

  Index size() const { return Kx.rows(); }
};

/// gamma_y = 1 / (2 median(|y|)^2), used for continuous outputs.
double median_gamma(const VectorXd& y);

}  // namespace dcm
