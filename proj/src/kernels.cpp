#include "dcm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace dcm {

KernelSpec KernelSpec::rbf(double gamma) {
  KernelSpec spec{KernelKind::RBF, gamma};
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  if (kind == KernelKind::RBF) {
    require(std::isfinite(gamma) && gamma > 0.0,
            "RBF kernel needs gamma > 0, got " + std::to_string(gamma));
  }
}

double eval_kernel(const KernelSpec& spec, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::InvalidInput,
         "kernel arguments differ in dimension (" + std::to_string(a.size()) +
             " vs " + std::to_string(b.size()) + ")");
  }
  if (spec.kind == KernelKind::Delta) {
    return std::equal(a.begin(), a.end(), b.begin()) ? 1.0 : 0.0;
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    dist2 += diff * diff;
  }
  return std::exp(-spec.gamma * dist2);
}

double eval_kernel(const KernelSpec& spec, double a, double b) {
  return eval_kernel(spec, std::span<const double>(&a, 1),
                     std::span<const double>(&b, 1));
}

namespace {

// Rows of a column-major matrix are strided; copy to row-major once so the
// inner loop walks contiguous memory.
using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row(const RowMajor& M, Index i) {
  return {M.data() + i * M.cols(), static_cast<std::size_t>(M.cols())};
}

}  // namespace

MatrixXd gram(const KernelSpec& spec, const MatrixXd& X) {
  spec.validate();
  require(X.rows() >= 1, "gram needs at least one item");
  const RowMajor R = X;
  const Index n = X.rows();
  MatrixXd K(n, n);
  for (Index j = 0; j < n; ++j) {
    K(j, j) = 1.0;
    for (Index i = j + 1; i < n; ++i) {
      const double v = eval_kernel(spec, row(R, i), row(R, j));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

MatrixXd cross_gram(const KernelSpec& spec, const MatrixXd& X,
                    const MatrixXd& Z) {
  spec.validate();
  if (X.cols() != Z.cols()) {
    fail(ErrorCode::InvalidInput,
         "cross_gram feature dimension mismatch (" + std::to_string(X.cols()) +
             " vs " + std::to_string(Z.cols()) + ")");
  }
  const RowMajor RX = X;
  const RowMajor RZ = Z;
  MatrixXd K(X.rows(), Z.rows());
  for (Index j = 0; j < Z.rows(); ++j) {
    for (Index i = 0; i < X.rows(); ++i) {
      K(i, j) = eval_kernel(spec, row(RX, i), row(RZ, j));
    }
  }
  return K;
}

MatrixXd center_gram(const MatrixXd& K) {
  require(K.rows() == K.cols(), "center_gram needs a square matrix");
  const VectorXd col_mean = K.colwise().mean().transpose();
  const VectorXd row_mean = K.rowwise().mean();
  const double total = row_mean.mean();
  MatrixXd C = K;
  C.colwise() -= row_mean;
  C.rowwise() -= col_mean.transpose();
  C.array() += total;
  return C;
}

MatrixXd center_cross(const MatrixXd& Kz, const MatrixXd& K) {
  if (K.rows() != K.cols() || Kz.rows() != K.rows()) {
    fail(ErrorCode::InvalidInput,
         "center_cross shape mismatch: Kz is " + std::to_string(Kz.rows()) +
             "x" + std::to_string(Kz.cols()) + ", K is " +
             std::to_string(K.rows()) + "x" + std::to_string(K.cols()));
  }
  MatrixXd C = Kz;
  C.colwise() -= K.rowwise().mean();
  C.rowwise() -= C.colwise().mean();
  return C;
}

double median_gamma(const VectorXd& y) {
  require(y.size() > 0, "median_gamma needs at least one value");
  std::vector<double> v(y.data(), y.data() + y.size());
  for (double& x : v) x = std::abs(x);
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double med = *mid;
  if (v.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(v.begin(), mid));
  }
  require(med > 0.0, "median |y| is zero; pass gamma_y explicitly");
  return 1.0 / (2.0 * med * med);
}

}  // namespace dcm
