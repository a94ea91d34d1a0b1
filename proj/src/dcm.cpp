#include "dcm/dcm.hpp"

#include <spdlog/spdlog.h>

#include <cfloat>
#include <cmath>

namespace dcm {

void DcmOptions::validate() const {
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(m >= 1, "m must be at least 1");
  require(std::isfinite(rhs_ridge) && rhs_ridge >= 0.0,
          "rhs ridge must be non-negative");
}

KernelSet default_kernels(const DataSet& data, double gamma,
                          std::optional<double> gamma_y) {
  KernelSet k;
  k.x = KernelSpec::rbf(gamma);
  if (data.label_kind == LabelKind::Continuous) {
    k.y = KernelSpec::rbf(gamma_y ? *gamma_y : median_gamma(data.y));
  } else {
    k.y = KernelSpec::delta();
  }
  k.d = KernelSpec::delta();
  return k;
}

namespace {

MatrixXd label_column(const DataSet& data) {
  return MatrixXd(data.y);
}

}  // namespace

GramBundle build_gram_bundle(const DataSet& data, const KernelSet& kernels) {
  data.validate();
  GramBundle g;
  g.Kx = center_gram(gram(kernels.x, data.X));
  g.Ky = center_gram(gram(kernels.y, label_column(data)));
  g.Kd = center_gram(gram(kernels.d, data.domain_column()));
  g.centered = true;
  return g;
}

namespace {

// K (K + delta I)^{-1}
MatrixXd smoother(const MatrixXd& K, double delta) {
  MatrixXd shifted = K;
  shifted.diagonal().array() += delta;
  Eigen::LDLT<MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) {
    fail(ErrorCode::SingularMatrix, "K + N*eps*I could not be factored");
  }
  // K and the shifted matrix commute, so K S^{-1} = S^{-1} K.
  return ldlt.solve(K);
}

// U^T K (K + delta I)^{-1} U, symmetrized; exactly zero for K = 0.
MatrixXd projected_smoother(const MatrixXd& K, double delta,
                            const MatrixXd& U) {
  if (K.isZero(0.0)) return MatrixXd::Zero(U.cols(), U.cols());
  MatrixXd shifted = K;
  shifted.diagonal().array() += delta;
  Eigen::LDLT<MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) {
    fail(ErrorCode::SingularMatrix, "K + N*eps*I could not be factored");
  }
  const MatrixXd KU = K * U;
  const MatrixXd solved = ldlt.solve(U);
  MatrixXd P = KU.transpose() * solved;
  return 0.5 * (P + P.transpose());
}

// beta^T Kx beta = 1 and sum_i (Kx beta)_i^3 >= 0 for every column.
void normalize_columns(const MatrixXd& Kx, MatrixXd& beta) {
  for (Index k = 0; k < beta.cols(); ++k) {
    auto col = beta.col(k);
    VectorXd proj = Kx * col;
    const double q = col.dot(proj);
    if (!(q > 0.0)) {
      fail(ErrorCode::RankDeficient,
           "component " + std::to_string(k) + " has no variance under Kx");
    }
    const double scale = 1.0 / std::sqrt(q);
    col *= scale;
    proj *= scale;
    if (proj.array().cube().sum() < 0.0) col = -col;
  }
}

}  // namespace

OperatorPair build_operator_pair(const GramBundle& g, double epsilon) {
  require(epsilon > 0.0, "epsilon must be positive");
  const Index n = g.size();
  const double delta = static_cast<double>(n) * epsilon;
  const MatrixXd Kx2 = g.Kx * g.Kx;
  OperatorPair op;
  op.A = smoother(g.Ky, delta) * Kx2 + g.Kx;
  op.B = smoother(g.Kd, delta) * Kx2 + g.Kx;
  return op;
}

EigPairs solve_dcm(const GramBundle& g, const DcmOptions& options) {
  options.validate();
  const Index n = g.size();
  require(n >= 2, "need at least two samples");
  require(g.Ky.rows() == n && g.Kd.rows() == n, "Gram sizes disagree");
  require(options.m <= n, "m (" + std::to_string(options.m) +
                              ") exceeds the number of samples (" +
                              std::to_string(n) + ")");

  const EigPairs kx = sym_eig(g.Kx);
  const double top = kx.values(0);
  if (!(top > 0.0)) fail(ErrorCode::RankDeficient, "input Gram is zero");
  const double tol = static_cast<double>(n) * DBL_EPSILON * top;
  Index r = 0;
  while (r < n && kx.values(r) > tol) ++r;

  Index m = options.m;
  if (m > r) {
    spdlog::warn("m = {} exceeds the rank {} of the input Gram; keeping {}", m,
                 r, r);
    m = r;
  }

  const MatrixXd U = kx.vectors.leftCols(r);
  const VectorXd s = kx.values.head(r);
  const double delta = static_cast<double>(n) * options.epsilon;
  const MatrixXd Py = projected_smoother(g.Ky, delta, U);
  const MatrixXd Pd = projected_smoother(g.Kd, delta, U);

  MatrixXd lhs, rhs;
  VectorXd back;  // coordinates -> beta scaling
  if (options.rhs_ridge == 0.0) {
    const VectorXd h = s.cwiseSqrt();
    lhs = h.asDiagonal() * Py * h.asDiagonal();
    rhs = h.asDiagonal() * Pd * h.asDiagonal();
    lhs.diagonal().array() += 1.0;
    rhs.diagonal().array() += 1.0;
    back = s.array().pow(-1.5);
  } else {
    const VectorXd h = s.array().pow(1.5);
    lhs = h.asDiagonal() * Py * h.asDiagonal();
    rhs = h.asDiagonal() * Pd * h.asDiagonal();
    lhs.diagonal() += s.cwiseAbs2();
    rhs.diagonal() += s.cwiseAbs2();
    rhs.diagonal().array() += options.rhs_ridge;
    back = s.cwiseSqrt().cwiseInverse();
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(
      lhs, rhs, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) {
    fail(ErrorCode::SingularMatrix, "reduced pencil is not definite");
  }
  // Ascending; read from the top.
  EigPairs out;
  out.values = ges.eigenvalues().tail(m).reverse();
  const MatrixXd coords = ges.eigenvectors().rightCols(m).rowwise().reverse();
  out.vectors = U * (back.asDiagonal() * coords);
  normalize_columns(g.Kx, out.vectors);
  return out;
}

namespace {

ProjectionModel dense_model(Algorithm algorithm, const KernelSpec& kx,
                            const DataSet& data, const VectorXd& row_means,
                            EigPairs pairs) {
  ProjectionModel model;
  model.algorithm = algorithm;
  model.kernel = kx;
  model.coefficients = std::move(pairs.vectors);
  model.eigenvalues = std::move(pairs.values);
  model.references = data.X;
  model.offsets = row_means;
  // H beta: centering the test column against the training rows.
  model.weights =
      model.coefficients.rowwise() - model.coefficients.colwise().mean();
  return model;
}

ProjectionModel fit_pencil(Algorithm algorithm, const DataSet& data,
                           const KernelSet& kernels, const DcmOptions& options,
                           bool use_domains) {
  data.validate();
  options.validate();
  const MatrixXd Kraw = gram(kernels.x, data.X);
  const VectorXd row_means = Kraw.rowwise().mean();
  GramBundle g;
  g.Kx = center_gram(Kraw);
  g.Ky = center_gram(gram(kernels.y, label_column(data)));
  g.Kd = use_domains ? center_gram(gram(kernels.d, data.domain_column()))
                     : MatrixXd::Zero(data.size(), data.size());
  g.centered = true;
  return dense_model(algorithm, kernels.x, data, row_means,
                     solve_dcm(g, options));
}

}  // namespace

ProjectionModel fit_dcm(const DataSet& data, const KernelSet& kernels,
                        const DcmOptions& options) {
  return fit_pencil(Algorithm::DCM, data, kernels, options, true);
}

ProjectionModel fit_coir(const DataSet& data, const KernelSet& kernels,
                         const DcmOptions& options) {
  return fit_pencil(Algorithm::COIR, data, kernels, options, false);
}

ProjectionModel fit_kpca(const DataSet& data, const KernelSpec& kernel_x,
                         Index m) {
  data.validate();
  const Index n = data.size();
  require(n >= 2, "need at least two samples");
  require(m >= 1 && m <= n, "m must be in 1.." + std::to_string(n));
  const MatrixXd Kraw = gram(kernel_x, data.X);
  const VectorXd row_means = Kraw.rowwise().mean();
  const MatrixXd Kx = center_gram(Kraw);
  const EigPairs eig = sym_eig(Kx);
  const double top = eig.values(0);
  if (!(top > 0.0)) fail(ErrorCode::RankDeficient, "input Gram is zero");
  const double tol = static_cast<double>(n) * DBL_EPSILON * top;
  Index r = 0;
  while (r < n && eig.values(r) > tol) ++r;
  if (m > r) {
    spdlog::warn("m = {} exceeds the rank {} of the input Gram; keeping {}", m,
                 r, r);
    m = r;
  }
  EigPairs pairs;
  pairs.values = eig.values.head(m);
  pairs.vectors =
      eig.vectors.leftCols(m) * pairs.values.cwiseSqrt().cwiseInverse().asDiagonal();
  normalize_columns(Kx, pairs.vectors);
  return dense_model(Algorithm::KPCA, kernel_x, data, row_means,
                     std::move(pairs));
}

}  // namespace dcm
