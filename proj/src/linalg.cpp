#include "dcm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace dcm {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kImagTol = 1e-6;

std::vector<Index> order_descending(const VectorXd& keys) {
  std::vector<Index> order(static_cast<std::size_t>(keys.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return keys(a) > keys(b); });
  return order;
}

}  // namespace

double asymmetry(const MatrixXd& S) {
  const double scale = S.norm();
  if (scale == 0.0) return 0.0;
  return (S - S.transpose()).norm() / scale;
}

EigPairs sym_eig(const MatrixXd& S) {
  require(S.rows() == S.cols(), "sym_eig needs a square matrix");
  if (asymmetry(S) > kSymmetryTol) {
    fail(ErrorCode::InvalidInput, "sym_eig input is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(S);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::InvalidInput, "symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order; reversing keeps ties in a fixed order.
  EigPairs out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

EigPairs gen_eig(const MatrixXd& A, const MatrixXd& B, Index m, double ridge) {
  const Index n = A.rows();
  require(A.cols() == n && B.rows() == n && B.cols() == n,
          "gen_eig needs square A and B of equal size");
  require(m >= 1 && m <= n, "gen_eig needs 1 <= m <= N");

  MatrixXd rhs = B;
  rhs.diagonal().array() += ridge;
  Eigen::PartialPivLU<MatrixXd> lu(rhs);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream msg;
    msg << "B + ridge*I is numerically singular (rcond " << rcond
        << ", ridge " << ridge << ")";
    fail(ErrorCode::SingularMatrix, msg.str());
  }
  const MatrixXd reduced = lu.solve(A);

  Eigen::EigenSolver<MatrixXd> solver(reduced, true);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::ComplexSpectrum, "nonsymmetric eigensolver did not converge");
  }
  const Eigen::VectorXcd& values = solver.eigenvalues();
  const VectorXd real = values.real();
  const auto order = order_descending(real);

  EigPairs out;
  out.values.resize(m);
  out.vectors.resize(n, m);
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  for (Index k = 0; k < m; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    const std::complex<double> lambda = values(src);
    if (std::abs(lambda.imag()) > kImagTol * (1.0 + std::abs(lambda.real()))) {
      std::ostringstream msg;
      msg << "retained eigenvalue " << k << " is complex (" << lambda.real()
          << " + " << lambda.imag() << "i)";
      fail(ErrorCode::ComplexSpectrum, msg.str());
    }
    out.values(k) = lambda.real();
    VectorXd v = vectors.col(src).real();
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    out.vectors.col(k) = v;
  }
  return out;
}

SvdResult thin_svd(const MatrixXd& C) {
  require(C.rows() >= C.cols(), "thin_svd expects a tall matrix (N >= M)");
  Eigen::BDCSVD<MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

MatrixXd ridge_inverse(const MatrixXd& W, double jitter) {
  require(W.rows() == W.cols(), "ridge_inverse needs a square matrix");
  if (asymmetry(W) > kSymmetryTol) {
    fail(ErrorCode::InvalidInput, "ridge_inverse input is not symmetric");
  }
  MatrixXd shifted = W;
  shifted.diagonal().array() += jitter;
  Eigen::PartialPivLU<MatrixXd> lu(shifted);
  if (!(lu.rcond() > 1e-14)) {
    fail(ErrorCode::SingularMatrix,
         "landmark block is singular even after jitter " +
             std::to_string(jitter));
  }
  return lu.inverse();
}

MatrixXd psd_pseudo_inverse(const MatrixXd& W, double rel_tol, Index* rank) {
  const EigPairs eig = sym_eig(W);
  const double top = eig.values.size() > 0 ? eig.values(0) : 0.0;
  Index r = 0;
  if (top > 0.0) {
    while (r < eig.values.size() && eig.values(r) > rel_tol * top) ++r;
  }
  if (rank != nullptr) *rank = r;
  if (r == 0) return MatrixXd::Zero(W.rows(), W.cols());
  const auto V = eig.vectors.leftCols(r);
  return V * eig.values.head(r).cwiseInverse().asDiagonal() * V.transpose();
}

namespace {

// Basis of span(B) that is orthonormal under G.
MatrixXd metric_orthonormalize(const MatrixXd& B, const MatrixXd& G) {
  MatrixXd gram = B.transpose() * G * B;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::LLT<MatrixXd> llt(gram);
  const double scale = gram.diagonal().cwiseAbs().maxCoeff();
  bool ok = llt.info() == Eigen::Success && scale > 0.0;
  if (ok) {
    const VectorXd d = llt.matrixLLT().diagonal();
    ok = d.minCoeff() > 1e-12 * std::sqrt(scale);
  }
  if (!ok) {
    fail(ErrorCode::RankDeficient,
         "columns are linearly dependent under the metric");
  }
  // B L^{-T}
  return llt.matrixU().solve<Eigen::OnTheRight>(B);
}

}  // namespace

VectorXd principal_angles(const MatrixXd& B1, const MatrixXd& B2,
                          const MatrixXd& G) {
  require(B1.rows() == G.rows() && B2.rows() == G.rows() &&
              G.rows() == G.cols(),
          "principal_angles shape mismatch");
  require(B1.cols() >= 1 && B1.cols() == B2.cols(),
          "principal_angles needs bases with the same number of columns");
  const MatrixXd Q1 = metric_orthonormalize(B1, G);
  const MatrixXd Q2 = metric_orthonormalize(B2, G);
  const MatrixXd GQ2 = G * Q2;
  const MatrixXd cross = Q1.transpose() * GQ2;

  // Cosines lose resolution near zero angle, so small angles come from the
  // sines of the residual of Q2 after projecting onto span(Q1).
  Eigen::JacobiSVD<MatrixXd> svd(cross);
  const VectorXd cosines = svd.singularValues();  // descending
  const MatrixXd residual = Q2 - Q1 * cross;
  MatrixXd rgr = residual.transpose() * G * residual;
  rgr = 0.5 * (rgr + rgr.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(rgr, Eigen::EigenvaluesOnly);
  const VectorXd sines = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // asc

  const Index k = cosines.size();
  VectorXd angles(k);
  for (Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    const double s = std::clamp(sines(i), 0.0, 1.0);
    angles(i) = c > std::sqrt(0.5) ? std::asin(s) : std::acos(c);
  }
  return angles;
}

double scaled_residual(const MatrixXd& A, const MatrixXd& B,
                       const Eigen::Ref<const VectorXd>& x, double lambda) {
  const double denom = A.norm() + std::abs(lambda) * B.norm();
  const double num = (A * x - lambda * (B * x)).norm();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace dcm
