#pragma once

#include <Eigen/Dense>

#include "dcm/error.hpp"

namespace dcm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Real eigenpairs sorted by value, largest first; column i of `vectors`
/// belongs to `values(i)`.
struct EigPairs {
  VectorXd values;
  MatrixXd vectors;

  Index size() const { return values.size(); }
};

struct SvdResult {
  MatrixXd U;
  VectorXd singular_values;
  MatrixXd V;
};

/// Relative symmetry defect |S - S^T|_F / |S|_F.
double asymmetry(const MatrixXd& S);

/// Full eigendecomposition of a symmetric matrix. Throws InvalidInput when
/// the relative asymmetry exceeds 1e-8.
EigPairs sym_eig(const MatrixXd& S);

/// Top-m eigenpairs (by real part) of (B + ridge I)^{-1} A.
///
/// Retained eigenvalues must be real up to |Im| <= 1e-6 (1 + |Re|), otherwise
/// ComplexSpectrum is thrown. Returned vectors are the real parts of the
/// eigenvectors, renormalized to unit length. Equal eigenvalues keep the
/// solver's order. SingularMatrix is thrown when B + ridge I cannot be
/// factored.
EigPairs gen_eig(const MatrixXd& A, const MatrixXd& B, Index m,
                 double ridge = 0.0);

/// Thin SVD of a tall matrix, C = U diag(s) V^T with s non-increasing.
SvdResult thin_svd(const MatrixXd& C);

/// (W + jitter I)^{-1} for symmetric W.
MatrixXd ridge_inverse(const MatrixXd& W, double jitter);

/// Pseudo-inverse of a symmetric PSD matrix keeping eigenvalues above
/// rel_tol * max eigenvalue. Returns the retained rank through `rank`.
MatrixXd psd_pseudo_inverse(const MatrixXd& W, double rel_tol,
                            Index* rank = nullptr);

/// Principal angles (radians, ascending) between span(B1) and span(B2)
/// under the inner product <u, v> = u^T G v.
VectorXd principal_angles(const MatrixXd& B1, const MatrixXd& B2,
                          const MatrixXd& G);

/// |A x - lambda B x| / (|A|_F + |lambda| |B|_F).
double scaled_residual(const MatrixXd& A, const MatrixXd& B,
                       const Eigen::Ref<const VectorXd>& x, double lambda);

}  // namespace dcm
