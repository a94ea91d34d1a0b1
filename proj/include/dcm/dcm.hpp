#pragma once

#include <optional>

#include "dcm/dataset.hpp"
#include "dcm/kernels.hpp"
#include "dcm/linalg.hpp"
#include "dcm/model.hpp"

namespace dcm {

struct DcmOptions {
  double epsilon = 1e-3;
  Index m = 2;
  /// rho in Kx A beta = lambda (Kx B + rho I) beta. Zero solves the pencil
  /// (A, B) exactly; N * epsilon reproduces the regularization built into
  /// the Nystrom solver.
  double rhs_ridge = 0.0;

  void validate() const;
};

/// A = Ky (Ky + N eps I)^{-1} Kx Kx + Kx and the same with Kd for B.
struct OperatorPair {
  MatrixXd A;
  MatrixXd B;
};

/// Input kernel RBF(gamma); Delta on discrete outputs, RBF on continuous
/// ones (gamma_y defaults to the median heuristic); Delta on domains.
KernelSet default_kernels(const DataSet& data, double gamma,
                          std::optional<double> gamma_y = std::nullopt);

/// Centered Gram matrices of a dataset.
GramBundle build_gram_bundle(const DataSet& data, const KernelSet& kernels);

OperatorPair build_operator_pair(const GramBundle& grams, double epsilon);

/// Top-m eigenpairs of A beta = lambda B beta (or its ridged variant, see
/// DcmOptions::rhs_ridge) over the range of Kx, with beta^T Kx beta = 1.
///
/// A and B share the null space of Kx, where the pencil is indeterminate, so
/// the problem is solved on range(Kx). With Kx = U S U^T there, the exact
/// pencil becomes the symmetric-definite pair
///   (S^1/2 U^T Py U S^1/2 + I) b = lambda (S^1/2 U^T Pd U S^1/2 + I) b,
/// Py = Ky (Ky + N eps I)^{-1}, and beta = U S^-3/2 b. Fewer than m columns
/// come back when Kx has rank below m.
EigPairs solve_dcm(const GramBundle& grams, const DcmOptions& options);

ProjectionModel fit_dcm(const DataSet& data, const KernelSet& kernels,
                        const DcmOptions& options);
/// DCM with the domain Gram zeroed.
ProjectionModel fit_coir(const DataSet& data, const KernelSet& kernels,
                         const DcmOptions& options);
/// Top-m eigenvectors of the centered input Gram.
ProjectionModel fit_kpca(const DataSet& data, const KernelSpec& kernel_x,
                         Index m);

}  // namespace dcm
