#pragma once

#include <cstdint>
#include <vector>

#include "dcm/dataset.hpp"
#include "dcm/kernels.hpp"
#include "dcm/linalg.hpp"
#include "dcm/model.hpp"

namespace dcm {

/// How the landmark block W is inverted.
enum class LandmarkInverse {
  /// Eigen pseudo-inverse dropping eigenvalues below 1e-10 * max.
  Pseudo,
  /// (W + jitter I)^{-1} with jitter = 1e-10 * trace(W) / M.
  Jitter,
};

struct FastOptions {
  double epsilon = 1e-3;
  Index m = 2;
  Index M = 100;
  std::uint64_t seed = 0;
  LandmarkInverse inverse = LandmarkInverse::Pseudo;

  void validate(Index n) const;
};

/// M distinct indices from 0..N-1 (partial Fisher-Yates, seeded).
std::vector<Index> sample_landmarks(Index n, Index M, std::uint64_t seed);

/// Low-rank factors of one centered Gram: K ~ C Winv C^T.
struct Sketch {
  MatrixXd C;        // H K[:, L], N x M
  MatrixXd Winv;     // inverse of K[L, L]
  VectorXd col_mean; // column means of K[:, L] before centering
};

Sketch build_sketch(const KernelSpec& spec, const MatrixXd& items,
                    const std::vector<Index>& landmarks,
                    LandmarkInverse inverse = LandmarkInverse::Pseudo);

/// M x M operator whose leading eigenvectors give the projection in
/// landmark coordinates. Pass `d == nullptr` to drop the domain term.
MatrixXd compute_omega(const Sketch& x, const Sketch& y, const Sketch* d,
                       double epsilon);

/// Top-m eigenpairs of Omega restricted to range(Cx^T); vectors are N x m
/// training coefficients normalized by beta^T Cx Winv Cx^T beta = 1.
EigPairs fast_eig(const Sketch& x, const MatrixXd& omega, Index m);

ProjectionModel fit_fastdcm(const DataSet& data, const KernelSet& kernels,
                            const FastOptions& options);
ProjectionModel fit_fastcoir(const DataSet& data, const KernelSet& kernels,
                             const FastOptions& options);

}  // namespace dcm
