#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dcm/kernels.hpp"

namespace dcm {

enum class Algorithm { DCM, COIR, KPCA, FastDCM, FastCOIR };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
bool is_fast(Algorithm algorithm);

/// A fitted projection.
///
/// `coefficients` holds one column per component over the N training
/// samples, scaled so that beta^T Kx beta = 1 under the centered training
/// Gram (or its Nystrom approximation for the fast algorithms).
///
/// New points are projected through `references` (the training inputs, or
/// the landmarks for the fast algorithms): with k(z) the kernel column of z
/// against the references, the projection is weights^T (k(z) - offsets).
struct ProjectionModel {
  Algorithm algorithm = Algorithm::DCM;
  KernelSpec kernel;
  MatrixXd coefficients;
  VectorXd eigenvalues;
  MatrixXd references;
  VectorXd offsets;
  MatrixXd weights;
  std::vector<Index> landmarks;

  Index components() const { return eigenvalues.size(); }
  Index training_size() const { return coefficients.rows(); }
  Index input_dim() const { return references.cols(); }

  void validate() const;
};

/// Projects the rows of Z; returns components() x Z.rows().
MatrixXd transform(const ProjectionModel& model, const MatrixXd& Z);

// Binary container: "DCMM" magic, uint32 version, then little-endian
// fields; see model.cpp for the layout.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const ProjectionModel& model);
ProjectionModel deserialize_model(std::string_view bytes);
void save_model(const std::filesystem::path& path, const ProjectionModel& model);
ProjectionModel load_model(const std::filesystem::path& path);

}  // namespace dcm
