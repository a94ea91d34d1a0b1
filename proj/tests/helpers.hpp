#pragma once

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "dcm/dataset.hpp"
#include "dcm/kernels.hpp"
#include "dcm/random.hpp"

namespace testing {

using dcm::Index;
using dcm::MatrixXd;
using dcm::VectorXd;

inline MatrixXd gaussian(Index rows, Index cols, dcm::SplitMix64& rng) {
  boost::random::normal_distribution<double> normal;
  MatrixXd M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = normal(rng);
  return M;
}

inline MatrixXd random_spd(Index n, dcm::SplitMix64& rng) {
  const MatrixXd A = gaussian(n, n, rng);
  return A * A.transpose() + MatrixXd::Identity(n, n);
}

// Small labelled multi-domain set with +-1 labels tied to the first input.
inline dcm::DataSet toy(Index n, int domains, std::uint64_t seed,
                        Index dim = 3) {
  dcm::SplitMix64 rng(seed, 99);
  boost::random::uniform_int_distribution<int> pick(1, domains);
  dcm::DataSet data;
  data.X = gaussian(n, dim, rng);
  data.y.resize(n);
  data.d.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    data.d[static_cast<std::size_t>(i)] = i < domains ? int(i) + 1 : pick(rng);
    data.X(i, 1) += 0.5 * data.d[static_cast<std::size_t>(i)];
    data.y(i) = data.X(i, 0) + 0.3 * data.X(i, 2) >= 0.0 ? 1.0 : -1.0;
  }
  return data;
}

// Same inputs with a continuous output.
inline dcm::DataSet toy_regression(Index n, int domains, std::uint64_t seed) {
  dcm::DataSet data = toy(n, domains, seed);
  for (Index i = 0; i < n; ++i) {
    data.y(i) = data.X(i, 0) + 0.5 * std::sin(data.X(i, 2));
  }
  data.label_kind = dcm::LabelKind::Continuous;
  return data;
}

inline std::vector<Index> random_permutation(Index n, std::uint64_t seed) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  dcm::SplitMix64 rng(seed, 7);
  for (Index i = n - 1; i > 0; --i) {
    boost::random::uniform_int_distribution<Index> pick(0, i);
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(pick(rng))]);
  }
  return perm;
}

}  // namespace testing
