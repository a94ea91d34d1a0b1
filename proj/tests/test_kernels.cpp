#include <doctest.h>

#include <cmath>

#include "dcm/kernels.hpp"
#include "dcm/linalg.hpp"
#include "helpers.hpp"

using namespace dcm;

TEST_SUITE("kernels") {

TEST_CASE("eval_kernel examples") {
  const std::vector<double> a{0.3, -1.2}, b{0.0, 0.0}, c{1.0, 1.0};
  CHECK(eval_kernel(KernelSpec::rbf(2.0), a, a) == 1.0);
  CHECK(eval_kernel(KernelSpec::delta(), 3.0, 7.0) == 0.0);
  CHECK(eval_kernel(KernelSpec::delta(), 3.0, 3.0) == 1.0);
  CHECK(eval_kernel(KernelSpec::rbf(0.5), b, c) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  const std::vector<double> short_vec{1.0};
  CHECK_THROWS_AS(eval_kernel(KernelSpec::rbf(1.0), a, short_vec), Error);
}

TEST_CASE("rbf needs positive gamma") {
  CHECK_THROWS_AS(KernelSpec::rbf(0.0), Error);
  CHECK_THROWS_AS(KernelSpec::rbf(-1.0), Error);
  CHECK_NOTHROW(KernelSpec::delta().validate());
}

TEST_CASE("gram examples") {
  CHECK(gram(KernelSpec::rbf(1.0), MatrixXd::Constant(1, 2, 4.0)) ==
        MatrixXd::Ones(1, 1));
  MatrixXd labels(3, 1);
  labels << 1, 1, 2;
  MatrixXd expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  CHECK(gram(KernelSpec::delta(), labels) == expected);

  MatrixXd pts(2, 2);
  pts << 0, 0, 1, 1;
  const MatrixXd K = gram(KernelSpec::rbf(0.5), pts);
  CHECK(K(0, 0) == 1.0);
  CHECK(K(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(K(1, 0) == K(0, 1));
}

TEST_CASE("gram is symmetric with unit diagonal") {
  SplitMix64 rng(5, 0);
  const MatrixXd X = testing::gaussian(25, 4, rng);
  for (const KernelSpec& spec : {KernelSpec::rbf(0.3), KernelSpec::delta()}) {
    const MatrixXd K = gram(spec, X);
    CHECK(K == K.transpose());
    CHECK(K.diagonal() == VectorXd::Ones(25));
  }
}

TEST_CASE("cross_gram examples") {
  SplitMix64 rng(1, 0);
  const MatrixXd X = testing::gaussian(6, 3, rng);
  const KernelSpec spec = KernelSpec::rbf(0.7);
  CHECK((cross_gram(spec, X, X) - gram(spec, X)).norm() == 0.0);

  const MatrixXd z = X.row(4);
  const MatrixXd col = cross_gram(spec, X, z);
  CHECK(col(4, 0) == 1.0);

  MatrixXd x0(1, 1), zs(2, 1);
  x0 << 0;
  zs << 1, 2;
  const MatrixXd k = cross_gram(KernelSpec::rbf(1.0), x0, zs);
  CHECK(k(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(k(0, 1) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));

  CHECK_THROWS_AS(cross_gram(spec, X, MatrixXd::Zero(2, 2)), Error);
}

TEST_CASE("center_gram examples") {
  CHECK(center_gram(MatrixXd::Ones(4, 4)).norm() == 0.0);
  MatrixXd expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK((center_gram(MatrixXd::Identity(2, 2)) - expected).norm() < 1e-15);

  SplitMix64 rng(2, 0);
  const MatrixXd Kc = center_gram(gram(KernelSpec::rbf(0.2),
                                       testing::gaussian(30, 3, rng)));
  CHECK((center_gram(Kc) - Kc).norm() < 1e-12);
  CHECK(Kc.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(Kc.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("centered RBF Grams are PSD") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SplitMix64 rng(seed, 1);
    const MatrixXd Kc = center_gram(gram(KernelSpec::rbf(0.1 + 0.4 * seed),
                                         testing::gaussian(40, 5, rng)));
    const EigPairs e = sym_eig(Kc);
    CHECK(e.values.minCoeff() >= -1e-10 * Kc.norm());
  }
}

TEST_CASE("center_cross examples") {
  SplitMix64 rng(3, 0);
  const MatrixXd X = testing::gaussian(8, 2, rng);
  const KernelSpec spec = KernelSpec::rbf(0.5);
  const MatrixXd K = gram(spec, X);
  const MatrixXd Kc = center_gram(K);
  // Training points projected as test points.
  CHECK((center_cross(K, K) - Kc).norm() < 1e-12);
  CHECK((center_cross(K.col(3), K) - Kc.col(3)).norm() < 1e-12);

  CHECK(center_cross(MatrixXd::Ones(5, 1), MatrixXd::Ones(5, 5)).norm() == 0.0);
  CHECK_THROWS_AS(center_cross(MatrixXd::Ones(4, 1), K), Error);
}

TEST_CASE("center_cross matches embedding the test point") {
  // Centering the (N+1)-point Gram and reading its off-diagonal block uses
  // the test point's own statistics, so the oracle centers with training
  // means only: explicit feature maps make that exact for a linear kernel.
  SplitMix64 rng(4, 0);
  const MatrixXd X = testing::gaussian(3, 2, rng);
  const MatrixXd z = testing::gaussian(1, 2, rng);
  const MatrixXd K = X * X.transpose();
  const MatrixXd Kz = X * z.transpose();
  const MatrixXd Xc = X.rowwise() - X.colwise().mean();
  const MatrixXd zc = z.rowwise() - X.colwise().mean();
  CHECK((center_cross(Kz, K) - Xc * zc.transpose()).norm() < 1e-12);
}

TEST_CASE("delta Gram is permutation equivariant") {
  MatrixXd labels(6, 1);
  labels << 1, 2, 1, 3, 2, 1;
  const auto perm = testing::random_permutation(6, 11);
  MatrixXd permuted(6, 1);
  Eigen::PermutationMatrix<Eigen::Dynamic> P(6);
  for (Index i = 0; i < 6; ++i) {
    permuted(i, 0) = labels(perm[std::size_t(i)], 0);
    P.indices()(i) = static_cast<int>(perm[std::size_t(i)]);
  }
  const MatrixXd K = gram(KernelSpec::delta(), labels);
  // Row i of the permuted set is row perm[i] of the original.
  CHECK(gram(KernelSpec::delta(), permuted) ==
        P.transpose() * K * P);
}

TEST_CASE("median gamma") {
  VectorXd y(4);
  y << -1, 2, -3, 4;
  CHECK(median_gamma(y) == doctest::Approx(1.0 / (2 * 2.5 * 2.5)));
  CHECK_THROWS_AS(median_gamma(VectorXd::Zero(3)), Error);
}

}
