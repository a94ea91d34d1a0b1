#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dcm/linalg.hpp"
#include "helpers.hpp"

using namespace dcm;

TEST_SUITE("linalg") {

TEST_CASE("sym_eig examples") {
  CHECK(sym_eig(MatrixXd::Identity(3, 3)).values == VectorXd::Ones(3));

  const MatrixXd D = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const EigPairs e = sym_eig(D);
  CHECK(e.values == Eigen::Vector3d(3, 2, 1));
  CHECK(std::abs(e.vectors(0, 0)) == 1.0);
  CHECK(std::abs(e.vectors(2, 1)) == 1.0);
  CHECK(std::abs(e.vectors(1, 2)) == 1.0);

  SplitMix64 rng(1, 0);
  const MatrixXd A = testing::gaussian(5, 5, rng);
  const MatrixXd S = A + A.transpose();
  const EigPairs r = sym_eig(S);
  CHECK((r.vectors * r.values.asDiagonal() * r.vectors.transpose() - S).norm() <=
        1e-10 * S.norm());
  CHECK((r.vectors.transpose() * r.vectors - MatrixXd::Identity(5, 5)).norm() <
        1e-12);
  for (Index i = 1; i < 5; ++i) CHECK(r.values(i - 1) >= r.values(i));

  CHECK_THROWS_AS(sym_eig(A), Error);
}

TEST_CASE("gen_eig examples") {
  const EigPairs a = gen_eig(2.0 * MatrixXd::Identity(3, 3),
                             MatrixXd::Identity(3, 3), 1);
  CHECK(a.values(0) == doctest::Approx(2.0));
  CHECK(a.vectors.col(0).norm() == doctest::Approx(1.0));

  const MatrixXd A = Eigen::Vector2d(5, 1).asDiagonal();
  const EigPairs b = gen_eig(A, MatrixXd::Identity(2, 2), 1);
  CHECK(b.values(0) == doctest::Approx(5.0));
  CHECK(std::abs(b.vectors(0, 0)) == doctest::Approx(1.0));

  SplitMix64 rng(2, 0);
  const MatrixXd P = testing::random_spd(8, rng);
  const MatrixXd Q = testing::random_spd(8, rng);
  const EigPairs c = gen_eig(P, Q, 8);
  for (Index k = 0; k < 8; ++k) {
    CHECK(scaled_residual(P, Q, c.vectors.col(k), c.values(k)) <= 1e-8);
    if (k > 0) CHECK(c.values(k - 1) >= c.values(k));
  }
}

TEST_CASE("gen_eig errors") {
  MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK_THROWS_AS(gen_eig(rot, MatrixXd::Identity(2, 2), 1), Error);
  try {
    gen_eig(rot, MatrixXd::Identity(2, 2), 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ComplexSpectrum);
  }
  try {
    gen_eig(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), 1);
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
  // The ridge rescues a singular right-hand side.
  CHECK_NOTHROW(gen_eig(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), 1, 0.1));
  CHECK_THROWS_AS(gen_eig(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2), 3),
                  Error);
}

TEST_CASE("gen_eig agrees with sym_eig on symmetric input") {
  SplitMix64 rng(3, 0);
  const MatrixXd G = testing::gaussian(7, 7, rng);
  const MatrixXd S = G + G.transpose();
  const EigPairs g = gen_eig(S, MatrixXd::Identity(7, 7), 3);
  const EigPairs s = sym_eig(S);
  CHECK((g.values - s.values.head(3)).cwiseAbs().maxCoeff() < 1e-8);
  const VectorXd angles = principal_angles(g.vectors, s.vectors.leftCols(3),
                                           MatrixXd::Identity(7, 7));
  CHECK(angles.maxCoeff() < 1e-8);
}

TEST_CASE("gen_eig is invariant to left multiplication") {
  SplitMix64 rng(4, 0);
  const MatrixXd A = testing::random_spd(6, rng);
  const MatrixXd B = testing::random_spd(6, rng);
  const MatrixXd P = testing::gaussian(6, 6, rng) + 3.0 * MatrixXd::Identity(6, 6);
  const EigPairs a = gen_eig(A, B, 4);
  const EigPairs b = gen_eig(P * A, P * B, 4);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("thin_svd examples") {
  MatrixXd C = MatrixXd::Zero(5, 3);
  C.topRows(3) = MatrixXd::Identity(3, 3);
  CHECK((thin_svd(C).singular_values - VectorXd::Ones(3)).norm() < 1e-15);

  SplitMix64 rng(5, 0);
  const VectorXd u = testing::gaussian(6, 1, rng);
  const VectorXd v = testing::gaussian(3, 1, rng);
  const SvdResult r1 = thin_svd(u * v.transpose());
  CHECK(r1.singular_values(0) > 1e-3);
  CHECK(r1.singular_values(1) < 1e-12 * r1.singular_values(0));

  const MatrixXd R = testing::gaussian(6, 3, rng);
  const SvdResult r = thin_svd(R);
  CHECK((r.U * r.singular_values.asDiagonal() * r.V.transpose() - R).norm() <=
        1e-10 * R.norm());
  for (Index i = 1; i < 3; ++i) {
    CHECK(r.singular_values(i - 1) >= r.singular_values(i));
  }
  const Eigen::JacobiSVD<MatrixXd> t(R.transpose());
  CHECK((t.singularValues() - r.singular_values).norm() < 1e-12);
  CHECK_THROWS_AS(thin_svd(R.transpose()), Error);
}

TEST_CASE("ridge_inverse examples") {
  CHECK(ridge_inverse(MatrixXd::Identity(3, 3), 0.0) == MatrixXd::Identity(3, 3));
  const MatrixXd W = Eigen::Vector2d(2, 4).asDiagonal();
  CHECK(ridge_inverse(W, 0.0) == MatrixXd(Eigen::Vector2d(0.5, 0.25).asDiagonal()));

  SplitMix64 rng(6, 0);
  const MatrixXd S = testing::random_spd(4, rng);
  CHECK((S * ridge_inverse(S, 1e-10) - MatrixXd::Identity(4, 4)).norm() <= 1e-6);

  try {
    ridge_inverse(MatrixXd::Zero(3, 3), 0.0);
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
}

TEST_CASE("psd_pseudo_inverse drops the null space") {
  const MatrixXd W = MatrixXd::Ones(3, 3);  // rank one
  Index rank = 0;
  const MatrixXd Winv = psd_pseudo_inverse(W, 1e-10, &rank);
  CHECK(rank == 1);
  CHECK((W * Winv * W - W).norm() < 1e-12);
  CHECK((Winv - MatrixXd::Ones(3, 3) / 9.0).norm() < 1e-12);
}

TEST_CASE("principal_angles examples") {
  const MatrixXd I2 = MatrixXd::Identity(2, 2);
  SplitMix64 rng(7, 0);
  const MatrixXd B = testing::gaussian(5, 2, rng);
  CHECK(principal_angles(B, B, MatrixXd::Identity(5, 5)).maxCoeff() < 1e-12);
  // Same span, different basis.
  const MatrixXd mix = (MatrixXd(2, 2) << 2, 1, -1, 3).finished();
  CHECK(principal_angles(B, B * mix, MatrixXd::Identity(5, 5)).maxCoeff() <
        1e-12);

  const MatrixXd e1 = I2.col(0), e2 = I2.col(1);
  CHECK(principal_angles(e1, e2, I2)(0) ==
        doctest::Approx(std::numbers::pi / 2));
  const MatrixXd diag = e1 + e2;
  CHECK(principal_angles(diag, e1, I2)(0) ==
        doctest::Approx(std::numbers::pi / 4));

  // Angles live in the metric: under G = diag(1, 0) every direction with a
  // nonzero first coordinate spans the same line.
  const MatrixXd G = Eigen::Vector2d(1, 0).asDiagonal();
  CHECK(principal_angles(diag, e1, G)(0) < 1e-12);

  try {
    principal_angles(e2, e1, G);
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficient);
  }
}

TEST_CASE("small principal angles keep relative accuracy") {
  MatrixXd a(3, 1), b(3, 1);
  a << 1, 0, 0;
  b << 1, 1e-9, 0;
  const double angle = principal_angles(a, b, MatrixXd::Identity(3, 3))(0);
  CHECK(angle == doctest::Approx(1e-9).epsilon(1e-6));
}

}
