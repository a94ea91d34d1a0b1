#include "dcm/nystrom.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/random/uniform_int_distribution.hpp>

#include "dcm/random.hpp"

namespace dcm {

namespace {

constexpr double kPinvTol = 1e-10;
constexpr double kRcondTol = 1e-14;

}  // namespace

void FastOptions::validate(Index n) const {
  require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be positive");
  require(M >= 1 && M <= n, "landmark count M must be in 1.." +
                                std::to_string(n) + ", got " +
                                std::to_string(M));
  require(m >= 1 && m <= M, "m must be in 1..M (M = " + std::to_string(M) +
                                "), got " + std::to_string(m));
}

std::vector<Index> sample_landmarks(Index n, Index M, std::uint64_t seed) {
  require(M >= 1 && M <= n, "landmark count must be in 1..N");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  SplitMix64 rng(seed, 0);
  for (Index i = 0; i < M; ++i) {
    boost::random::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[static_cast<std::size_t>(pick(rng))]);
  }
  perm.resize(static_cast<std::size_t>(M));
  return perm;
}

Sketch build_sketch(const KernelSpec& spec, const MatrixXd& items,
                    const std::vector<Index>& landmarks,
                    LandmarkInverse inverse) {
  const Index M = static_cast<Index>(landmarks.size());
  MatrixXd marks(M, items.cols());
  for (Index j = 0; j < M; ++j) {
    marks.row(j) = items.row(landmarks[static_cast<std::size_t>(j)]);
  }
  const MatrixXd raw = cross_gram(spec, items, marks);
  MatrixXd W(M, M);
  for (Index j = 0; j < M; ++j) {
    W.row(j) = raw.row(landmarks[static_cast<std::size_t>(j)]);
  }
  W = 0.5 * (W + W.transpose());

  Sketch s;
  s.col_mean = raw.colwise().mean().transpose();
  s.C = raw.rowwise() - s.col_mean.transpose();
  if (inverse == LandmarkInverse::Pseudo) {
    s.Winv = psd_pseudo_inverse(W, kPinvTol);
  } else {
    s.Winv = ridge_inverse(W, kPinvTol * W.trace() / static_cast<double>(M));
  }
  return s;
}

namespace {

// (S W + delta I)^{-1} with an rcond check; `what` names the factor.
MatrixXd shifted_inverse(const MatrixXd& SW, double delta, const char* what) {
  MatrixXd shifted = SW;
  shifted.diagonal().array() += delta;
  Eigen::PartialPivLU<MatrixXd> lu(shifted);
  if (!(lu.rcond() > kRcondTol)) {
    std::ostringstream msg;
    msg << what << " is numerically singular (rcond " << lu.rcond() << ")";
    fail(ErrorCode::SingularMatrix, msg.str());
  }
  return lu.inverse();
}

}  // namespace

MatrixXd compute_omega(const Sketch& x, const Sketch& y, const Sketch* d,
                       double epsilon) {
  const Index n = x.C.rows();
  const double delta = static_cast<double>(n) * epsilon;
  const MatrixXd& Wx = x.Winv;

  const MatrixXd Sxx = x.C.transpose() * x.C;
  const MatrixXd WxSxx = Wx * Sxx;
  const MatrixXd WxSxxWx = WxSxx * Wx;

  // Output side: Wx Sxy Wy (Syy Wy + dI)^{-1} Syx Wx Sxx Wx + Wx Sxx Wx
  const MatrixXd Sxy = x.C.transpose() * y.C;
  const MatrixXd Syy = y.C.transpose() * y.C;
  const MatrixXd smooth_y =
      y.Winv * shifted_inverse(Syy * y.Winv, delta, "Syy Wy + N eps I");
  const MatrixXd right =
      Wx * Sxy * smooth_y * Sxy.transpose() * WxSxxWx + WxSxxWx;

  // Domain side: Wx Sxd Wd (Sdd Wd + dI)^{-1} Sdx Wx Sxx Wx Sxx
  //              + Wx Sxx Wx Sxx + dI
  MatrixXd left = WxSxxWx * Sxx;
  if (d != nullptr) {
    const MatrixXd Sxd = x.C.transpose() * d->C;
    const MatrixXd Sdd = d->C.transpose() * d->C;
    const MatrixXd smooth_d =
        d->Winv * shifted_inverse(Sdd * d->Winv, delta, "Sdd Wd + N eps I");
    left += Wx * Sxd * smooth_d * Sxd.transpose() * WxSxxWx * Sxx;
  }
  left.diagonal().array() += delta;

  Eigen::PartialPivLU<MatrixXd> lu(left);
  if (!(lu.rcond() > kRcondTol)) {
    std::ostringstream msg;
    msg << "domain-side operator of the landmark problem is numerically "
           "singular (rcond "
        << lu.rcond() << ")";
    fail(ErrorCode::SingularMatrix, msg.str());
  }
  return lu.solve(right);
}

EigPairs fast_eig(const Sketch& x, const MatrixXd& omega, Index m) {
  const MatrixXd Sxx = x.C.transpose() * x.C;
  const EigPairs sx = sym_eig(0.5 * (Sxx + Sxx.transpose()));
  const double top = sx.values(0);
  Index r = 0;
  if (top > 0.0) {
    while (r < sx.size() && sx.values(r) >= kPinvTol * top) ++r;
  }
  if (r < m) {
    fail(ErrorCode::RankDeficient,
         "landmark sketch has rank " + std::to_string(r) + " < m = " +
             std::to_string(m));
  }
  const MatrixXd V = sx.vectors.leftCols(r);
  const MatrixXd T =
      V.transpose() * omega * V * sx.values.head(r).asDiagonal();
  EigPairs reduced = gen_eig(T, MatrixXd::Identity(r, r), m);

  EigPairs out;
  out.values = reduced.values;
  out.vectors = x.C * (V * reduced.vectors);
  const MatrixXd q = x.C.transpose() * out.vectors;
  const MatrixXd Wq = x.Winv * q;
  for (Index k = 0; k < m; ++k) {
    const double norm = q.col(k).dot(Wq.col(k));
    if (!(norm > 0.0)) {
      fail(ErrorCode::RankDeficient,
           "component " + std::to_string(k) + " has no variance in the sketch");
    }
    const double scale = 1.0 / std::sqrt(norm);
    out.vectors.col(k) *= scale;
    // Same sign rule as the dense path, on the approximate projection.
    const VectorXd proj = x.C * (Wq.col(k) * scale);
    if (proj.array().cube().sum() < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

namespace {

ProjectionModel fit_fast(Algorithm algorithm, const DataSet& data,
                         const KernelSet& kernels, const FastOptions& options,
                         bool use_domains) {
  data.validate();
  options.validate(data.size());
  const auto landmarks =
      sample_landmarks(data.size(), options.M, options.seed);
  const Sketch x = build_sketch(kernels.x, data.X, landmarks, options.inverse);
  const Sketch y =
      build_sketch(kernels.y, MatrixXd(data.y), landmarks, options.inverse);
  MatrixXd omega;
  if (use_domains) {
    const Sketch d = build_sketch(kernels.d, data.domain_column(), landmarks,
                                  options.inverse);
    omega = compute_omega(x, y, &d, options.epsilon);
  } else {
    omega = compute_omega(x, y, nullptr, options.epsilon);
  }
  EigPairs pairs = fast_eig(x, omega, options.m);

  ProjectionModel model;
  model.algorithm = algorithm;
  model.kernel = kernels.x;
  model.references.resize(options.M, data.dim());
  for (Index j = 0; j < options.M; ++j) {
    model.references.row(j) =
        data.X.row(landmarks[static_cast<std::size_t>(j)]);
  }
  model.offsets = x.col_mean;
  // A test column k(z) is approximated through the landmarks as
  // C_z = k_L(z) - colmean, so beta^T Cx Winv C_z^T.
  model.weights = x.Winv * (x.C.transpose() * pairs.vectors);
  model.coefficients = std::move(pairs.vectors);
  model.eigenvalues = std::move(pairs.values);
  model.landmarks = landmarks;
  return model;
}

}  // namespace

ProjectionModel fit_fastdcm(const DataSet& data, const KernelSet& kernels,
                            const FastOptions& options) {
  return fit_fast(Algorithm::FastDCM, data, kernels, options, true);
}

ProjectionModel fit_fastcoir(const DataSet& data, const KernelSet& kernels,
                             const FastOptions& options) {
  return fit_fast(Algorithm::FastCOIR, data, kernels, options, false);
}

}  // namespace dcm
