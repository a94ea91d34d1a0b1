#include "dcm/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dcm {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::DCM: return "dcm";
    case Algorithm::COIR: return "coir";
    case Algorithm::KPCA: return "kpca";
    case Algorithm::FastDCM: return "fastdcm";
    case Algorithm::FastCOIR: return "fastcoir";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::DCM, Algorithm::COIR, Algorithm::KPCA,
                      Algorithm::FastDCM, Algorithm::FastCOIR}) {
    if (to_string(a) == name) return a;
  }
  fail(ErrorCode::InvalidInput,
       "unknown algorithm '" + std::string(name) +
           "' (expected dcm, coir, kpca, fastdcm or fastcoir)");
}

bool is_fast(Algorithm algorithm) {
  return algorithm == Algorithm::FastDCM || algorithm == Algorithm::FastCOIR;
}

void ProjectionModel::validate() const {
  kernel.validate();
  const Index m = components();
  const Index r = references.rows();
  require(m >= 1, "model has no components");
  require(coefficients.cols() == m, "model coefficients/eigenvalues disagree");
  require(offsets.size() == r && weights.rows() == r && weights.cols() == m,
          "model projection weights do not match its references");
  if (is_fast(algorithm)) {
    require(static_cast<Index>(landmarks.size()) == r,
            "fast model needs one landmark index per reference row");
    for (Index l : landmarks) {
      require(l >= 0 && l < training_size(), "landmark index out of range");
    }
  } else {
    require(landmarks.empty() && r == training_size(),
            "dense model must reference every training row");
  }
}

MatrixXd transform(const ProjectionModel& model, const MatrixXd& Z) {
  if (Z.cols() != model.input_dim()) {
    fail(ErrorCode::InvalidInput,
         "input has " + std::to_string(Z.cols()) +
             " features but the model expects " +
             std::to_string(model.input_dim()));
  }
  MatrixXd K = cross_gram(model.kernel, model.references, Z);
  K.colwise() -= model.offsets;
  return model.weights.transpose() * K;
}

// --- binary format -------------------------------------------------------
//
//   "DCMM" u32:version u8:algorithm u8:kernel f64:gamma
//   u64:N u64:m u64:R u64:n u64:L
//   f64[N*m] coefficients   (row-major)
//   f64[m]   eigenvalues
//   f64[R*n] references     (row-major)
//   f64[R]   offsets
//   f64[R*m] weights        (row-major)
//   u64[L]   landmarks
//
// All integers and doubles little-endian.

namespace {

constexpr char kMagic[4] = {'D', 'C', 'M', 'M'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void matrix(const MatrixXd& M) {
    for (Index i = 0; i < M.rows(); ++i)
      for (Index j = 0; j < M.cols(); ++j) f64(M(i, j));
  }
  void vector(const VectorXd& v) {
    for (Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) {
      fail(ErrorCode::SchemaError, "model file is truncated");
    }
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{u8()} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{u8()} << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  // Guards the allocation against corrupt sizes before reading n doubles.
  void need_values(std::uint64_t count) const {
    if (count > (in_.size() - pos_) / 8) {
      fail(ErrorCode::SchemaError, "model file is truncated");
    }
  }
  MatrixXd matrix(std::uint64_t rows, std::uint64_t cols) {
    if (cols != 0 && rows > UINT64_MAX / cols) {
      fail(ErrorCode::SchemaError, "model dimensions overflow");
    }
    need_values(rows * cols);
    MatrixXd M(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index i = 0; i < M.rows(); ++i)
      for (Index j = 0; j < M.cols(); ++j) M(i, j) = f64();
    return M;
  }
  VectorXd vector(std::uint64_t n) {
    need_values(n);
    VectorXd v(static_cast<Index>(n));
    for (Index i = 0; i < v.size(); ++i) v(i) = f64();
    return v;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_model(const ProjectionModel& model) {
  model.validate();
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model.algorithm));
  w.u8(static_cast<std::uint8_t>(model.kernel.kind));
  w.f64(model.kernel.gamma);
  w.u64(static_cast<std::uint64_t>(model.training_size()));
  w.u64(static_cast<std::uint64_t>(model.components()));
  w.u64(static_cast<std::uint64_t>(model.references.rows()));
  w.u64(static_cast<std::uint64_t>(model.references.cols()));
  w.u64(model.landmarks.size());
  w.matrix(model.coefficients);
  w.vector(model.eigenvalues);
  w.matrix(model.references);
  w.vector(model.offsets);
  w.matrix(model.weights);
  for (Index l : model.landmarks) w.u64(static_cast<std::uint64_t>(l));
  return w.take();
}

ProjectionModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  r.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorCode::SchemaError, "not a model file (bad magic)");
  }
  for (int i = 0; i < 4; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    fail(ErrorCode::SchemaError,
         "unsupported model format version " + std::to_string(version));
  }
  ProjectionModel model;
  const std::uint8_t algo = r.u8();
  if (algo > static_cast<std::uint8_t>(Algorithm::FastCOIR)) {
    fail(ErrorCode::SchemaError, "unknown algorithm tag in model file");
  }
  model.algorithm = static_cast<Algorithm>(algo);
  const std::uint8_t kind = r.u8();
  if (kind > static_cast<std::uint8_t>(KernelKind::Delta)) {
    fail(ErrorCode::SchemaError, "unknown kernel tag in model file");
  }
  model.kernel.kind = static_cast<KernelKind>(kind);
  model.kernel.gamma = r.f64();
  const std::uint64_t n_train = r.u64();
  const std::uint64_t m = r.u64();
  const std::uint64_t refs = r.u64();
  const std::uint64_t dim = r.u64();
  const std::uint64_t n_land = r.u64();
  model.coefficients = r.matrix(n_train, m);
  model.eigenvalues = r.vector(m);
  model.references = r.matrix(refs, dim);
  model.offsets = r.vector(refs);
  model.weights = r.matrix(refs, m);
  r.need_values(n_land);
  model.landmarks.resize(n_land);
  for (auto& l : model.landmarks) l = static_cast<Index>(r.u64());
  if (!r.done()) fail(ErrorCode::SchemaError, "trailing bytes in model file");
  try {
    model.validate();
  } catch (const Error& e) {
    fail(ErrorCode::SchemaError, std::string("inconsistent model: ") + e.what());
  }
  return model;
}

void save_model(const std::filesystem::path& path,
                const ProjectionModel& model) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

ProjectionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace dcm
