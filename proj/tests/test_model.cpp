#include <doctest.h>

#include <filesystem>

#include "dcm/dcm.hpp"
#include "dcm/nystrom.hpp"
#include "helpers.hpp"

using namespace dcm;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : {Algorithm::DCM, Algorithm::COIR, Algorithm::KPCA,
                      Algorithm::FastDCM, Algorithm::FastCOIR}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK(code_of([] { parse_algorithm("pca"); }) == ErrorCode::InvalidInput);
  CHECK(is_fast(Algorithm::FastCOIR));
  CHECK_FALSE(is_fast(Algorithm::KPCA));
}

TEST_CASE("serialization round trip preserves transform") {
  const DataSet data = testing::toy(60, 3, 1);
  const KernelSet k = default_kernels(data, 0.5);
  SplitMix64 rng(2, 0);
  const MatrixXd Z = testing::gaussian(9, 3, rng);
  for (const ProjectionModel& model :
       {fit_dcm(data, k, {}), fit_kpca(data, k.x, 3),
        fit_fastdcm(data, k, {1e-3, 2, 15, 7})}) {
    const std::string bytes = serialize_model(model);
    CHECK(bytes.substr(0, 4) == "DCMM");
    const ProjectionModel back = deserialize_model(bytes);
    CHECK(back.algorithm == model.algorithm);
    CHECK(back.kernel == model.kernel);
    CHECK(back.coefficients == model.coefficients);
    CHECK(back.eigenvalues == model.eigenvalues);
    CHECK(back.landmarks == model.landmarks);
    CHECK((transform(back, Z) - transform(model, Z)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(serialize_model(back) == bytes);
  }
}

TEST_CASE("model files") {
  const DataSet data = testing::toy(30, 2, 3);
  const ProjectionModel model = fit_coir(data, default_kernels(data, 0.5), {});
  const auto path = std::filesystem::temp_directory_path() / "dcm_model_test.bin";
  save_model(path, model);
  CHECK(load_model(path).coefficients == model.coefficients);
  std::filesystem::remove(path);
  CHECK(code_of([&] { load_model(path); }) == ErrorCode::IoError);
}

TEST_CASE("corrupt model bytes are rejected") {
  const DataSet data = testing::toy(20, 2, 4);
  const std::string good = serialize_model(fit_dcm(data, default_kernels(data, 0.5), {}));

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK(code_of([&] { deserialize_model(bad_magic); }) == ErrorCode::SchemaError);

  std::string bad_version = good;
  bad_version[4] = 9;
  CHECK(code_of([&] { deserialize_model(bad_version); }) == ErrorCode::SchemaError);

  CHECK(code_of([&] { deserialize_model(good.substr(0, good.size() - 3)); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([&] { deserialize_model(good + "x"); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { deserialize_model("DC"); }) == ErrorCode::SchemaError);

  // A huge row count must not trigger a huge allocation.
  std::string huge = good;
  for (int i = 0; i < 8; ++i) huge[18 + i] = '\xff';
  CHECK(code_of([&] { deserialize_model(huge); }) == ErrorCode::SchemaError);
}

}
