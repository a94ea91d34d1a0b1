// Links with -Wl,--wrap=malloc,--wrap=free so every heap block the library
// takes (Eigen goes through malloc; operator new is rerouted below) is
// counted.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <malloc.h>

#include <cstddef>
#include <cstdlib>
#include <new>

#include "dcm/dcm.hpp"
#include "dcm/nystrom.hpp"

extern "C" {
void* __real_malloc(std::size_t size);
void __real_free(void* ptr);
}

namespace {

struct Ledger {
  bool on = false;
  std::size_t live = 0;
  std::size_t peak = 0;
  std::size_t largest = 0;

  void reset() { live = peak = largest = 0; }
};

Ledger ledger;

}  // namespace

extern "C" void* __wrap_malloc(std::size_t size) {
  void* p = __real_malloc(size);
  if (p != nullptr && ledger.on) {
    const std::size_t got = malloc_usable_size(p);
    ledger.live += got;
    if (ledger.live > ledger.peak) ledger.peak = ledger.live;
    if (size > ledger.largest) ledger.largest = size;
  }
  return p;
}

extern "C" void __wrap_free(void* p) {
  if (p != nullptr && ledger.on) {
    const std::size_t got = malloc_usable_size(p);
    ledger.live = got > ledger.live ? 0 : ledger.live - got;
  }
  __real_free(p);
}

void* operator new(std::size_t size) {
  if (void* p = __wrap_malloc(size == 0 ? 1 : size)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t size) { return operator new(size); }
void operator delete(void* p) noexcept { __wrap_free(p); }
void operator delete[](void* p) noexcept { __wrap_free(p); }
void operator delete(void* p, std::size_t) noexcept { __wrap_free(p); }
void operator delete[](void* p, std::size_t) noexcept { __wrap_free(p); }

namespace {

template <class Fn>
Ledger audit(Fn&& fn) {
  ledger.reset();
  ledger.on = true;
  fn();
  ledger.on = false;
  return ledger;
}

dcm::DataSet synthetic(int per_domain) {
  dcm::SynthConfig cfg;
  cfg.fixed_sizes = true;
  cfg.mean_count = per_domain;
  return dcm::synth_generate(cfg);
}

}  // namespace

TEST_CASE("fast fit never holds an N x N matrix") {
  const dcm::DataSet data = synthetic(200);  // N = 2000
  const auto n = static_cast<std::size_t>(data.size());
  const std::size_t square = n * n * sizeof(double);
  const dcm::KernelSet k = dcm::default_kernels(data, 0.5);
  const Ledger l = audit([&] {
    const dcm::ProjectionModel model = dcm::fit_fastdcm(data, k, {1e-3, 2, 50, 1});
    const dcm::MatrixXd z = dcm::transform(model, data.X);
    CHECK(z.allFinite());
  });
  MESSAGE("N = " << n << ": largest block " << l.largest << " B, peak "
                 << l.peak << " B, N^2 doubles " << square << " B");
  CHECK(l.largest < square / 4);
  CHECK(l.peak < square / 4);
}

TEST_CASE("the audit sees a dense fit") {
  // Positive control: the dense path must show up.
  const dcm::DataSet data = synthetic(30);
  const auto n = static_cast<std::size_t>(data.size());
  const dcm::KernelSet k = dcm::default_kernels(data, 0.5);
  const Ledger l = audit([&] { dcm::fit_dcm(data, k, {}); });
  CHECK(l.largest >= n * n * sizeof(double));
}
