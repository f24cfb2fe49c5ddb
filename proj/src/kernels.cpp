#include "orecalc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace orecalc::kernels {

namespace {

void fma_mod_scalar(std::uint32_t* out, std::uint32_t c, const std::uint32_t* v,
                    std::uint32_t m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (out[i] + c * v[i]) % m;
  }
}

void add_mod_scalar(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                    std::uint32_t m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t t = a[i] + b[i];
    out[i] = t >= m ? t - m : t;
  }
}

void sub_mod_scalar(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                    std::uint32_t m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t t = a[i] + m - b[i];
    out[i] = t >= m ? t - m : t;
  }
}

const Backend kScalar{"scalar", fma_mod_scalar, add_mod_scalar, sub_mod_scalar};

const Backend* resolve() {
  const char* force = std::getenv("ORECALC_KERNELS");
  if (force != nullptr && std::strcmp(force, "scalar") == 0) return &kScalar;
  const Backend* avx2 = avx2_backend();
  if (force != nullptr && std::strcmp(force, "avx2") == 0 && avx2 != nullptr) return avx2;
  if (force != nullptr) return &kScalar;
  return avx2 != nullptr ? avx2 : &kScalar;
}

}  // namespace

const Backend& scalar_backend() { return kScalar; }

#ifndef ORECALC_HAVE_AVX2
const Backend* avx2_backend() { return nullptr; }
#endif

const Backend& active_backend() {
  static const Backend* backend = resolve();
  return *backend;
}

}  // namespace orecalc::kernels
