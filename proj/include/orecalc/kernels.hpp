#pragma once

// Dense vectors of residues mod m are the inner loop of every concrete
// computation here: structure-constant products, echelon row operations and
// the exhaustive idempotent scans. The kernels below come in a scalar
// reference flavour and an AVX2 flavour; the active backend is picked once at
// startup from CPUID and can be forced with ORECALC_KERNELS=scalar|avx2.
//
// All kernels require m < 2^15 so that c*v[i] + out[i] stays below 2^31.

#include <cstddef>
#include <cstdint>

namespace orecalc::kernels {

inline constexpr std::uint32_t kMaxModulus = 1u << 15;

struct Backend {
  const char* name;
  // out[i] = (out[i] + c * v[i]) mod m, with c, v[i], out[i] in [0, m).
  void (*fma_mod)(std::uint32_t* out, std::uint32_t c, const std::uint32_t* v,
                  std::uint32_t m, std::size_t n);
  // out[i] = (a[i] + b[i]) mod m.
  void (*add_mod)(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                  std::uint32_t m, std::size_t n);
  // out[i] = (a[i] - b[i]) mod m.
  void (*sub_mod)(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                  std::uint32_t m, std::size_t n);
};

const Backend& scalar_backend();

// Null when this build carries no AVX2 object or the CPU lacks AVX2.
const Backend* avx2_backend();

// Resolved once; honors the ORECALC_KERNELS override.
const Backend& active_backend();

inline void fma_mod(std::uint32_t* out, std::uint32_t c, const std::uint32_t* v,
                    std::uint32_t m, std::size_t n) {
  active_backend().fma_mod(out, c, v, m, n);
}

inline void add_mod(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                    std::uint32_t m, std::size_t n) {
  active_backend().add_mod(out, a, b, m, n);
}

inline void sub_mod(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                    std::uint32_t m, std::size_t n) {
  active_backend().sub_mod(out, a, b, m, n);
}

}  // namespace orecalc::kernels
