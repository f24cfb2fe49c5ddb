// AVX2 backend. Compiled with -mavx2 for this translation unit only; the
// dispatcher takes it only when CPUID reports AVX2 at runtime.

#include "orecalc/kernels.hpp"

#ifdef ORECALC_HAVE_AVX2

#include <immintrin.h>

namespace orecalc::kernels {

namespace {

// t in [0, 2m): t mod m = min(t, t - m) in unsigned arithmetic.
inline __m256i cond_sub(__m256i t, __m256i vm) {
  return _mm256_min_epu32(t, _mm256_sub_epi32(t, vm));
}

// Barrett step with M = floor(2^32 / m): q = hi32(t*M) leaves t - q*m in
// [0, 2m) for t < 2^31, so one conditional subtract finishes the reduction.
inline __m256i barrett_mod(__m256i t, __m256i vm, __m256i vmagic) {
  __m256i q_even = _mm256_srli_epi64(_mm256_mul_epu32(t, vmagic), 32);
  __m256i q_odd = _mm256_srli_epi64(_mm256_mul_epu32(_mm256_srli_epi64(t, 32), vmagic), 32);
  __m256i q = _mm256_blend_epi32(q_even, _mm256_slli_epi64(q_odd, 32), 0xaa);
  __m256i r = _mm256_sub_epi32(t, _mm256_mullo_epi32(q, vm));
  return cond_sub(r, vm);
}

void fma_mod_avx2(std::uint32_t* out, std::uint32_t c, const std::uint32_t* v,
                  std::uint32_t m, std::size_t n) {
  const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
  const __m256i vm = _mm256_set1_epi32(static_cast<int>(m));
  const __m256i vmagic = _mm256_set1_epi32(static_cast<int>(0xffffffffu / m));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i vo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + i));
    __m256i vv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(v + i));
    __m256i t = _mm256_add_epi32(vo, _mm256_mullo_epi32(vc, vv));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), barrett_mod(t, vm, vmagic));
  }
  for (; i < n; ++i) out[i] = (out[i] + c * v[i]) % m;
}

void add_mod_avx2(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                  std::uint32_t m, std::size_t n) {
  const __m256i vm = _mm256_set1_epi32(static_cast<int>(m));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        cond_sub(_mm256_add_epi32(va, vb), vm));
  }
  for (; i < n; ++i) {
    std::uint32_t t = a[i] + b[i];
    out[i] = t >= m ? t - m : t;
  }
}

void sub_mod_avx2(std::uint32_t* out, const std::uint32_t* a, const std::uint32_t* b,
                  std::uint32_t m, std::size_t n) {
  const __m256i vm = _mm256_set1_epi32(static_cast<int>(m));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i t = _mm256_sub_epi32(_mm256_add_epi32(va, vm), vb);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), cond_sub(t, vm));
  }
  for (; i < n; ++i) {
    std::uint32_t t = a[i] + m - b[i];
    out[i] = t >= m ? t - m : t;
  }
}

const Backend kAvx2{"avx2", fma_mod_avx2, add_mod_avx2, sub_mod_avx2};

}  // namespace

const Backend* avx2_backend() {
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

}  // namespace orecalc::kernels

#endif  // ORECALC_HAVE_AVX2
