// Built with -mavx2 (and without -mfma: products and sums must stay separate
// roundings to match the scalar reference bit for bit).
#include "exogait/simd/bezier_kernels.hpp"

#if defined(EXOGAIT_HAVE_AVX2)
#include <immintrin.h>
#endif

#include <stdexcept>

namespace exo::simd::detail {

#if defined(EXOGAIT_HAVE_AVX2)

namespace {

inline __m256d lerp_step(__m256d a, __m256d b, __m256d u, __m256d w, __m256d upper) {
  const __m256d d = _mm256_sub_pd(b, a);
  const __m256d lo = _mm256_add_pd(a, _mm256_mul_pd(u, d));
  const __m256d hi = _mm256_sub_pd(b, _mm256_mul_pd(w, d));
  return _mm256_blendv_pd(lo, hi, upper);
}

}  // namespace

void bezier_grid_avx2(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                      double* out_x, double* out_y) {
  const double denom = static_cast<double>(segments);
  const __m256d vdenom = _mm256_set1_pd(denom);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);

  __m256d px[kMaxControlPoints];
  __m256d py[kMaxControlPoints];
  __m256d bx[kMaxControlPoints];
  __m256d by[kMaxControlPoints];
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = _mm256_set1_pd(cx[i]);
    py[i] = _mm256_set1_pd(cy[i]);
  }

  const std::size_t count = segments + 1;
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    // j + lane is an exact small integer, so u matches the scalar j / segments.
    const __m256d u = _mm256_div_pd(_mm256_add_pd(_mm256_set1_pd(static_cast<double>(j)), lane),
                                    vdenom);
    const __m256d w = _mm256_sub_pd(one, u);
    const __m256d upper = _mm256_cmp_pd(u, half, _CMP_GT_OQ);
    for (std::size_t i = 0; i < n; ++i) {
      bx[i] = px[i];
      by[i] = py[i];
    }
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i + r < n; ++i) {
        bx[i] = lerp_step(bx[i], bx[i + 1], u, w, upper);
        by[i] = lerp_step(by[i], by[i + 1], u, w, upper);
      }
    }
    _mm256_storeu_pd(out_x + j, bx[0]);
    _mm256_storeu_pd(out_y + j, by[0]);
  }
  for (; j < count; ++j) {
    de_casteljau(cx, cy, n, static_cast<double>(j) / denom, &out_x[j], &out_y[j]);
  }
}

#else

void bezier_grid_avx2(const double*, const double*, std::size_t, std::size_t, double*, double*) {
  throw std::logic_error("AVX2 kernel not compiled in");
}

#endif

}  // namespace exo::simd::detail
