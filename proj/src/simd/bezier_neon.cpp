#include "exogait/simd/bezier_kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

#include <stdexcept>

namespace exo::simd::detail {

#if defined(__aarch64__)

namespace {

inline float64x2_t lerp_step(float64x2_t a, float64x2_t b, float64x2_t u, float64x2_t w,
                             uint64x2_t upper) {
  const float64x2_t d = vsubq_f64(b, a);
  const float64x2_t lo = vaddq_f64(a, vmulq_f64(u, d));
  const float64x2_t hi = vsubq_f64(b, vmulq_f64(w, d));
  return vbslq_f64(upper, hi, lo);
}

}  // namespace

// Compiled with -ffp-contract=off like the scalar reference, so vmulq/vaddq
// are never fused.
void bezier_grid_neon(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                      double* out_x, double* out_y) {
  const double denom = static_cast<double>(segments);
  const float64x2_t vdenom = vdupq_n_f64(denom);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t half = vdupq_n_f64(0.5);

  float64x2_t bx[kMaxControlPoints];
  float64x2_t by[kMaxControlPoints];

  const std::size_t count = segments + 1;
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    const double idx[2] = {static_cast<double>(j), static_cast<double>(j + 1)};
    const float64x2_t u = vdivq_f64(vld1q_f64(idx), vdenom);
    const float64x2_t w = vsubq_f64(one, u);
    const uint64x2_t upper = vcgtq_f64(u, half);
    for (std::size_t i = 0; i < n; ++i) {
      bx[i] = vdupq_n_f64(cx[i]);
      by[i] = vdupq_n_f64(cy[i]);
    }
    for (std::size_t r = 1; r < n; ++r) {
      for (std::size_t i = 0; i + r < n; ++i) {
        bx[i] = lerp_step(bx[i], bx[i + 1], u, w, upper);
        by[i] = lerp_step(by[i], by[i + 1], u, w, upper);
      }
    }
    vst1q_f64(out_x + j, bx[0]);
    vst1q_f64(out_y + j, by[0]);
  }
  for (; j < count; ++j) {
    de_casteljau(cx, cy, n, static_cast<double>(j) / denom, &out_x[j], &out_y[j]);
  }
}

#else

void bezier_grid_neon(const double*, const double*, std::size_t, std::size_t, double*, double*) {
  throw std::logic_error("NEON kernel not compiled in");
}

#endif

}  // namespace exo::simd::detail
