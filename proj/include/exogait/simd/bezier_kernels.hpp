#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace exo::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend);

/// True when the kernel was compiled in and the CPU supports it.
bool backend_available(Backend backend);

/// Backend used by the dispatching entry points. Picked once at first use:
/// the widest available, unless EXOGAIT_SIMD=scalar|avx2|neon overrides it.
Backend active_backend();

inline constexpr std::size_t kMaxControlPoints = 8;

/// Samples a planar Bezier curve at u_j = j / segments, j = 0..segments, by
/// de Casteljau. Every backend performs the same IEEE operations per sample,
/// in the same order, so results are bit-identical across backends.
///
/// cx, cy: control point coordinates (2..kMaxControlPoints entries).
/// out_x, out_y: segments + 1 entries each.
void bezier_grid(std::span<const double> cx, std::span<const double> cy, std::size_t segments,
                 std::span<double> out_x, std::span<double> out_y);

void bezier_grid(Backend backend, std::span<const double> cx, std::span<const double> cy,
                 std::size_t segments, std::span<double> out_x, std::span<double> out_y);

namespace detail {

// Interpolation step shared by every backend: measured from a for u <= 1/2
// and from b above, where w = 1 - u is exact. Both ends are hit exactly and
// a == b returns a for every u.
inline double lerp_step(double a, double b, double u, double w) {
  const double d = b - a;
  return u > 0.5 ? b - w * d : a + u * d;
}

// One sample of the scalar reference; also used by the vector kernels for
// their tail.
inline void de_casteljau(const double* cx, const double* cy, std::size_t n, double u,
                         double* x, double* y) {
  double bx[kMaxControlPoints];
  double by[kMaxControlPoints];
  for (std::size_t i = 0; i < n; ++i) {
    bx[i] = cx[i];
    by[i] = cy[i];
  }
  const double w = 1.0 - u;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i + r < n; ++i) {
      bx[i] = lerp_step(bx[i], bx[i + 1], u, w);
      by[i] = lerp_step(by[i], by[i + 1], u, w);
    }
  }
  *x = bx[0];
  *y = by[0];
}

void bezier_grid_scalar(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                        double* out_x, double* out_y);
void bezier_grid_avx2(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                      double* out_x, double* out_y);
void bezier_grid_neon(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                      double* out_x, double* out_y);

}  // namespace detail

}  // namespace exo::simd
