#include <cstdlib>
#include <stdexcept>
#include <string>

#include "exogait/error.hpp"
#include "exogait/simd/bezier_kernels.hpp"

namespace exo::simd {

namespace {

bool cpu_has_avx2() {
#if defined(EXOGAIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend pick_backend() {
  if (const char* forced = std::getenv("EXOGAIT_SIMD")) {
    const std::string name(forced);
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
      if (name == backend_name(b) && backend_available(b)) return b;
    }
  }
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() {
  static const Backend chosen = pick_backend();
  return chosen;
}

void bezier_grid(std::span<const double> cx, std::span<const double> cy, std::size_t segments,
                 std::span<double> out_x, std::span<double> out_y) {
  bezier_grid(active_backend(), cx, cy, segments, out_x, out_y);
}

void bezier_grid(Backend backend, std::span<const double> cx, std::span<const double> cy,
                 std::size_t segments, std::span<double> out_x, std::span<double> out_y) {
  const std::size_t n = cx.size();
  if (n < 2 || n > kMaxControlPoints || cy.size() != n)
    throw ValidationError("bezier_grid: need 2.." + std::to_string(kMaxControlPoints) +
                          " control points with matching coordinates");
  if (segments == 0) throw ValidationError("bezier_grid: segments must be > 0");
  if (out_x.size() < segments + 1 || out_y.size() < segments + 1)
    throw ValidationError("bezier_grid: output buffers too small");
  if (!backend_available(backend))
    throw std::logic_error("bezier_grid: backend " + std::string(backend_name(backend)) +
                           " unavailable");

  switch (backend) {
    case Backend::Scalar:
      detail::bezier_grid_scalar(cx.data(), cy.data(), n, segments, out_x.data(), out_y.data());
      break;
    case Backend::Avx2:
      detail::bezier_grid_avx2(cx.data(), cy.data(), n, segments, out_x.data(), out_y.data());
      break;
    case Backend::Neon:
      detail::bezier_grid_neon(cx.data(), cy.data(), n, segments, out_x.data(), out_y.data());
      break;
  }
}

}  // namespace exo::simd
