#include "exogait/simd/bezier_kernels.hpp"

namespace exo::simd::detail {

void bezier_grid_scalar(const double* cx, const double* cy, std::size_t n, std::size_t segments,
                        double* out_x, double* out_y) {
  const double denom = static_cast<double>(segments);
  for (std::size_t j = 0; j <= segments; ++j) {
    const double u = static_cast<double>(j) / denom;
    de_casteljau(cx, cy, n, u, &out_x[j], &out_y[j]);
  }
}

}  // namespace exo::simd::detail
