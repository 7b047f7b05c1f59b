#include "pwdens/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

// NEON kernels (2-lane f64).  Two vector accumulators play the role of the
// four AVX2 stripes: acc_a holds stripes (0,1), acc_b holds (2,3), and the
// final reduction is (s0+s2)+(s1+s3), matching the scalar reference.
// Compiled with -ffp-contract=off; vmulq/vaddq only, never vfmaq.

namespace pwdens::kernels::detail {

namespace {

inline double reduce_stripes(float64x2_t a, float64x2_t b)
{
    float64x2_t s = vaddq_f64(a, b); // (s0+s2, s1+s3)
    return vgetq_lane_f64(s, 0) + vgetq_lane_f64(s, 1);
}

void axpy_neon(double a, const double* x, double* y, std::size_t n)
{
    float64x2_t va = vdupq_n_f64(a);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        float64x2_t y0 = vld1q_f64(y + i);
        float64x2_t y1 = vld1q_f64(y + i + 2);
        y0 = vaddq_f64(y0, vmulq_f64(va, vld1q_f64(x + i)));
        y1 = vaddq_f64(y1, vmulq_f64(va, vld1q_f64(x + i + 2)));
        vst1q_f64(y + i, y0);
        vst1q_f64(y + i + 2, y1);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] += a * x[i];
}

double dot_neon(const double* x, const double* y, std::size_t n)
{
    float64x2_t sa = vdupq_n_f64(0.0);
    float64x2_t sb = vdupq_n_f64(0.0);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        sa = vaddq_f64(sa, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
        sb = vaddq_f64(sb, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
    }
    double acc = reduce_stripes(sa, sb);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double sum_neon(const double* x, std::size_t n)
{
    float64x2_t sa = vdupq_n_f64(0.0);
    float64x2_t sb = vdupq_n_f64(0.0);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        sa = vaddq_f64(sa, vld1q_f64(x + i));
        sb = vaddq_f64(sb, vld1q_f64(x + i + 2));
    }
    double acc = reduce_stripes(sa, sb);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i];
    return acc;
}

double max_abs_diff_neon(const double* x, const double* y, std::size_t n)
{
    float64x2_t ma = vdupq_n_f64(0.0);
    float64x2_t mb = vdupq_n_f64(0.0);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        ma = vmaxq_f64(ma, vabsq_f64(vsubq_f64(vld1q_f64(x + i),
                                               vld1q_f64(y + i))));
        mb = vmaxq_f64(mb, vabsq_f64(vsubq_f64(vld1q_f64(x + i + 2),
                                               vld1q_f64(y + i + 2))));
    }
    float64x2_t s = vmaxq_f64(ma, mb);
    double m = std::max(vgetq_lane_f64(s, 0), vgetq_lane_f64(s, 1));
    for (std::size_t i = n4; i < n; ++i)
        m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

void scale_neon(double* x, double a, std::size_t n)
{
    float64x2_t va = vdupq_n_f64(a);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
        vst1q_f64(x + i + 2, vmulq_f64(vld1q_f64(x + i + 2), va));
    }
    for (std::size_t i = n4; i < n; ++i)
        x[i] *= a;
}

} // namespace

const Ops neon_ops = {axpy_neon, dot_neon, sum_neon,
                      max_abs_diff_neon, scale_neon};

} // namespace pwdens::kernels::detail

#endif // aarch64
