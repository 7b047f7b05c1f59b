#include "pwdens/kernels.hpp"

#include <cmath>

// Reference kernels.  The 4-stripe accumulation mirrors the AVX2 lane
// layout so the SIMD variants reproduce these results bit for bit.
// This translation unit is compiled with -ffp-contract=off.

namespace pwdens::kernels::detail {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n)
{
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    double acc = (s0 + s2) + (s1 + s3);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, std::size_t n)
{
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        s0 += x[i];
        s1 += x[i + 1];
        s2 += x[i + 2];
        s3 += x[i + 3];
    }
    double acc = (s0 + s2) + (s1 + s3);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i];
    return acc;
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n)
{
    double m0 = 0, m1 = 0, m2 = 0, m3 = 0;
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        m0 = std::max(m0, std::fabs(x[i] - y[i]));
        m1 = std::max(m1, std::fabs(x[i + 1] - y[i + 1]));
        m2 = std::max(m2, std::fabs(x[i + 2] - y[i + 2]));
        m3 = std::max(m3, std::fabs(x[i + 3] - y[i + 3]));
    }
    double m = std::max(std::max(m0, m2), std::max(m1, m3));
    for (std::size_t i = n4; i < n; ++i)
        m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

void scale_scalar(double* x, double a, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] *= a;
}

} // namespace

const Ops scalar_ops = {axpy_scalar, dot_scalar, sum_scalar,
                        max_abs_diff_scalar, scale_scalar};

} // namespace pwdens::kernels::detail
