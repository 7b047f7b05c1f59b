#include "pwdens/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

// AVX2 kernels.  Compiled with -mavx2 -mno-fma -ffp-contract=off: explicit
// mul/add intrinsics only, so results match the 4-stripe scalar reference
// bit for bit.  Callers must not enter these functions unless the CPU
// reports AVX2 (the dispatcher checks).

namespace pwdens::kernels::detail {

namespace {

// (s0+s2)+(s1+s3), same order as the scalar reference
inline double reduce_stripes(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);     // lanes 0,1
    __m128d hi = _mm256_extractf128_pd(v, 1);   // lanes 2,3
    __m128d s = _mm_add_pd(lo, hi);             // (s0+s2, s1+s3)
    __m128d swap = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, swap));
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n)
{
    __m256d va = _mm256_set1_pd(a);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (std::size_t i = n4; i < n; ++i)
        y[i] += a * x[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n)
{
    __m256d vs = _mm256_setzero_pd();
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vy = _mm256_loadu_pd(y + i);
        vs = _mm256_add_pd(vs, _mm256_mul_pd(vx, vy));
    }
    double acc = reduce_stripes(vs);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double sum_avx2(const double* x, std::size_t n)
{
    __m256d vs = _mm256_setzero_pd();
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4)
        vs = _mm256_add_pd(vs, _mm256_loadu_pd(x + i));
    double acc = reduce_stripes(vs);
    for (std::size_t i = n4; i < n; ++i)
        acc += x[i];
    return acc;
}

double max_abs_diff_avx2(const double* x, const double* y, std::size_t n)
{
    const __m256d absmask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d vm = _mm256_setzero_pd();
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i),
                                  _mm256_loadu_pd(y + i));
        vm = _mm256_max_pd(vm, _mm256_and_pd(d, absmask));
    }
    __m128d lo = _mm256_castpd256_pd128(vm);
    __m128d hi = _mm256_extractf128_pd(vm, 1);
    __m128d s = _mm_max_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(s, s);
    double m = _mm_cvtsd_f64(_mm_max_sd(s, swap));
    for (std::size_t i = n4; i < n; ++i)
        m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

void scale_avx2(double* x, double a, std::size_t n)
{
    __m256d va = _mm256_set1_pd(a);
    std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < n4; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    for (std::size_t i = n4; i < n; ++i)
        x[i] *= a;
}

} // namespace

const Ops avx2_ops = {axpy_avx2, dot_avx2, sum_avx2,
                      max_abs_diff_avx2, scale_avx2};

} // namespace pwdens::kernels::detail

#endif // x86-64
