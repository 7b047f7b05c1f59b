#ifndef PWDENS_KERNELS_HPP
#define PWDENS_KERNELS_HPP

#include <cstddef>
#include <string>

// Vector kernels for the power-iteration hot path.
//
// Every kernel exists in a scalar reference version and, where the target
// supports it, a SIMD version (AVX2 on x86-64, NEON on aarch64).  The active
// implementation is picked once at runtime from the CPU, overridable with
// the PWDENS_KERNELS environment variable ("scalar", "avx2", "neon", "auto").
//
// All variants are bit-identical: reductions accumulate in four independent
// stripes (the AVX2 lane layout; NEON uses two 2-lane pairs combined in the
// same order) and are reduced as (s0+s2)+(s1+s3), followed by the remainder
// in index order.  No FMA contraction is permitted in any variant, so each
// partial result is the same IEEE-754 double everywhere.

namespace pwdens::kernels {

enum class Backend { scalar, avx2, neon };

// Backend chosen for this process (env override applied on first call).
Backend active_backend();

// Force a backend; throws std::runtime_error if unsupported on this CPU.
void set_backend(Backend b);

const char* backend_name(Backend b);
bool backend_available(Backend b);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);

// sum_i x[i]
double sum(const double* x, std::size_t n);

// max_i |x[i] - y[i]|  (0 for n == 0)
double max_abs_diff(const double* x, const double* y, std::size_t n);

// x[i] *= a
void scale(double* x, double a, std::size_t n);

namespace detail {

struct Ops {
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
};

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif

} // namespace detail

} // namespace pwdens::kernels

#endif
