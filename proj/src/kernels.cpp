#include "pwdens/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace pwdens::kernels {

namespace {

using detail::Ops;

bool cpu_has(Backend b)
{
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") != 0;
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return true; // baseline on aarch64
#else
        return false;
#endif
    }
    return false;
}

const Ops* ops_for(Backend b)
{
    switch (b) {
    case Backend::scalar:
        return &detail::scalar_ops;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return &detail::avx2_ops;
#else
        return nullptr;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return &detail::neon_ops;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

Backend pick_default()
{
    if (const char* env = std::getenv("PWDENS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has(Backend::avx2))
            return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && cpu_has(Backend::neon))
            return Backend::neon;
        // unknown or unavailable value falls through to auto
    }
    if (cpu_has(Backend::avx2))
        return Backend::avx2;
    if (cpu_has(Backend::neon))
        return Backend::neon;
    return Backend::scalar;
}

struct State {
    Backend backend;
    const Ops* ops;
    State() : backend(pick_default()), ops(ops_for(backend)) {}
};

State& state()
{
    static State s;
    return s;
}

} // namespace

Backend active_backend() { return state().backend; }

void set_backend(Backend b)
{
    if (!cpu_has(b))
        throw std::runtime_error(std::string("kernel backend unavailable: ") +
                                 backend_name(b));
    state().backend = b;
    state().ops = ops_for(b);
}

const char* backend_name(Backend b)
{
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "?";
}

bool backend_available(Backend b) { return cpu_has(b); }

void axpy(double a, const double* x, double* y, std::size_t n)
{
    state().ops->axpy(a, x, y, n);
}

double dot(const double* x, const double* y, std::size_t n)
{
    return state().ops->dot(x, y, n);
}

double sum(const double* x, std::size_t n) { return state().ops->sum(x, n); }

double max_abs_diff(const double* x, const double* y, std::size_t n)
{
    return state().ops->max_abs_diff(x, y, n);
}

void scale(double* x, double a, std::size_t n) { state().ops->scale(x, a, n); }

} // namespace pwdens::kernels
