#include "asianctmc/kernels.hpp"

#include <atomic>

namespace asianctmc::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(ASIANCTMC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{best_supported_backend()};
    return slot;
}

}  // namespace

Backend best_supported_backend() {
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

bool set_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2()) return false;
    backend_slot().store(b, std::memory_order_relaxed);
    return true;
}

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
#if defined(ASIANCTMC_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::avx2) return avx2::cmat_vec(a, rows, cols, x, y);
#endif
    scalar::cmat_vec(a, rows, cols, x, y);
}

void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
#if defined(ASIANCTMC_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::avx2) return avx2::rmat_cvec(p, rows, cols, x, y);
#endif
    scalar::rmat_cvec(p, rows, cols, x, y);
}

void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c) {
#if defined(ASIANCTMC_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::avx2) return avx2::cmat_mat(a, b, m, k, n, c);
#endif
    scalar::cmat_mat(a, b, m, k, n, c);
}

void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y) {
#if defined(ASIANCTMC_HAVE_AVX2_KERNELS)
    if (active_backend() == Backend::avx2) return avx2::cdiag_vec(d, x, n, y);
#endif
    scalar::cdiag_vec(d, x, n, y);
}

}  // namespace asianctmc::kernels
