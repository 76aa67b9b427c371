#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Dense inner-loop kernels. Every kernel has a scalar reference
// implementation and, on x86-64 with AVX2+FMA, a vectorized variant selected
// at runtime. The two paths are equivalence-tested; callers never care which
// one runs.
namespace asianctmc::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend best_supported_backend();
Backend active_backend();
// Returns false (and leaves the active backend unchanged) if the requested
// backend is not supported on this CPU.
bool set_backend(Backend b);
std::string_view backend_name(Backend b);

// y = A x. A is rows x cols, row-major complex. y must not alias x.
void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);

// y = P x with P real rows x cols row-major and x complex.
void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);

// C = A B, all complex row-major; A is m x k, B is k x n. C must not alias.
void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c);

// y_i = d_i * x_i (y may alias x).
void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y);

namespace scalar {
void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c);
void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ASIANCTMC_HAVE_AVX2_KERNELS 1
namespace avx2 {
void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);
void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c);
void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y);
}  // namespace avx2
#endif

}  // namespace asianctmc::kernels
