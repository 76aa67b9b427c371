#include "asianctmc/kernels.hpp"

#if defined(ASIANCTMC_HAVE_AVX2_KERNELS)

#include <immintrin.h>

// Complex doubles are interleaved (re, im), so one __m256d carries two
// complex values. Products use the split-real/imag FMA form: with
// ai pre-negated on even lanes, y += a*x is two fmadds.
namespace asianctmc::kernels::avx2 {

namespace {

const __m256d kFlipEven = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);

// [a0r a0i a1r a1i] -> real parts duplicated [a0r a0r a1r a1r]
inline __m256d dup_re(__m256d a) { return _mm256_movedup_pd(a); }

// imag parts duplicated and even lanes negated: [-a0i a0i -a1i a1i]
inline __m256d dup_im_flip(__m256d a) {
    return _mm256_xor_pd(_mm256_permute_pd(a, 0xF), kFlipEven);
}

// swap re/im within each complex: [x0i x0r x1i x1r]
inline __m256d swap_ri(__m256d x) { return _mm256_permute_pd(x, 0x5); }

inline cplx reduce_pair(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

}  // namespace

void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * cols);
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            __m256d a0 = _mm256_loadu_pd(row + 2 * j);
            __m256d x0 = _mm256_loadu_pd(xd + 2 * j);
            acc0 = _mm256_fmadd_pd(dup_re(a0), x0, acc0);
            acc0 = _mm256_fmadd_pd(dup_im_flip(a0), swap_ri(x0), acc0);
            __m256d a1 = _mm256_loadu_pd(row + 2 * j + 4);
            __m256d x1 = _mm256_loadu_pd(xd + 2 * j + 4);
            acc1 = _mm256_fmadd_pd(dup_re(a1), x1, acc1);
            acc1 = _mm256_fmadd_pd(dup_im_flip(a1), swap_ri(x1), acc1);
        }
        for (; j + 2 <= cols; j += 2) {
            __m256d a0 = _mm256_loadu_pd(row + 2 * j);
            __m256d x0 = _mm256_loadu_pd(xd + 2 * j);
            acc0 = _mm256_fmadd_pd(dup_re(a0), x0, acc0);
            acc0 = _mm256_fmadd_pd(dup_im_flip(a0), swap_ri(x0), acc0);
        }
        cplx acc = reduce_pair(_mm256_add_pd(acc0, acc1));
        for (; j < cols; ++j) acc += a[i * cols + j] * x[j];
        y[i] = acc;
    }
}

void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = p + i * cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            __m256d r4 = _mm256_loadu_pd(row + j);
            // [r0 r0 r1 r1] and [r2 r2 r3 r3]
            __m256d r01 = _mm256_permute4x64_pd(r4, 0x50);
            __m256d r23 = _mm256_permute4x64_pd(r4, 0xFA);
            acc0 = _mm256_fmadd_pd(r01, _mm256_loadu_pd(xd + 2 * j), acc0);
            acc1 = _mm256_fmadd_pd(r23, _mm256_loadu_pd(xd + 2 * j + 4), acc1);
        }
        for (; j + 2 <= cols; j += 2) {
            __m256d r2 = _mm256_permute4x64_pd(
                _mm256_castpd128_pd256(_mm_loadu_pd(row + j)), 0x50);
            acc0 = _mm256_fmadd_pd(r2, _mm256_loadu_pd(xd + 2 * j), acc0);
        }
        cplx acc = reduce_pair(_mm256_add_pd(acc0, acc1));
        for (; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c) {
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            const cplx al = a[i * k + l];
            if (al.real() == 0.0 && al.imag() == 0.0) continue;
            const __m256d ar = _mm256_set1_pd(al.real());
            const __m256d ai = _mm256_xor_pd(_mm256_set1_pd(al.imag()), kFlipEven);
            const double* brow = reinterpret_cast<const double*>(b + l * n);
            std::size_t j = 0;
            for (; j + 2 <= n; j += 2) {
                __m256d b2 = _mm256_loadu_pd(brow + 2 * j);
                __m256d c2 = _mm256_loadu_pd(crow + 2 * j);
                c2 = _mm256_fmadd_pd(ar, b2, c2);
                c2 = _mm256_fmadd_pd(ai, swap_ri(b2), c2);
                _mm256_storeu_pd(crow + 2 * j, c2);
            }
            for (; j < n; ++j) c[i * n + j] += al * b[l * n + j];
        }
    }
}

void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y) {
    const double* dd = reinterpret_cast<const double*>(d);
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d d2 = _mm256_loadu_pd(dd + 2 * i);
        __m256d x2 = _mm256_loadu_pd(xd + 2 * i);
        __m256d r = _mm256_fmadd_pd(dup_re(d2), x2,
                                    _mm256_mul_pd(dup_im_flip(d2), swap_ri(x2)));
        _mm256_storeu_pd(yd + 2 * i, r);
    }
    for (; i < n; ++i) y[i] = d[i] * x[i];
}

}  // namespace asianctmc::kernels::avx2

#endif  // ASIANCTMC_HAVE_AVX2_KERNELS
