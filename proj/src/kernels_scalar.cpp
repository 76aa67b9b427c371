#include "asianctmc/kernels.hpp"

namespace asianctmc::kernels::scalar {

void cmat_vec(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const cplx* row = a + i * cols;
        double acc_re = 0.0, acc_im = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double ar = row[j].real(), ai = row[j].imag();
            const double xr = x[j].real(), xi = x[j].imag();
            acc_re += ar * xr - ai * xi;
            acc_im += ar * xi + ai * xr;
        }
        y[i] = cplx(acc_re, acc_im);
    }
}

void rmat_cvec(const double* p, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = p + i * cols;
        double acc_re = 0.0, acc_im = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            acc_re += row[j] * x[j].real();
            acc_im += row[j] * x[j].imag();
        }
        y[i] = cplx(acc_re, acc_im);
    }
}

void cmat_mat(const cplx* a, const cplx* b, std::size_t m, std::size_t k, std::size_t n,
              cplx* c) {
    for (std::size_t i = 0; i < m; ++i) {
        cplx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cplx(0.0, 0.0);
        const cplx* arow = a + i * k;
        for (std::size_t l = 0; l < k; ++l) {
            const double ar = arow[l].real(), ai = arow[l].imag();
            const cplx* brow = b + l * n;
            for (std::size_t j = 0; j < n; ++j) {
                const double br = brow[j].real(), bi = brow[j].imag();
                crow[j] += cplx(ar * br - ai * bi, ar * bi + ai * br);
            }
        }
    }
}

void cdiag_vec(const cplx* d, const cplx* x, std::size_t n, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

}  // namespace asianctmc::kernels::scalar
