#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "asianctmc/kernels.hpp"

namespace asianctmc::linalg {

using cplx = std::complex<double>;

// Failure of a numerical procedure (singular solve, unmet residual target,
// overflow in a scaling stage). Carries the offending residual when known.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class CVector {
public:
    explicit CVector(std::size_t len);
    explicit CVector(std::vector<cplx> entries);

    std::size_t size() const { return data_.size(); }
    cplx& operator[](std::size_t i) { return data_[i]; }
    const cplx& operator[](std::size_t i) const { return data_[i]; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    void check_finite() const;

private:
    std::vector<cplx> data_;
};

// Dense complex matrix, row-major. Entries are validated finite on
// construction from data; internal routines that can overflow re-check.
class CMatrix {
public:
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(const std::vector<cplx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    void check_finite() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

// max_ij |a_ij| — the elementwise maximum norm.
double max_norm(const CMatrix& m);
double max_norm(const CVector& v);
// max column sum of moduli (subordinate 1-norm).
double one_norm(const CMatrix& m);

CVector mat_vec(const CMatrix& m, const CVector& v);
CMatrix mat_mul(const CMatrix& a, const CMatrix& b);
CMatrix mat_add(const CMatrix& a, const CMatrix& b);
CMatrix mat_sub(const CMatrix& a, const CMatrix& b);
CMatrix mat_scale(const CMatrix& a, cplx s);

struct InverseOptions {
    double residual_tol = 1e-10;   // required max-norm of m*inv(m) - I
    double condition_cap = 1e12;   // ||m||_1 * ||inv(m)||_1 ceiling
};

// Inverse via partially pivoted LU. Throws numeric_error (carrying the
// achieved residual) when the matrix is singular, the residual target is
// missed, or the condition estimate exceeds the cap.
CMatrix mat_inverse(const CMatrix& m, const InverseOptions& opts = {});

// Solves a x = b in place of the returned vector; LU with partial pivoting.
CVector lu_solve(const CMatrix& a, const CVector& b);

// e^{m t} by scaling-and-squaring with diagonal Pade approximants
// (degree 13 family, 1-norm scaling).
CMatrix expm(const CMatrix& m, double t);

// e^{m t} v without forming the exponential: trace-shifted, scaled
// truncated-Taylor steps. Agrees with expm(m,t)*v to ~1e-10 relative.
CVector expm_action(const CMatrix& m, double t, const CVector& v, double tol = 5e-14);

// Partial Neumann sum  sum_{k=0}^{terms} (I-a)^k; requires ||I-a|| < 1 in the
// max norm. Test-side companion to mat_inverse.
CMatrix neumann_inverse_check(const CMatrix& a, std::size_t terms);

}  // namespace asianctmc::linalg
