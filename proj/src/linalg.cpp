#include "asianctmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace asianctmc::linalg {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

CVector::CVector(std::size_t len) : data_(len, cplx(0.0, 0.0)) {
    require(len >= 1, "CVector: length must be >= 1");
}

CVector::CVector(std::vector<cplx> entries) : data_(std::move(entries)) {
    require(!data_.empty(), "CVector: length must be >= 1");
    check_finite();
}

void CVector::check_finite() const {
    for (const cplx& z : data_)
        if (!finite(z)) throw numeric_error("CVector: non-finite entry");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {
    require(rows >= 1 && cols >= 1, "CMatrix: dimensions must be >= 1");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(rows >= 1 && cols >= 1, "CMatrix: dimensions must be >= 1");
    require(data_.size() == rows * cols, "CMatrix: entry count != rows*cols");
    check_finite();
}

void CMatrix::check_finite() const {
    for (const cplx& z : data_)
        if (!finite(z)) throw numeric_error("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<cplx>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

double max_norm(const CMatrix& m) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i)
        v = std::max(v, std::abs(m.data()[i]));
    return v;
}

double max_norm(const CVector& v) {
    double r = 0.0;
    for (const cplx& z : v) r = std::max(r, std::abs(z));
    return r;
}

double one_norm(const CMatrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

CVector mat_vec(const CMatrix& m, const CVector& v) {
    require(m.cols() == v.size(), "mat_vec: dimension mismatch");
    CVector y(m.rows());
    kernels::cmat_vec(m.data(), m.rows(), m.cols(), v.data(), y.data());
    return y;
}

CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
    require(a.cols() == b.rows(), "mat_mul: dimension mismatch");
    CMatrix c(a.rows(), b.cols());
    kernels::cmat_mat(a.data(), b.data(), a.rows(), a.cols(), b.cols(), c.data());
    return c;
}

CMatrix mat_add(const CMatrix& a, const CMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "mat_add: dimension mismatch");
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        c.data()[i] = a.data()[i] + b.data()[i];
    return c;
}

CMatrix mat_sub(const CMatrix& a, const CMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "mat_sub: dimension mismatch");
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        c.data()[i] = a.data()[i] - b.data()[i];
    return c;
}

CMatrix mat_scale(const CMatrix& a, cplx s) {
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) c.data()[i] = s * a.data()[i];
    return c;
}

namespace {

struct LuFactors {
    CMatrix lu;
    std::vector<std::size_t> piv;
};

LuFactors lu_factor(CMatrix a) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> piv(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = std::abs(a.at(i, k));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw numeric_error("lu_factor: singular matrix", best);
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
        const cplx pivot = a.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = a.at(i, k) / pivot;
            a.at(i, k) = l;
            if (l == cplx(0.0, 0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) a.at(i, j) -= l * a.at(k, j);
        }
    }
    return {std::move(a), std::move(piv)};
}

void lu_solve_inplace(const LuFactors& f, cplx* b) {
    const std::size_t n = f.lu.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
        for (std::size_t i = k + 1; i < n; ++i) b[i] -= f.lu.at(i, k) * b[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j) b[k] -= f.lu.at(k, j) * b[j];
        b[k] /= f.lu.at(k, k);
    }
}

// Solves A X = B with B given row-major; works column by column.
CMatrix lu_solve_mat(const LuFactors& f, const CMatrix& b) {
    const std::size_t n = f.lu.rows();
    CMatrix x(n, b.cols());
    std::vector<cplx> col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b.at(i, j);
        lu_solve_inplace(f, col.data());
        for (std::size_t i = 0; i < n; ++i) x.at(i, j) = col[i];
    }
    return x;
}

}  // namespace

CVector lu_solve(const CMatrix& a, const CVector& b) {
    require(a.square(), "lu_solve: matrix must be square");
    require(a.rows() == b.size(), "lu_solve: dimension mismatch");
    LuFactors f = lu_factor(a);
    CVector x = b;
    lu_solve_inplace(f, x.data());
    x.check_finite();
    return x;
}

CMatrix mat_inverse(const CMatrix& m, const InverseOptions& opts) {
    require(m.square(), "mat_inverse: matrix must be square");
    const std::size_t n = m.rows();
    LuFactors f = lu_factor(m);
    CMatrix inv = lu_solve_mat(f, CMatrix::identity(n));
    inv.check_finite();

    // residual ||m*inv - I||_max
    CMatrix prod = mat_mul(m, inv);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx want = (i == j) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            residual = std::max(residual, std::abs(prod.at(i, j) - want));
        }
    if (residual > opts.residual_tol)
        throw numeric_error("mat_inverse: residual above tolerance", residual);
    const double cond = one_norm(m) * one_norm(inv);
    if (cond > opts.condition_cap)
        throw numeric_error("mat_inverse: condition estimate above cap", residual);
    return inv;
}

namespace {

// Degree thresholds for the 1-norm (Higham 2005).
constexpr double kPadeTheta3 = 1.495585217958292e-2;
constexpr double kPadeTheta5 = 2.539398330063230e-1;
constexpr double kPadeTheta7 = 9.504178996162932e-1;
constexpr double kPadeTheta9 = 2.097847961257068e0;
constexpr double kPadeTheta13 = 5.371920351148152e0;

CMatrix pade_solve(const CMatrix& u, const CMatrix& v) {
    // (V - U) F = (V + U)
    LuFactors f = lu_factor(mat_sub(v, u));
    return lu_solve_mat(f, mat_add(v, u));
}

CMatrix expm_pade_low(const CMatrix& b, int degree) {
    const std::size_t n = b.rows();
    const CMatrix eye = CMatrix::identity(n);
    const CMatrix b2 = mat_mul(b, b);
    if (degree == 3) {
        static const double c[] = {120, 60, 12, 1};
        CMatrix u = mat_mul(b, mat_add(mat_scale(b2, c[3]), mat_scale(eye, c[1])));
        CMatrix v = mat_add(mat_scale(b2, c[2]), mat_scale(eye, c[0]));
        return pade_solve(u, v);
    }
    const CMatrix b4 = mat_mul(b2, b2);
    if (degree == 5) {
        static const double c[] = {30240, 15120, 3360, 420, 30, 1};
        CMatrix u = mat_mul(b, mat_add(mat_add(mat_scale(b4, c[5]), mat_scale(b2, c[3])),
                                       mat_scale(eye, c[1])));
        CMatrix v = mat_add(mat_add(mat_scale(b4, c[4]), mat_scale(b2, c[2])),
                            mat_scale(eye, c[0]));
        return pade_solve(u, v);
    }
    const CMatrix b6 = mat_mul(b4, b2);
    if (degree == 7) {
        static const double c[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
        CMatrix u = mat_mul(
            b, mat_add(mat_add(mat_scale(b6, c[7]), mat_scale(b4, c[5])),
                       mat_add(mat_scale(b2, c[3]), mat_scale(eye, c[1]))));
        CMatrix v = mat_add(mat_add(mat_scale(b6, c[6]), mat_scale(b4, c[4])),
                            mat_add(mat_scale(b2, c[2]), mat_scale(eye, c[0])));
        return pade_solve(u, v);
    }
    // degree 9
    static const double c[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                               30270240.0,    2162160.0,    110880.0,     3960.0,
                               90.0,          1.0};
    const CMatrix b8 = mat_mul(b6, b2);
    CMatrix u = mat_mul(b, mat_add(mat_add(mat_scale(b8, c[9]), mat_scale(b6, c[7])),
                                   mat_add(mat_add(mat_scale(b4, c[5]), mat_scale(b2, c[3])),
                                           mat_scale(eye, c[1]))));
    CMatrix v = mat_add(mat_add(mat_scale(b8, c[8]), mat_scale(b6, c[6])),
                        mat_add(mat_add(mat_scale(b4, c[4]), mat_scale(b2, c[2])),
                                mat_scale(eye, c[0])));
    return pade_solve(u, v);
}

CMatrix expm_pade13(const CMatrix& b) {
    static const double c[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const std::size_t n = b.rows();
    const CMatrix eye = CMatrix::identity(n);
    const CMatrix b2 = mat_mul(b, b);
    const CMatrix b4 = mat_mul(b2, b2);
    const CMatrix b6 = mat_mul(b4, b2);

    CMatrix w1 = mat_add(mat_add(mat_scale(b6, c[13]), mat_scale(b4, c[11])),
                         mat_scale(b2, c[9]));
    CMatrix w2 = mat_add(mat_add(mat_scale(b6, c[7]), mat_scale(b4, c[5])),
                         mat_add(mat_scale(b2, c[3]), mat_scale(eye, c[1])));
    CMatrix u = mat_mul(b, mat_add(mat_mul(b6, w1), w2));

    CMatrix z1 = mat_add(mat_add(mat_scale(b6, c[12]), mat_scale(b4, c[10])),
                         mat_scale(b2, c[8]));
    CMatrix z2 = mat_add(mat_add(mat_scale(b6, c[6]), mat_scale(b4, c[4])),
                         mat_add(mat_scale(b2, c[2]), mat_scale(eye, c[0])));
    CMatrix v = mat_add(mat_mul(b6, z1), z2);
    return pade_solve(u, v);
}

}  // namespace

CMatrix expm(const CMatrix& m, double t) {
    require(m.square(), "expm: matrix must be square");
    require(std::isfinite(t), "expm: t must be finite");
    CMatrix b = mat_scale(m, t);
    const double norm = one_norm(b);
    if (!std::isfinite(norm)) throw numeric_error("expm: non-finite scaled input");

    if (norm <= kPadeTheta3) return expm_pade_low(b, 3);
    if (norm <= kPadeTheta5) return expm_pade_low(b, 5);
    if (norm <= kPadeTheta7) return expm_pade_low(b, 7);
    if (norm <= kPadeTheta9) return expm_pade_low(b, 9);

    int s = 0;
    if (norm > kPadeTheta13) {
        s = static_cast<int>(std::ceil(std::log2(norm / kPadeTheta13)));
        if (s > 64) throw numeric_error("expm: scaling stage overflow", norm);
        b = mat_scale(b, std::ldexp(1.0, -s));
    }
    CMatrix f = expm_pade13(b);
    for (int i = 0; i < s; ++i) {
        f = mat_mul(f, f);
        if (!std::isfinite(max_norm(f)))
            throw numeric_error("expm: overflow while squaring");
    }
    f.check_finite();
    return f;
}

CVector expm_action(const CMatrix& m, double t, const CVector& v, double tol) {
    require(m.square(), "expm_action: matrix must be square");
    require(m.cols() == v.size(), "expm_action: dimension mismatch");
    require(std::isfinite(t), "expm_action: t must be finite");
    const std::size_t n = m.rows();
    if (t == 0.0) return v;

    // Trace shift keeps the per-step Taylor series short; the scalar factor
    // is restored once per substep so intermediates stay in range.
    cplx mu(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) mu += m.at(i, i);
    mu /= static_cast<double>(n);
    CMatrix b = m;
    for (std::size_t i = 0; i < n; ++i) b.at(i, i) -= mu;

    const double shifted_norm = one_norm(b) * std::abs(t);
    constexpr double kStepNorm = 4.0;  // per-substep 1-norm target
    const double steps_needed = std::ceil(shifted_norm / kStepNorm);
    if (!(steps_needed < 1e8))
        throw numeric_error("expm_action: step size underflow", shifted_norm);
    const std::size_t s = std::max<std::size_t>(1, static_cast<std::size_t>(steps_needed));
    const double dt = t / static_cast<double>(s);
    const cplx step_factor = std::exp(mu * dt);
    if (!std::isfinite(step_factor.real()) || !std::isfinite(step_factor.imag()))
        throw numeric_error("expm_action: overflow in shift factor");

    constexpr int kMaxTerms = 80;
    std::vector<cplx> w(v.data(), v.data() + n);
    std::vector<cplx> term(n), next(n);
    for (std::size_t step = 0; step < s; ++step) {
        term = w;
        double prev_rel = std::numeric_limits<double>::max();
        bool converged = false;
        for (int k = 1; k <= kMaxTerms; ++k) {
            kernels::cmat_vec(b.data(), n, n, term.data(), next.data());
            const double scale = dt / static_cast<double>(k);
            double term_max = 0.0, acc_max = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                term[i] = next[i] * scale;
                w[i] += term[i];
                term_max = std::max(term_max, std::abs(term[i]));
                acc_max = std::max(acc_max, std::abs(w[i]));
            }
            const double rel = acc_max > 0.0 ? term_max / acc_max : term_max;
            if (rel <= tol && prev_rel <= tol) {
                converged = true;
                break;
            }
            prev_rel = rel;
        }
        if (!converged)
            throw numeric_error("expm_action: requested accuracy unreachable", prev_rel);
        for (std::size_t i = 0; i < n; ++i) w[i] *= step_factor;
    }
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i];
    out.check_finite();
    return out;
}

CMatrix neumann_inverse_check(const CMatrix& a, std::size_t terms) {
    require(a.square(), "neumann_inverse_check: matrix must be square");
    const std::size_t n = a.rows();
    CMatrix r = mat_sub(CMatrix::identity(n), a);
    if (!(max_norm(r) < 1.0))
        throw std::invalid_argument("neumann_inverse_check: ||I - a|| must be < 1");
    CMatrix sum = CMatrix::identity(n);
    CMatrix power = CMatrix::identity(n);
    for (std::size_t k = 1; k <= terms; ++k) {
        power = mat_mul(power, r);
        sum = mat_add(sum, power);
    }
    return sum;
}

}  // namespace asianctmc::linalg
