#include <doctest.h>

#include <complex>
#include <vector>

#include "asianctmc/kernels.hpp"
#include "asianctmc/util.hpp"

using namespace asianctmc;
using kernels::cplx;

namespace {

std::vector<cplx> random_cvec(std::uint64_t seed, std::size_t n) {
    CounterRng rng(seed, 1);
    std::vector<cplx> v(n);
    for (auto& z : v) z = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
    return v;
}

std::vector<double> random_rvec(std::uint64_t seed, std::size_t n) {
    CounterRng rng(seed, 2);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_double() - 0.5;
    return v;
}

double max_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
    if (kernels::best_supported_backend() != kernels::Backend::avx2) {
        MESSAGE("avx2 not available on this host; dispatch test skipped");
        return;
    }
    // odd and even sizes exercise every tail path
    for (std::size_t rows : {1u, 2u, 3u, 5u, 8u, 13u, 50u}) {
        for (std::size_t cols : {1u, 2u, 3u, 7u, 16u, 33u}) {
            const auto a = random_cvec(rows * 131 + cols, rows * cols);
            const auto p = random_rvec(rows * 17 + cols, rows * cols);
            const auto x = random_cvec(cols, cols);

            std::vector<cplx> ys(rows), yv(rows);
            kernels::scalar::cmat_vec(a.data(), rows, cols, x.data(), ys.data());
            kernels::avx2::cmat_vec(a.data(), rows, cols, x.data(), yv.data());
            CHECK(max_gap(ys, yv) < 1e-12);

            kernels::scalar::rmat_cvec(p.data(), rows, cols, x.data(), ys.data());
            kernels::avx2::rmat_cvec(p.data(), rows, cols, x.data(), yv.data());
            CHECK(max_gap(ys, yv) < 1e-12);

            std::vector<cplx> ds(cols), dv(cols);
            const auto d = random_cvec(cols + 7, cols);
            kernels::scalar::cdiag_vec(d.data(), x.data(), cols, ds.data());
            kernels::avx2::cdiag_vec(d.data(), x.data(), cols, dv.data());
            CHECK(max_gap(ds, dv) < 1e-14);
        }
    }
    for (std::size_t m : {1u, 3u, 8u}) {
        for (std::size_t k : {2u, 5u, 16u}) {
            for (std::size_t n : {1u, 4u, 11u}) {
                const auto a = random_cvec(m * k, m * k);
                const auto b = random_cvec(k * n + 3, k * n);
                std::vector<cplx> cs(m * n), cv(m * n);
                kernels::scalar::cmat_mat(a.data(), b.data(), m, k, n, cs.data());
                kernels::avx2::cmat_mat(a.data(), b.data(), m, k, n, cv.data());
                CHECK(max_gap(cs, cv) < 1e-12);
            }
        }
    }
}

TEST_CASE("backend switch is honored and reverts") {
    const kernels::Backend original = kernels::active_backend();
    CHECK(kernels::set_backend(kernels::Backend::scalar));
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    if (kernels::best_supported_backend() == kernels::Backend::avx2) {
        CHECK(kernels::set_backend(kernels::Backend::avx2));
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
    kernels::set_backend(original);
}

TEST_CASE("dispatched results match the scalar reference") {
    const std::size_t n = 23;
    const auto a = random_cvec(99, n * n);
    const auto x = random_cvec(100, n);
    std::vector<cplx> want(n), got(n);
    kernels::scalar::cmat_vec(a.data(), n, n, x.data(), want.data());
    kernels::cmat_vec(a.data(), n, n, x.data(), got.data());
    CHECK(max_gap(want, got) < 1e-12);
}
