#include "asianctmc/inversion.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "asianctmc/util.hpp"

namespace asianctmc::inversion {

namespace {

void check_cfg(const InversionConfig& cfg, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("invert_laplace: k must be > 0");
    if (!(cfg.a_param > 0.0))
        throw std::invalid_argument("invert_laplace: a_param must be > 0");
    if (cfg.series_terms < 1 || cfg.euler_terms < 1)
        throw std::invalid_argument("invert_laplace: series/euler terms must be >= 1");
}

std::vector<double> binomial_weights(int m) {
    std::vector<double> w(m + 1);
    w[0] = std::ldexp(1.0, -m);  // 2^-m
    for (int j = 1; j <= m; ++j) w[j] = w[j - 1] * static_cast<double>(m - j + 1) / j;
    return w;
}

// Assembles the Euler average from the per-j damped series terms.
InversionResult reduce_terms(const std::vector<double>& terms,
                             const InversionConfig& cfg) {
    const int n = cfg.series_terms, m = cfg.euler_terms;
    std::vector<double> partial(terms.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        acc += terms[j];
        partial[j] = acc;
    }
    const std::vector<double> w = binomial_weights(m);
    double value = 0.0, shifted = 0.0;
    for (int j = 0; j <= m; ++j) {
        value += w[j] * partial[n + j];
        shifted += w[j] * partial[n - 1 + j];
    }
    const double proxy = std::abs(value - shifted);
    return {value, proxy, proxy > cfg.warn_cap};
}

}  // namespace

InversionResult invert_laplace(const std::function<cplx(cplx)>& g, double k,
                               const InversionConfig& cfg) {
    check_cfg(cfg, k);
    const int count = cfg.series_terms + cfg.euler_terms + 1;
    const double damp = std::exp(0.5 * cfg.a_param) / k;
    std::vector<double> terms(count);
    for (int j = 0; j < count; ++j) {
        const cplx theta(cfg.a_param / (2.0 * k), std::numbers::pi * j / k);
        const cplx gj = g(theta);
        if (!std::isfinite(gj.real()) || !std::isfinite(gj.imag()))
            throw linalg::numeric_error("invert_laplace: non-finite transform value");
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        terms[j] = (j == 0 ? 0.5 : 1.0) * damp * sign * gj.real();
    }
    return reduce_terms(terms, cfg);
}

InversionResult invert_vector(const std::function<CVector(cplx)>& g_vec, double k,
                              const InversionConfig& cfg, std::size_t state_index) {
    check_cfg(cfg, k);
    const int count = cfg.series_terms + cfg.euler_terms + 1;
    const double damp = std::exp(0.5 * cfg.a_param) / k;
    std::vector<std::vector<cplx>> values(count);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
        const cplx theta(cfg.a_param / (2.0 * k),
                         std::numbers::pi * static_cast<double>(j) / k);
        CVector v = g_vec(theta);
        values[j].assign(v.data(), v.data() + v.size());
    });
    if (state_index >= values[0].size())
        throw std::invalid_argument("invert_vector: state index out of range");
    std::vector<double> terms(count);
    for (int j = 0; j < count; ++j) {
        const cplx gj = values[j][state_index];
        if (!std::isfinite(gj.real()) || !std::isfinite(gj.imag()))
            throw linalg::numeric_error("invert_vector: non-finite transform value");
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        terms[j] = (j == 0 ? 0.5 : 1.0) * damp * sign * gj.real();
    }
    return reduce_terms(terms, cfg);
}

}  // namespace asianctmc::inversion
