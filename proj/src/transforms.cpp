#include "asianctmc/transforms.hpp"

#include <cmath>

#include "asianctmc/kernels.hpp"

namespace asianctmc::transforms {

using linalg::CMatrix;

namespace {

void check_theta(cplx theta) {
    if (!(theta.real() > 0.0))
        throw std::domain_error("transform: Re(theta) must be > 0");
}

void check_delta(const Chain& c, double delta) {
    if (!c.delta() || std::abs(*c.delta() - delta) > 1e-12 * std::max(1.0, delta))
        throw std::invalid_argument("transform: query delta does not match the chain's");
}

std::vector<cplx> exp_neg_theta_d(const Chain& c, cplx theta) {
    std::vector<cplx> w(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) w[i] = std::exp(-theta * c.grid()[i]);
    return w;
}

CVector assemble(const Chain& c, cplx theta, const std::vector<cplx>& core, double geo) {
    const cplx inv_t2 = 1.0 / (theta * theta);
    CVector out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        out[i] = inv_t2 * core[i] - inv_t2 + c.grid()[i] / theta * geo;
    out.check_finite();
    return out;
}

}  // namespace

double geometric_growth_sum(double r, double delta, int n) {
    if (n < 0) throw std::invalid_argument("geometric_growth_sum: n must be >= 0");
    const double rd = r * delta;
    if (std::abs(rd) < 1e-8) {
        // explicit series through the removable singularity
        double s = 0.0;
        for (int j = 0; j <= n; ++j) s += std::exp(rd * j);
        return s;
    }
    return -std::expm1(rd * (n + 1)) / -std::expm1(rd);
}

TransformResult g_discrete(const Chain& c, double r, const DiscreteQuery& q) {
    check_theta(q.theta);
    if (q.n < 0) throw std::invalid_argument("g_discrete: n must be >= 0");
    check_delta(c, q.delta);

    const std::size_t n_states = c.size();
    const std::vector<cplx> w = exp_neg_theta_d(c, q.theta);
    std::vector<cplx> v(w);  // e^{-theta D} 1
    std::vector<cplx> pv(n_states);
    const CMatrix& p = c.p_delta();
    std::vector<double> p_real(n_states * n_states);
    for (std::size_t i = 0; i < n_states * n_states; ++i) p_real[i] = p.data()[i].real();

    for (int step = 0; step < q.n; ++step) {
        kernels::rmat_cvec(p_real.data(), n_states, n_states, v.data(), pv.data());
        kernels::cdiag_vec(w.data(), pv.data(), n_states, v.data());
    }
    return {assemble(c, q.theta, v, geometric_growth_sum(r, q.delta, q.n)),
            Strategy::backward};
}

TransformResult g_discrete_forward(const Chain& c, double r, const DiscreteQuery& q) {
    check_theta(q.theta);
    if (q.n < 0) throw std::invalid_argument("g_discrete_forward: n must be >= 0");
    check_delta(c, q.delta);

    const std::size_t n_states = c.size();
    const std::vector<cplx> w = exp_neg_theta_d(c, q.theta);

    // M = e^{-theta D} P(delta)
    CMatrix m(n_states, n_states);
    const CMatrix& p = c.p_delta();
    for (std::size_t i = 0; i < n_states; ++i)
        for (std::size_t j = 0; j < n_states; ++j) m.at(i, j) = w[i] * p.at(i, j);

    CMatrix power = CMatrix::identity(n_states);
    for (int step = 0; step < q.n; ++step) power = linalg::mat_mul(power, m);

    std::vector<cplx> core(n_states);
    kernels::cmat_vec(power.data(), n_states, n_states, w.data(), core.data());
    return {assemble(c, q.theta, core, geometric_growth_sum(r, q.delta, q.n)),
            Strategy::forward};
}

TransformResult g_continuous(const Chain& c, double r, const ContinuousQuery& q,
                             Strategy strategy) {
    check_theta(q.theta);
    if (!(q.t >= 0.0)) throw std::invalid_argument("g_continuous: t must be >= 0");

    const std::size_t n = c.size();
    // A = G - theta D
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a.at(i, j) = c.generator().rate(i, j);
        a.at(i, i) -= q.theta * c.grid()[i];
    }

    CVector ones(n);
    for (std::size_t i = 0; i < n; ++i) ones[i] = 1.0;

    CVector core(n);
    if (strategy == Strategy::full_expm) {
        core = linalg::mat_vec(linalg::expm(a, q.t), ones);
    } else {
        strategy = Strategy::expm_action;
        core = linalg::expm_action(a, q.t, ones);
    }

    // (e^{rt} - 1)/r with the r -> 0 limit t
    const double growth = std::abs(r) < 1e-14 ? q.t : std::expm1(r * q.t) / r;
    const cplx inv_t2 = 1.0 / (q.theta * q.theta);
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = inv_t2 * core[i] - inv_t2 + c.grid()[i] / q.theta * growth;
    out.check_finite();
    return {std::move(out), strategy};
}

}  // namespace asianctmc::transforms
