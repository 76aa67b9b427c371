#include "asianctmc/oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "asianctmc/util.hpp"

namespace asianctmc::oracles {

using linalg::CMatrix;

namespace {

void check_theta(cplx theta) {
    if (!(theta.real() > 0.0)) throw std::domain_error("oracle: Re(theta) must be > 0");
}

}  // namespace

double z_radius_bound(const Chain& c, double r, cplx theta) {
    check_theta(theta);
    const std::size_t n = c.size();
    const CMatrix& p = c.p_delta();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = std::exp(-theta.real() * c.grid()[i]);
        for (std::size_t j = 0; j < n; ++j)
            mx = std::max(mx, wi * std::abs(p.at(i, j)));
    }
    double bound = std::min(1.0, std::exp(-r * *c.delta()));
    if (mx > 0.0) bound = std::min(bound, 1.0 / mx);
    return bound;
}

double mu_norm_bound(const Chain& c, cplx theta) {
    check_theta(theta);
    const std::size_t n = c.size();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx v = c.generator().rate(i, j);
            if (i == j) v -= theta * c.grid()[i];
            mx = std::max(mx, std::abs(v));
        }
    return mx;
}

DiscreteDoubleQuery DiscreteDoubleQuery::make(const Chain& c, double r, cplx theta,
                                              cplx z) {
    if (!(std::abs(z) < z_radius_bound(c, r, theta)))
        throw std::domain_error("DiscreteDoubleQuery: |z| outside the admissible radius");
    return {theta, z};
}

ContinuousDoubleQuery ContinuousDoubleQuery::make(const Chain& c, cplx theta, cplx mu) {
    if (!(std::abs(mu) > mu_norm_bound(c, theta)))
        throw std::domain_error("ContinuousDoubleQuery: |mu| must exceed ||G - theta D||");
    return {theta, mu};
}

CVector L_discrete(const Chain& c, double r, cplx theta, cplx z) {
    check_theta(theta);
    const double bound = z_radius_bound(c, r, theta);
    if (!(std::abs(z) < bound))
        throw std::domain_error("L_discrete: |z| outside the admissible radius");

    const std::size_t n = c.size();
    const CMatrix& p = c.p_delta();
    CMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) b.at(i, j) = -z * p.at(i, j);
        b.at(i, i) += std::exp(theta * c.grid()[i]);
    }
    // strict diagonal dominance (Levy-Desplanques invertibility)
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(b.at(i, j));
        if (!(std::abs(b.at(i, i)) > off))
            throw std::domain_error("L_discrete: matrix not strictly diagonally dominant");
    }

    CVector ones(n);
    for (std::size_t i = 0; i < n; ++i) ones[i] = 1.0;
    CVector m = linalg::lu_solve(b, ones);

    const cplx inv_t2 = 1.0 / (theta * theta);
    const cplx one_minus_z = 1.0 - z;
    const cplx one_minus_zer = 1.0 - z * std::exp(r * *c.delta());
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = inv_t2 * m[i] - inv_t2 / one_minus_z +
                 c.grid()[i] / (theta * one_minus_z * one_minus_zer);
    out.check_finite();
    return out;
}

CVector z_coefficient(const Chain& c, double r, cplx theta, int n) {
    check_theta(theta);
    if (n < 0) throw std::invalid_argument("z_coefficient: n must be >= 0");
    const std::size_t states = c.size();
    const double rho = 0.5 * z_radius_bound(c, r, theta);

    auto contour_sum = [&](std::size_t nodes) {
        std::vector<cplx> acc(states, cplx(0.0, 0.0));
        for (std::size_t m = 0; m < nodes; ++m) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(m) /
                                 static_cast<double>(nodes);
            const cplx z = rho * std::exp(cplx(0.0, angle));
            const CVector lv = L_discrete(c, r, theta, z);
            const cplx twiddle = std::exp(cplx(0.0, -angle * n));
            for (std::size_t i = 0; i < states; ++i) acc[i] += lv[i] * twiddle;
        }
        const double scale = 1.0 / (static_cast<double>(nodes) * std::pow(rho, n));
        for (auto& v : acc) v *= scale;
        return acc;
    };

    std::size_t nodes = std::max<std::size_t>(4 * (static_cast<std::size_t>(n) + 1), 32);
    std::vector<cplx> coarse = contour_sum(nodes);
    constexpr double kAgreeTol = 1e-11;
    for (int rounds = 0; rounds < 8; ++rounds) {
        nodes *= 2;
        std::vector<cplx> fine = contour_sum(nodes);
        double diff = 0.0;
        for (std::size_t i = 0; i < states; ++i)
            diff = std::max(diff, std::abs(fine[i] - coarse[i]));
        if (diff < kAgreeTol) return CVector(std::move(fine));
        coarse = std::move(fine);
    }
    throw linalg::numeric_error("z_coefficient: contour quadrature did not settle");
}

CVector L_continuous(const Chain& c, double r, cplx theta, cplx mu) {
    check_theta(theta);
    if (std::abs(mu) < 1e-300) throw std::domain_error("L_continuous: mu must be nonzero");
    if (std::abs(mu - r) < 1e-14 * std::max(1.0, std::abs(mu)))
        throw std::domain_error("L_continuous: mu must differ from r");

    const std::size_t n = c.size();
    CMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) b.at(i, j) = -c.generator().rate(i, j);
        b.at(i, i) += theta * c.grid()[i] + mu;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) off += std::abs(b.at(i, j));
        if (!(std::abs(b.at(i, i)) > off))
            throw std::domain_error(
                "L_continuous: resolvent not strictly diagonally dominant");
    }

    CVector ones(n);
    for (std::size_t i = 0; i < n; ++i) ones[i] = 1.0;
    CVector m = linalg::lu_solve(b, ones);

    const cplx inv_t2 = 1.0 / (theta * theta);
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = inv_t2 * m[i] - inv_t2 / mu + c.grid()[i] / (theta * mu * (mu - r));
    out.check_finite();
    return out;
}

CVector mu_invert(const Chain& c, double r, cplx theta, double t,
                  const InversionConfig& cfg) {
    check_theta(theta);
    if (!(t > 0.0)) throw std::invalid_argument("mu_invert: t must be > 0");
    const std::size_t states = c.size();
    const int count = cfg.series_terms + cfg.euler_terms + 1;
    const double damp = std::exp(0.5 * cfg.a_param) / t;

    // L_continuous is not conjugate-symmetric in mu (theta is complex), so
    // the transforms of Re g and Im g are assembled from mu and conj(mu).
    std::vector<std::vector<cplx>> plus(count), minus(count);
    parallel_for(static_cast<std::size_t>(count), [&](std::size_t j) {
        const cplx mu(cfg.a_param / (2.0 * t),
                      std::numbers::pi * static_cast<double>(j) / t);
        CVector vp = L_continuous(c, r, theta, mu);
        CVector vm = L_continuous(c, r, theta, std::conj(mu));
        plus[j].assign(vp.data(), vp.data() + states);
        minus[j].assign(vm.data(), vm.data() + states);
    });

    std::vector<double> w(cfg.euler_terms + 1);
    w[0] = std::ldexp(1.0, -cfg.euler_terms);
    for (int j = 1; j <= cfg.euler_terms; ++j)
        w[j] = w[j - 1] * static_cast<double>(cfg.euler_terms - j + 1) / j;

    CVector out(states);
    for (std::size_t i = 0; i < states; ++i) {
        double part_re = 0.0, part_im = 0.0;
        std::vector<double> sums_re(count), sums_im(count);
        for (int j = 0; j < count; ++j) {
            const cplx lp = plus[j][i];
            const cplx lm = std::conj(minus[j][i]);
            const cplx f_re = 0.5 * (lp + lm);            // transform of Re g
            const cplx f_im = cplx(0.0, -0.5) * (lp - lm);  // transform of Im g
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            const double factor = (j == 0 ? 0.5 : 1.0) * damp * sign;
            part_re += factor * f_re.real();
            part_im += factor * f_im.real();
            sums_re[j] = part_re;
            sums_im[j] = part_im;
        }
        double val_re = 0.0, val_im = 0.0;
        for (int j = 0; j <= cfg.euler_terms; ++j) {
            val_re += w[j] * sums_re[cfg.series_terms + j];
            val_im += w[j] * sums_im[cfg.series_terms + j];
        }
        out[i] = cplx(val_re, val_im);
    }
    out.check_finite();
    return out;
}

double enumerate_discrete_price(const Chain& c, double r, double maturity, int n,
                                double strike, std::size_t start_state) {
    if (n < 0) throw std::invalid_argument("enumerate_discrete_price: n must be >= 0");
    if (start_state >= c.size())
        throw std::invalid_argument("enumerate_discrete_price: start state out of range");
    const std::size_t states = c.size();
    double paths = 1.0;
    for (int i = 0; i < n; ++i) {
        paths *= static_cast<double>(states);
        if (paths > 1e7)
            throw std::invalid_argument("enumerate_discrete_price: instance too large");
    }
    const double k_point = (n + 1) * strike;
    if (n == 0) {
        const double payoff = std::max(c.grid()[start_state] - k_point, 0.0);
        return std::exp(-r * maturity) * payoff;
    }
    const double delta = maturity / n;
    if (!c.delta() || std::abs(*c.delta() - delta) > 1e-12 * std::max(1.0, delta))
        throw std::invalid_argument("enumerate_discrete_price: chain delta != T/n");
    const CMatrix& p = c.p_delta();

    double expectation = 0.0;
    // DFS over state paths; probability and running sum carried down.
    struct Frame {
        std::size_t state;
        double prob;
        double sum;
        int step;
    };
    std::vector<Frame> stack;
    stack.push_back({start_state, 1.0, c.grid()[start_state], 0});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.step == n) {
            expectation += f.prob * std::max(f.sum - k_point, 0.0);
            continue;
        }
        for (std::size_t j = 0; j < states; ++j) {
            const double pj = p.at(f.state, j).real();
            if (pj <= 0.0) continue;
            stack.push_back({j, f.prob * pj, f.sum + c.grid()[j], f.step + 1});
        }
    }
    return std::exp(-r * maturity) / (n + 1) * expectation;
}

McResult mc_continuous_price(const Chain& c, double r, double maturity, double strike,
                             std::size_t start_state, const McConfig& cfg) {
    if (cfg.paths < 1) throw std::invalid_argument("mc_continuous_price: paths >= 1");
    if (start_state >= c.size())
        throw std::invalid_argument("mc_continuous_price: start state out of range");
    if (!(maturity > 0.0))
        throw std::invalid_argument("mc_continuous_price: maturity must be > 0");

    const std::size_t states = c.size();
    const double k_point = maturity * strike;
    const std::size_t batches = std::max<std::size_t>(
        1, std::min<std::size_t>(cfg.batches, cfg.paths));
    const std::uint64_t base = cfg.paths / batches;
    const std::uint64_t extra = cfg.paths % batches;

    std::vector<double> batch_sum(batches, 0.0);
    std::vector<double> batch_count(batches, 0.0);
    parallel_for(batches, [&](std::size_t bi) {
        const std::uint64_t lo = bi * base + std::min<std::uint64_t>(bi, extra);
        const std::uint64_t hi = lo + base + (bi < extra ? 1 : 0);
        double acc = 0.0;
        for (std::uint64_t path = lo; path < hi; ++path) {
            CounterRng rng(cfg.seed, path);
            std::size_t s = start_state;
            double t = 0.0, area = 0.0;
            while (true) {
                const double rate = -c.generator().rate(s, s);
                if (!(rate > 1e-300)) {  // absorbing state: holds forever
                    area += c.grid()[s] * (maturity - t);
                    break;
                }
                const double hold = -std::log1p(-rng.next_double()) / rate;
                if (t + hold >= maturity) {
                    area += c.grid()[s] * (maturity - t);
                    break;
                }
                area += c.grid()[s] * hold;
                t += hold;
                const double target = rng.next_double() * rate;
                double cum = 0.0;
                std::size_t next = s;
                for (std::size_t j = 0; j < states; ++j) {
                    if (j == s) continue;
                    const double q = c.generator().rate(s, j);
                    if (q <= 0.0) continue;
                    cum += q;
                    next = j;
                    if (cum >= target) break;
                }
                s = next;
            }
            acc += std::max(area - k_point, 0.0);
        }
        batch_sum[bi] = acc;
        batch_count[bi] = static_cast<double>(hi - lo);
    });

    const double total = pairwise_sum(batch_sum.data(), batches);
    const double npaths = static_cast<double>(cfg.paths);
    const double scale = std::exp(-r * maturity) / maturity;
    const double price = scale * total / npaths;

    double se = 0.0;
    if (batches > 1) {
        std::vector<double> means(batches);
        for (std::size_t b = 0; b < batches; ++b)
            means[b] = scale * batch_sum[b] / batch_count[b];
        const double mbar = pairwise_sum(means.data(), batches) / batches;
        double var = 0.0;
        for (double m : means) var += (m - mbar) * (m - mbar);
        var /= static_cast<double>(batches - 1);
        se = std::sqrt(var / static_cast<double>(batches));
    }
    return {price, se};
}

}  // namespace asianctmc::oracles
