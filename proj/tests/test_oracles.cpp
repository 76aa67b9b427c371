#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>

#include "asianctmc/oracles.hpp"
#include "asianctmc/pricing.hpp"
#include "asianctmc/transforms.hpp"
#include "asianctmc/util.hpp"

using namespace asianctmc;
using chain::Chain;
using linalg::CVector;
using linalg::cplx;

namespace {

Chain single_state_chain(double x, double delta) {
    return Chain(chain::Generator(chain::StateGrid({x}), {0.0}), delta);
}

double max_gap(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("L_discrete at z = 0 is the n = 0 transform") {
    Chain c = chain::make_random_chain(4, 4, 0.25);
    const cplx theta(1.4, 0.8);
    const CVector l0 = oracles::L_discrete(c, 0.03, theta, cplx(0.0, 0.0));
    const CVector g0 = transforms::g_discrete(c, 0.03, {theta, 0, 0.25}).values;
    CHECK(max_gap(l0, g0) < 1e-13);
}

TEST_CASE("single-state L_discrete matches the scalar geometric series") {
    const double x1 = 0.9, delta = 0.5;
    Chain c = single_state_chain(x1, delta);
    const cplx theta(1.2, 0.4);
    const cplx z(0.3, 0.1);
    const CVector l = oracles::L_discrete(c, 0.0, theta, z);
    cplx direct(0.0, 0.0);
    for (int n = 0; n <= 400; ++n) {
        const cplx g = transforms::g_discrete(c, 0.0, {theta, n, delta}).values[0];
        direct += std::pow(z, n) * g;
    }
    CHECK(std::abs(l[0] - direct) < 1e-10);
}

TEST_CASE("power series of L_discrete sums back to the transform") {
    Chain c = chain::make_random_chain(31, 4, 0.25);
    const cplx theta(1.1, 0.6);
    const cplx z(0.21, 0.21);  // |z| ~ 0.3
    CVector sum(c.size());
    for (int n = 0; n <= 60; ++n) {
        const CVector g = transforms::g_discrete(c, 0.03, {theta, n, 0.25}).values;
        const cplx zn = std::pow(z, n);
        for (std::size_t i = 0; i < c.size(); ++i) sum[i] += zn * g[i];
    }
    const CVector l = oracles::L_discrete(c, 0.03, theta, z);
    CHECK(max_gap(sum, l) <= 1e-10);
}

TEST_CASE("z_coefficient recovers g_discrete") {
    // trivial n = 0 case plus randomized instances
    Chain c1 = single_state_chain(0.7, 0.25);
    const cplx theta(1.5, -0.4);
    const CVector c0 = oracles::z_coefficient(c1, 0.0, theta, 0);
    const CVector g0 = transforms::g_discrete(c1, 0.0, {theta, 0, 0.25}).values;
    CHECK(max_gap(c0, g0) < 1e-11);

    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        Chain c = chain::make_random_chain(seed, 2 + seed % 5, 0.25);
        CounterRng rng(seed, 13);
        const cplx th(0.5 + 2.0 * rng.next_double(), 3.0 * (rng.next_double() - 0.5));
        for (int n : {0, 1, 4, 8}) {
            const CVector coeff = oracles::z_coefficient(c, 0.03, th, n);
            const CVector direct = transforms::g_discrete(c, 0.03, {th, n, 0.25}).values;
            CHECK(max_gap(coeff, direct) <= 1e-9);
        }
    }
}

TEST_CASE("single-state L_continuous closed form and large-mu asymptotics") {
    const double x1 = 1.1;
    Chain c = single_state_chain(x1, 0.25);
    const cplx theta(0.9, 0.5);
    const cplx mu(4.0, 1.0);
    const double r = 0.02;
    const CVector l = oracles::L_continuous(c, r, theta, mu);
    const cplx m = 1.0 / (theta * x1 + mu);
    const cplx want = m / (theta * theta) - 1.0 / (theta * theta * mu) +
                      x1 / (theta * mu * (mu - r));
    CHECK(std::abs(l[0] - want) < 1e-14);

    // mu * m -> 1 entrywise for large real mu
    Chain c4 = chain::make_random_chain(8, 4, 0.25);
    const double big = 1e7;
    const CVector lb = oracles::L_continuous(c4, r, theta, cplx(big, 0.0));
    for (std::size_t i = 0; i < c4.size(); ++i) {
        const cplx m_i = (lb[i] + 1.0 / (theta * theta * big) -
                          c4.grid()[i] / (theta * big * (big - r))) *
                         (theta * theta);
        CHECK(std::abs(m_i * big - 1.0) < 1e-5);
    }
}

TEST_CASE("forward quadrature of g_continuous matches L_continuous") {
    Chain c = chain::make_random_chain(12, 3, 0.25);
    const cplx theta(1.2, 0.5);
    const double r = 0.03;
    const double bound = oracles::mu_norm_bound(c, theta);
    const double mu = 2.0 * bound;
    const CVector want = oracles::L_continuous(c, r, theta, cplx(mu, 0.0));

    // int_0^inf e^{-mu t} g_c(t) dt by composite Simpson; the integrand decays
    // like e^{-(mu - r) t} so the truncation point only needs mu*T >> 1
    const double t_max = 45.0 / mu;
    const int steps = 2000;  // even
    const double h = t_max / steps;
    CVector acc(c.size());
    for (int k = 0; k <= steps; ++k) {
        const double t = k * h;
        const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        const CVector g = transforms::g_continuous(c, r, {theta, t}).values;
        const double damp = std::exp(-mu * t) * w * h / 3.0;
        for (std::size_t i = 0; i < c.size(); ++i) acc[i] += damp * g[i];
    }
    CHECK(max_gap(acc, want) <= 1e-8);
}

TEST_CASE("mu_invert recovers g_continuous") {
    Chain c1 = single_state_chain(0.8, 0.25);
    const cplx theta(1.0, 0.7);
    const CVector inv1 = oracles::mu_invert(c1, 0.0, theta, 1.0);
    const CVector g1 = transforms::g_continuous(c1, 0.0, {theta, 1.0}).values;
    CHECK(max_gap(inv1, g1) < 1e-7);

    for (std::uint64_t seed : {11u, 12u, 13u}) {
        Chain c = chain::make_random_chain(seed, 4, 0.25);
        const CVector inv = oracles::mu_invert(c, 0.03, theta, 1.0);
        const CVector g = transforms::g_continuous(c, 0.03, {theta, 1.0}).values;
        CHECK(max_gap(inv, g) <= 1e-6);
    }

    // t -> 0+ limit: the transform vanishes
    Chain c = chain::make_random_chain(14, 3, 0.25);
    const CVector small = oracles::mu_invert(c, 0.03, theta, 1e-4);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(small[i]) < 1e-3);
}

TEST_CASE("double-transform query bounds are enforced") {
    Chain c = chain::make_random_chain(15, 3, 0.25);
    const cplx theta(1.0, 0.2);
    const double zb = oracles::z_radius_bound(c, 0.05, theta);
    CHECK_NOTHROW(oracles::DiscreteDoubleQuery::make(c, 0.05, theta, 0.5 * zb));
    CHECK_THROWS_AS(oracles::DiscreteDoubleQuery::make(c, 0.05, theta, 1.1 * zb),
                    std::domain_error);
    const double mb = oracles::mu_norm_bound(c, theta);
    CHECK_NOTHROW(oracles::ContinuousDoubleQuery::make(c, theta, 2.0 * mb));
    CHECK_THROWS_AS(oracles::ContinuousDoubleQuery::make(c, theta, 0.5 * mb),
                    std::domain_error);
    CHECK_THROWS_AS(oracles::L_discrete(c, 0.05, theta, cplx(1.5, 0.0)),
                    std::domain_error);
}

TEST_CASE("enumeration handles the degenerate cases") {
    Chain c1 = single_state_chain(1.2, 0.25);
    for (int n : {0, 3}) {
        const double maturity = n == 0 ? 1.0 : n * 0.25;
        const double got = oracles::enumerate_discrete_price(c1, 0.05, maturity, n, 0.9, 0);
        const double want = std::exp(-0.05 * maturity) * (1.2 - 0.9);
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }

    Chain c = chain::make_random_chain(16, 3, 0.25);
    const double one_obs = oracles::enumerate_discrete_price(c, 0.02, 1.0, 0, 0.5, 1);
    CHECK(one_obs ==
          doctest::Approx(std::exp(-0.02) * std::max(c.grid()[1] - 0.5, 0.0)));

    CHECK_THROWS_AS(oracles::enumerate_discrete_price(c, 0.02, 5.0, 20, 0.5, 0),
                    std::invalid_argument);
}

TEST_CASE("enumeration agrees with the transform pipeline on tiny chains") {
    inversion::InversionConfig cfg;
    cfg.a_param = 28.0;
    cfg.series_terms = 400;
    cfg.euler_terms = 30;
    for (std::uint64_t seed : {21u, 22u, 23u, 24u}) {
        Chain c = chain::make_random_chain(seed, 4, 0.25);
        const double maturity = 1.0;
        const double strike = 0.9 * (c.grid()[1] + c.grid()[2]) / 2.0;
        const double exact =
            oracles::enumerate_discrete_price(c, 0.03, maturity, 4, strike, 1);
        const double piped =
            pricing::price_discrete_chain(c, 0.03, maturity, 4, strike, 1, cfg);
        CHECK(std::abs(exact - piped) <= 1e-6);
    }
}

TEST_CASE("Monte Carlo on a single state is exact with zero error") {
    Chain c1 = single_state_chain(1.5, 0.25);
    const auto mc = oracles::mc_continuous_price(c1, 0.04, 2.0, 1.2, 0, {5000, 7, 16});
    const double want = std::exp(-0.04 * 2.0) * (1.5 - 1.2);
    CHECK(mc.price == doctest::Approx(want).epsilon(1e-14));
    CHECK(mc.std_error == 0.0);
}

TEST_CASE("Monte Carlo matches the two-state occupation-time mean at zero strike") {
    // symmetric two-state chain: E[A_T]/T = average of x weighted by occupation
    const double lam = 2.0;
    Chain c(chain::Generator(chain::StateGrid({1.0, 3.0}),
                             {-lam, lam, lam, -lam}),
            0.25);
    const double maturity = 1.5;
    const auto mc = oracles::mc_continuous_price(c, 0.0, maturity, 0.0, 0, {200000, 11, 32});
    // occupation of the start state over [0,T]: 1/2 + (1 - e^{-2 lam T})/(4 lam T)
    const double occ0 = 0.5 + (1.0 - std::exp(-2.0 * lam * maturity)) /
                                  (4.0 * lam * maturity);
    const double want = occ0 * 1.0 + (1.0 - occ0) * 3.0;
    CHECK(std::abs(mc.price - want) <= 3.0 * mc.std_error + 1e-12);
}

TEST_CASE("Monte Carlo is reproducible and thread-count invariant") {
    Chain c = chain::make_random_chain(33, 5, 0.25);
    const oracles::McConfig cfg{20000, 99, 16};
    const auto a = oracles::mc_continuous_price(c, 0.03, 1.0, 1.0, 2, cfg);
    const auto b = oracles::mc_continuous_price(c, 0.03, 1.0, 1.0, 2, cfg);
    CHECK(a.price == b.price);
    CHECK(a.std_error == b.std_error);

    setenv("ASIANCTMC_THREADS", "1", 1);
    const auto serial = oracles::mc_continuous_price(c, 0.03, 1.0, 1.0, 2, cfg);
    unsetenv("ASIANCTMC_THREADS");
    CHECK(serial.price == a.price);
    CHECK(serial.std_error == a.std_error);
}

TEST_CASE("Monte Carlo brackets the continuous pipeline price") {
    Chain c = chain::make_random_chain(44, 6, 0.25);
    const double strike = (c.grid()[2] + c.grid()[3]) / 2.0;
    const double piped = pricing::price_continuous_chain(c, 0.03, 1.0, strike, 2);
    const auto mc = oracles::mc_continuous_price(c, 0.03, 1.0, strike, 2, {400000, 5, 32});
    CHECK(std::abs(piped - mc.price) <= 3.0 * mc.std_error);
}
