#include <doctest.h>

#include <cmath>
#include <complex>

#include "asianctmc/chain.hpp"
#include "asianctmc/inversion.hpp"
#include "asianctmc/transforms.hpp"

using namespace asianctmc;
using inversion::InversionConfig;
using linalg::CVector;
using linalg::cplx;

TEST_CASE("closed-form transform pairs invert to 1e-8") {
    const InversionConfig cfg;
    {
        auto g = [](cplx t) { return 1.0 / (t * t); };  // f(k) = k
        const auto r = inversion::invert_laplace(g, 1.0, cfg);
        CHECK(std::abs(r.value - 1.0) <= 1e-8);
        CHECK(!r.warn);
    }
    {
        auto g = [](cplx t) { return 1.0 / (t * (t + 1.0)); };  // f(k) = 1 - e^{-k}
        const auto r = inversion::invert_laplace(g, 2.0, cfg);
        CHECK(std::abs(r.value - (1.0 - std::exp(-2.0))) <= 1e-8);
    }
    {
        const double c = 1.0;  // f(k) = (c - k)^+
        auto g = [c](cplx t) { return (c * t + std::exp(-c * t) - 1.0) / (t * t); };
        const auto r = inversion::invert_laplace(g, 0.5, cfg);
        CHECK(std::abs(r.value - 0.5) <= 1e-8);
    }
}

TEST_CASE("single-state continuous transform inverts to the constant-path payoff") {
    chain::Chain c(chain::Generator(chain::StateGrid({1.0}), {0.0}), 0.25);
    auto g = [&](cplx theta) {
        return transforms::g_continuous(c, 0.0, {theta, 1.0}).values[0];
    };
    // f(k) = (1*1 - k)^+ at k = 0.5
    const auto r = inversion::invert_laplace(g, 0.5, {});
    CHECK(std::abs(r.value - 0.5) <= 1e-8);
}

TEST_CASE("invert_vector selects components and shares evaluations") {
    chain::Chain c = chain::make_random_chain(5, 3, 0.25);
    auto g_vec = [&](cplx theta) {
        return transforms::g_discrete(c, 0.02, {theta, 4, 0.25}).values;
    };
    for (std::size_t idx = 0; idx < c.size(); ++idx) {
        auto g_one = [&, idx](cplx theta) {
            return transforms::g_discrete(c, 0.02, {theta, 4, 0.25}).values[idx];
        };
        const auto via_vec = inversion::invert_vector(g_vec, 1.8, {}, idx);
        const auto via_scalar = inversion::invert_laplace(g_one, 1.8, {});
        CHECK(via_vec.value == doctest::Approx(via_scalar.value).epsilon(1e-14));
        CHECK(via_vec.error_proxy == doctest::Approx(via_scalar.error_proxy));
    }
    CHECK_THROWS_AS(inversion::invert_vector(g_vec, 1.8, {}, 99), std::invalid_argument);
}

TEST_CASE("argument and numeric errors") {
    auto g = [](cplx t) { return 1.0 / (t * t); };
    CHECK_THROWS_AS(inversion::invert_laplace(g, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(inversion::invert_laplace(g, -1.0, {}), std::invalid_argument);
    InversionConfig bad;
    bad.series_terms = 0;
    CHECK_THROWS_AS(inversion::invert_laplace(g, 1.0, bad), std::invalid_argument);

    auto nang = [](cplx) { return cplx(std::nan(""), 0.0); };
    CHECK_THROWS_AS(inversion::invert_laplace(nang, 1.0, {}), linalg::numeric_error);
}

TEST_CASE("error proxy reflects truncation honestly") {
    // a slowly converging pair: f(k) = e^{-k} has transform 1/(1+t)
    auto g = [](cplx t) { return 1.0 / (1.0 + t); };
    const auto r = inversion::invert_laplace(g, 1.0, {});
    CHECK(std::abs(r.value - std::exp(-1.0)) <= 1e-8);
    CHECK(r.error_proxy < 1e-6);
}
