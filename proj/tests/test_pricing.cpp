#include <doctest.h>

#include <cmath>

#include "asianctmc/oracles.hpp"
#include "asianctmc/pricing.hpp"
#include "asianctmc/tables.hpp"

using namespace asianctmc;
using pricing::Monitoring;
using pricing::PricingRequest;

namespace {

PricingRequest cir_request(double strike, int n) {
    PricingRequest req;
    req.model = models::CirParams{2.0, 1.0, 1.0, 0.05};
    req.grid.span = {{0.01, 5.0}};
    req.market = {1.0, 0.05, 1.0};
    req.strike = strike;
    req.monitoring = n > 0 ? Monitoring::discrete(n) : Monitoring::cont();
    return req;
}

}  // namespace

TEST_CASE("request validation") {
    PricingRequest bad = cir_request(1.0, 12);
    bad.market.spot = -1.0;
    CHECK_THROWS_AS(pricing::price_asian(bad), std::invalid_argument);
    bad = cir_request(1.0, 12);
    bad.monitoring = Monitoring::discrete(0);
    CHECK_THROWS_AS(pricing::price_asian(bad), std::invalid_argument);
    bad = cir_request(-0.5, 12);
    CHECK_THROWS_AS(pricing::price_asian(bad), std::invalid_argument);
    bad = cir_request(1.0, 12);
    bad.grid.span = {{2.0, 5.0}};  // spot excluded
    CHECK_THROWS_AS(pricing::price_asian(bad), std::invalid_argument);
}

TEST_CASE("zero-strike prices bypass inversion and match direct expectations") {
    PricingRequest req = cir_request(0.0, 12);
    const double fast = pricing::price_asian(req).price;

    chain::Generator gen = models::build_generator(
        pricing::normalized_model(req.model, 1.0), 1.0, 1.0, req.grid);
    chain::Chain c(std::move(gen), 1.0 / 12.0);
    const std::size_t start = c.grid().index_of(1.0);
    linalg::CVector v = c.state_vector();
    double acc = v[start].real();
    for (int s = 0; s < 12; ++s) {
        v = linalg::mat_vec(c.p_delta(), v);
        acc += v[start].real();
    }
    const double direct = std::exp(-0.05) / 13.0 * acc;
    CHECK(std::abs(fast - direct) <= 1e-10);

    // continuous zero strike: discounted E[A_T]/T against Monte Carlo
    PricingRequest cont = cir_request(0.0, 0);
    const double fast_c = pricing::price_asian(cont).price;
    chain::Chain cc(models::build_generator(pricing::normalized_model(cont.model, 1.0),
                                            1.0, 1.0, cont.grid));
    const auto mc = oracles::mc_continuous_price(cc, 0.05, 1.0, 0.0,
                                                 cc.grid().index_of(1.0), {200000, 3, 32});
    CHECK(std::abs(fast_c - mc.price) <= 3.0 * mc.std_error + 1e-10);
}

TEST_CASE("price scales linearly with the spot normalization") {
    // DEJD is scale-free: pricing at spot 100 must equal 100x the unit price
    PricingRequest req;
    req.model = models::DejdParams{0.2, 3.0, 0.6, 25.0, 25.0, 0.09};
    req.market = {100.0, 0.09, 1.0};
    req.strike = 95.0;
    req.monitoring = Monitoring::discrete(12);
    const double at_100 = pricing::price_asian(req).price;

    PricingRequest unit = req;
    unit.market.spot = 1.0;
    unit.strike = 0.95;
    const double at_1 = pricing::price_asian(unit).price;
    CHECK(at_100 == doctest::Approx(100.0 * at_1).epsilon(1e-10));
}

TEST_CASE("single-state chain prices the deterministic payoff for any n") {
    chain::Chain c(chain::Generator(chain::StateGrid({1.4}), {0.0}), 0.25);
    const double want = std::exp(-0.03 * 1.0) * (1.4 - 0.8);
    for (int n : {1, 4}) {
        chain::Chain cn(chain::Generator(chain::StateGrid({1.4}), {0.0}), 1.0 / n);
        const double got = pricing::price_discrete_chain(cn, 0.03, 1.0, n, 0.8, 0);
        CHECK(std::abs(got - want) <= 1e-7);
    }
    const double cont = pricing::price_continuous_chain(c, 0.03, 1.0, 0.8, 0);
    CHECK(std::abs(cont - want) <= 1e-7);
}

TEST_CASE("price_table reports rows, errors and relative errors") {
    const auto& t4 = tables::benchmark_table(4);
    auto reqs = tables::table_requests(t4);
    auto bench = tables::table_benchmarks(t4);
    // truncate for speed: first three rows (n = 12 ladder)
    reqs.resize(3);
    bench.resize(3);
    // poison one row
    reqs[2].grid.span = {{99.0, 101.0}};
    const auto rows = pricing::price_table(reqs, bench);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].price.has_value());
    CHECK(rows[0].rel_err_pct.has_value());
    CHECK(rows[0].error.empty());
    CHECK(!rows[2].error.empty());
    CHECK(!rows[2].price.has_value());

    CHECK_THROWS_AS(pricing::price_table({}, {}), std::invalid_argument);
}

TEST_CASE("strike monotonicity and payoff bounds on the CIR ladder") {
    pricing::ChainCache cache;
    double prev = 1e300;
    for (double strike : {0.90, 0.95, 1.00, 1.05, 1.10}) {
        const double p = pricing::price_asian(cir_request(strike, 12), cache).price;
        CHECK(p < prev);
        CHECK(p >= 0.0);
        prev = p;
    }
    // upper bound: discounted max grid state
    const double p_atm = pricing::price_asian(cir_request(1.0, 12), cache).price;
    CHECK(p_atm <= std::exp(-0.05) * 5.0);
}

TEST_CASE("convergence sweep tracks the continuous limit") {
    PricingRequest req = cir_request(1.0, 12);
    const auto report = pricing::convergence_sweep(req, {12, 25, 50});
    REQUIRE(report.rows.size() == 4);
    CHECK(!report.rows[0].n.has_value() == false);
    CHECK(!report.rows.back().n.has_value());
    CHECK(report.gaps_shrink);
    CHECK(report.monotone_trend);
    // single-state chain: every price equals the same constant
    CHECK_THROWS_AS(pricing::convergence_sweep(req, {}), std::invalid_argument);
    CHECK_THROWS_AS(pricing::convergence_sweep(req, {25, 12}), std::invalid_argument);
}

TEST_CASE("timing profile returns medians and enforces repetitions") {
    PricingRequest req = cir_request(1.0, 12);
    CHECK_THROWS_AS(pricing::timing_profile(req, 2), std::invalid_argument);
    const auto prof = pricing::timing_profile(req, 3);
    CHECK(prof.median_price_seconds > 0.0);
    CHECK(prof.median_total_seconds >= prof.median_price_seconds);
    CHECK(prof.repetitions == 3);
}
