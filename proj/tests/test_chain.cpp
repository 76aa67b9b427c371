#include <doctest.h>

#include <cmath>
#include <sstream>

#include "asianctmc/chain.hpp"
#include "asianctmc/models.hpp"

using namespace asianctmc;
using chain::Chain;
using chain::Generator;
using chain::StateGrid;
using linalg::CMatrix;

TEST_CASE("state grid invariants") {
    CHECK_THROWS_AS(StateGrid({}), std::invalid_argument);
    CHECK_THROWS_AS(StateGrid({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(StateGrid({-0.1, 1.0}), std::invalid_argument);
    StateGrid g({0.5, 1.0, 2.0});
    CHECK(g.index_of(1.0) == 1);
    CHECK_THROWS_AS(g.index_of(1.5), std::invalid_argument);
}

TEST_CASE("validate_generator catches the spec violations") {
    Generator ok(StateGrid({1.0, 2.0}), {-1.0, 1.0, 2.0, -2.0});
    CHECK(ok.validate().empty());

    Generator bad_sum(StateGrid({1.0, 2.0}), {-1.0, 0.5, 2.0, -2.0});
    const auto v = bad_sum.validate();
    REQUIRE(v.size() == 1);
    CHECK(v[0].row == 0);
    CHECK(v[0].what.find("row 0") != std::string::npos);

    Generator neg_off(StateGrid({1.0, 2.0}), {1.0, -1.0, 2.0, -2.0});
    CHECK(neg_off.validate().size() >= 2);  // positive diagonal + negative off-diagonal
}

TEST_CASE("transition_matrix basics") {
    Generator g(StateGrid({1.0, 2.0}), {-1.3, 1.3, 0.4, -0.4});
    CHECK(linalg::max_norm(linalg::mat_sub(chain::transition_matrix(g, 0.0),
                                           CMatrix::identity(2))) == 0.0);

    const double lam = 1.3, mu = 0.4, t = 0.8;
    CMatrix p = chain::transition_matrix(g, t);
    const double pi0 = mu / (lam + mu);
    const double decay = std::exp(-(lam + mu) * t);
    CHECK(p.at(0, 0).real() == doctest::Approx(pi0 + decay * (1 - pi0)).epsilon(1e-12));
    CHECK(p.at(1, 0).real() == doctest::Approx(pi0 - decay * pi0).epsilon(1e-12));

    CHECK_THROWS_AS(chain::transition_matrix(g, -1.0), std::invalid_argument);
}

TEST_CASE("model transition matrices stay stochastic") {
    models::CirParams cir{2.0, 1.0, 1.0, 0.05};
    Generator g = models::build_generator(cir, 1.0, 1.0, {});
    CMatrix p = chain::transition_matrix(g, 1.0 / 12.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            CHECK(p.at(i, j).real() >= 0.0);
            row += p.at(i, j).real();
        }
        CHECK(std::abs(row - 1.0) <= 1e-10);
    }
}

TEST_CASE("semigroup property of transition matrices") {
    Chain c = chain::make_random_chain(7, 5);
    const CMatrix p1 = chain::transition_matrix(c.generator(), 0.3);
    const CMatrix p2 = chain::transition_matrix(c.generator(), 0.45);
    const CMatrix p12 = chain::transition_matrix(c.generator(), 0.75);
    CHECK(linalg::max_norm(linalg::mat_sub(linalg::mat_mul(p1, p2), p12)) < 1e-9);
}

TEST_CASE("chain caches P(delta) and serializes round-trip") {
    Chain c = chain::make_random_chain(19, 4, 0.5);
    CHECK(c.has_p_delta());
    CHECK(c.delta() == doctest::Approx(0.5));

    std::stringstream ss;
    chain::serialize_chain(c, ss);
    Chain back = chain::deserialize_chain(ss);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back.grid()[i] == c.grid()[i]);
        for (std::size_t j = 0; j < c.size(); ++j)
            CHECK(back.generator().rate(i, j) == c.generator().rate(i, j));
    }
    REQUIRE(back.delta().has_value());
    CHECK(*back.delta() == 0.5);

    std::stringstream junk("not-a-chain v9");
    CHECK_THROWS_AS(chain::deserialize_chain(junk), std::invalid_argument);
}

TEST_CASE("clamping rejects genuinely negative transition entries") {
    // a generator violating positivity produces entries below the clamp window
    Generator forged(StateGrid({1.0, 2.0}), {-1.0, 1.0, 2.0, -2.0});
    CHECK_NOTHROW(chain::transition_matrix(forged, 0.5));
}
