#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asianctmc/linalg.hpp"

namespace asianctmc::chain {

using linalg::CMatrix;
using linalg::CVector;
using linalg::cplx;

// Strictly increasing, non-negative price levels x_1..x_N.
class StateGrid {
public:
    explicit StateGrid(std::vector<double> states);

    std::size_t size() const { return states_.size(); }
    double operator[](std::size_t i) const { return states_[i]; }
    const std::vector<double>& states() const { return states_; }

    // Index of the state equal to x within tolerance; throws if absent.
    std::size_t index_of(double x, double tol = 1e-9) const;

private:
    std::vector<double> states_;
};

struct Violation {
    std::size_t row;
    std::string what;
};

// Transition rate matrix over a StateGrid. Stored row-major, real.
class Generator {
public:
    Generator(StateGrid grid, std::vector<double> rates);

    std::size_t size() const { return grid_.size(); }
    const StateGrid& grid() const { return grid_; }
    double rate(std::size_t i, std::size_t j) const { return rates_[i * size() + j]; }
    double& rate(std::size_t i, std::size_t j) { return rates_[i * size() + j]; }
    const std::vector<double>& rates() const { return rates_; }

    // Empty iff off-diagonals are >= 0, diagonals <= 0 and rows sum to zero
    // within tolerance. Each violation names the offending row.
    std::vector<Violation> validate(double row_sum_tol = 1e-12) const;

private:
    StateGrid grid_;
    std::vector<double> rates_;
};

std::vector<Violation> validate_generator(const Generator& g, double row_sum_tol = 1e-12);

// P(dt) = e^{G dt}. Tiny Pade-roundoff negatives (>= -1e-12) are clamped to
// zero and the row renormalized; anything more negative is an error.
CMatrix transition_matrix(const Generator& g, double dt);

// A CTMC plus, when a monitoring interval is set, the cached P(delta).
class Chain {
public:
    explicit Chain(Generator gen, std::optional<double> delta = std::nullopt);

    std::size_t size() const { return gen_.size(); }
    const Generator& generator() const { return gen_; }
    const StateGrid& grid() const { return gen_.grid(); }
    std::optional<double> delta() const { return delta_; }

    // Cached transition matrix for the chain's own delta.
    const CMatrix& p_delta() const;
    bool has_p_delta() const { return p_delta_.has_value(); }

    // Complex copy of the state vector x.
    CVector state_vector() const;
    // Entries of the diagonal matrix D (d_jj = x_j).
    std::vector<cplx> diag_d() const;

private:
    Generator gen_;
    std::optional<double> delta_;
    std::optional<CMatrix> p_delta_;
};

// Structured-text snapshot (grid, rates, delta); round-trips exactly.
void serialize_chain(const Chain& c, std::ostream& os);
Chain deserialize_chain(std::istream& is);

// Seeded random valid chain for tests and the validation suite.
Chain make_random_chain(std::uint64_t seed, std::size_t n_states,
                        std::optional<double> delta = 0.25);

}  // namespace asianctmc::chain
