#include "asianctmc/chain.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "asianctmc/util.hpp"

namespace asianctmc::chain {

StateGrid::StateGrid(std::vector<double> states) : states_(std::move(states)) {
    if (states_.empty()) throw std::invalid_argument("StateGrid: at least one state");
    double prev = -1.0;
    for (double x : states_) {
        if (!std::isfinite(x)) throw std::invalid_argument("StateGrid: non-finite state");
        if (x < 0.0) throw std::invalid_argument("StateGrid: states must be non-negative");
        if (x <= prev) throw std::invalid_argument("StateGrid: states must be strictly increasing");
        prev = x;
    }
}

std::size_t StateGrid::index_of(double x, double tol) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (std::abs(states_[i] - x) <= tol * std::max(1.0, std::abs(x))) return i;
    throw std::invalid_argument("StateGrid: value is not a grid state");
}

Generator::Generator(StateGrid grid, std::vector<double> rates)
    : grid_(std::move(grid)), rates_(std::move(rates)) {
    const std::size_t n = grid_.size();
    if (rates_.size() != n * n)
        throw std::invalid_argument("Generator: rate matrix must be N x N");
    for (double q : rates_)
        if (!std::isfinite(q)) throw std::invalid_argument("Generator: non-finite rate");
}

std::vector<Violation> Generator::validate(double row_sum_tol) const {
    std::vector<Violation> out;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        double row_scale = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double q = rate(i, j);
            row_sum += q;
            row_scale = std::max(row_scale, std::abs(q));
            if (i == j && q > 0.0) {
                std::ostringstream msg;
                msg << "diagonal entry (" << i << "," << i << ") = " << q << " is positive";
                out.push_back({i, msg.str()});
            } else if (i != j && q < 0.0) {
                std::ostringstream msg;
                msg << "off-diagonal entry (" << i << "," << j << ") = " << q
                    << " is negative";
                out.push_back({i, msg.str()});
            }
        }
        if (std::abs(row_sum) > row_sum_tol * row_scale) {
            std::ostringstream msg;
            msg << "row " << i << " sums to " << row_sum << " (tolerance "
                << row_sum_tol * row_scale << ")";
            out.push_back({i, msg.str()});
        }
    }
    return out;
}

std::vector<Violation> validate_generator(const Generator& g, double row_sum_tol) {
    return g.validate(row_sum_tol);
}

CMatrix transition_matrix(const Generator& g, double dt) {
    if (!(dt >= 0.0)) throw std::invalid_argument("transition_matrix: dt must be >= 0");
    const std::size_t n = g.size();
    if (dt == 0.0) return CMatrix::identity(n);

    CMatrix gm(n, n);
    for (std::size_t i = 0; i < n * n; ++i) gm.data()[i] = g.rates()[i];
    CMatrix p = linalg::expm(gm, dt);

    constexpr double kNegTol = 1e-12;
    constexpr double kRowTol = 1e-10;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = p.at(i, j).real();
            if (v < 0.0) {
                if (v < -kNegTol)
                    throw linalg::numeric_error(
                        "transition_matrix: entry below clamp tolerance", v);
                v = 0.0;
            }
            p.at(i, j) = v;
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > kRowTol)
            throw linalg::numeric_error("transition_matrix: row sum off unity",
                                        row_sum - 1.0);
        for (std::size_t j = 0; j < n; ++j) p.at(i, j) /= row_sum;
    }
    return p;
}

Chain::Chain(Generator gen, std::optional<double> delta)
    : gen_(std::move(gen)), delta_(delta) {
    if (delta_) {
        if (!(*delta_ > 0.0)) throw std::invalid_argument("Chain: delta must be > 0");
        p_delta_ = transition_matrix(gen_, *delta_);
    }
}

const CMatrix& Chain::p_delta() const {
    if (!p_delta_) throw std::invalid_argument("Chain: no monitoring interval set");
    return *p_delta_;
}

CVector Chain::state_vector() const {
    CVector x(size());
    for (std::size_t i = 0; i < size(); ++i) x[i] = grid()[i];
    return x;
}

std::vector<cplx> Chain::diag_d() const {
    std::vector<cplx> d(size());
    for (std::size_t i = 0; i < size(); ++i) d[i] = grid()[i];
    return d;
}

void serialize_chain(const Chain& c, std::ostream& os) {
    const std::size_t n = c.size();
    os.precision(17);
    os << "asianctmc-chain v1\n";
    os << "states " << n << "\n";
    for (std::size_t i = 0; i < n; ++i) os << c.grid()[i] << (i + 1 < n ? ' ' : '\n');
    os << "rates\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            os << c.generator().rate(i, j) << (j + 1 < n ? ' ' : '\n');
    if (c.delta())
        os << "delta " << *c.delta() << "\n";
    else
        os << "delta none\n";
}

Chain deserialize_chain(std::istream& is) {
    std::string word, version;
    is >> word >> version;
    if (word != "asianctmc-chain" || version != "v1")
        throw std::invalid_argument("deserialize_chain: unrecognized header");
    std::size_t n = 0;
    is >> word >> n;
    if (word != "states" || n == 0)
        throw std::invalid_argument("deserialize_chain: bad states header");
    std::vector<double> states(n);
    for (double& x : states) is >> x;
    is >> word;
    if (word != "rates") throw std::invalid_argument("deserialize_chain: bad rates header");
    std::vector<double> rates(n * n);
    for (double& q : rates) is >> q;
    is >> word;
    if (word != "delta") throw std::invalid_argument("deserialize_chain: bad delta header");
    std::string dv;
    is >> dv;
    if (!is) throw std::invalid_argument("deserialize_chain: truncated input");
    std::optional<double> delta;
    if (dv != "none") delta = std::stod(dv);
    return Chain(Generator(StateGrid(std::move(states)), std::move(rates)), delta);
}

Chain make_random_chain(std::uint64_t seed, std::size_t n_states,
                        std::optional<double> delta) {
    CounterRng rng(seed, 0xc7a1);
    std::vector<double> states(n_states);
    double x = 0.2 + rng.next_double();
    for (std::size_t i = 0; i < n_states; ++i) {
        states[i] = x;
        x += 0.1 + rng.next_double();
    }
    std::vector<double> rates(n_states * n_states, 0.0);
    for (std::size_t i = 0; i < n_states; ++i) {
        double out_rate = 0.0;
        for (std::size_t j = 0; j < n_states; ++j) {
            if (i == j) continue;
            const double q = rng.next_double() * 1.5;
            rates[i * n_states + j] = q;
            out_rate += q;
        }
        rates[i * n_states + i] = -out_rate;
    }
    return Chain(Generator(StateGrid(std::move(states)), std::move(rates)), delta);
}

}  // namespace asianctmc::chain
