#pragma once

#include <cstdint>

#include "asianctmc/chain.hpp"
#include "asianctmc/inversion.hpp"

namespace asianctmc::oracles {

using chain::Chain;
using inversion::InversionConfig;
using linalg::CVector;
using linalg::cplx;

// Admissible z radius for the discrete double transform:
// min(1, e^{-r delta}, 1 / ||e^{-theta D} P(delta)||_max).
double z_radius_bound(const Chain& c, double r, cplx theta);

// ||G - theta D||_max, the Neumann-validity bound for the continuous case.
double mu_norm_bound(const Chain& c, cplx theta);

// Transform points inside the proof's expansion regions; constructors check
// the radius/norm bounds.
struct DiscreteDoubleQuery {
    cplx theta;
    cplx z;
    static DiscreteDoubleQuery make(const Chain& c, double r, cplx theta, cplx z);
};

struct ContinuousDoubleQuery {
    cplx theta;
    cplx mu;
    static ContinuousDoubleQuery make(const Chain& c, cplx theta, cplx mu);
};

// Z-Laplace double transform of the discrete payoff:
//   (1/theta^2)(e^{theta D} - z P(delta))^{-1} 1 - 1/(theta^2 (1-z)) 1
//   + x / (theta (1-z)(1-z e^{r delta})).
// Requires strict diagonal dominance of e^{theta D} - z P(delta).
CVector L_discrete(const Chain& c, double r, cplx theta, cplx z);

// n-th power-series coefficient of z -> L_discrete, extracted by trapezoid
// quadrature on |z| = rho (half the admissible radius). The node count starts
// at max(4(n+1), 32) and doubles until two successive answers agree to 1e-11.
CVector z_coefficient(const Chain& c, double r, cplx theta, int n);

// Laplace-Laplace double transform of the continuous payoff:
//   (1/theta^2) m - 1/(theta^2 mu) 1 + x/(theta mu (mu - r)),
// with m = (theta D + mu I - G)^{-1} 1. Requires mu != 0, mu != r and strict
// diagonal dominance of the resolvent matrix (holds whenever Re(mu) > 0).
CVector L_continuous(const Chain& c, double r, cplx theta, cplx mu);

// Recovers g_continuous(t, theta) by Euler inversion of mu -> L_continuous,
// componentwise. The transform is complex-valued in t, so real and imaginary
// parts are inverted separately via conjugate symmetrization.
CVector mu_invert(const Chain& c, double r, cplx theta, double t,
                  const InversionConfig& cfg = {});

// Exact discretely monitored Asian call price by exhaustive path enumeration;
// requires N^(n+1) <= 1e7.
double enumerate_discrete_price(const Chain& c, double r, double maturity, int n,
                                double strike, std::size_t start_state);

struct McConfig {
    std::uint64_t paths = 100000;
    std::uint64_t seed = 1;
    std::size_t batches = 32;  // batch count for the standard-error estimate
};

struct McResult {
    double price;
    double std_error;
};

// Exact-in-law CTMC simulation of the continuously monitored Asian call:
// exponential holding times, embedded-chain jumps, A_T accumulated exactly.
// Bit-for-bit reproducible for a given (seed, paths) regardless of threading.
McResult mc_continuous_price(const Chain& c, double r, double maturity, double strike,
                             std::size_t start_state, const McConfig& cfg);

}  // namespace asianctmc::oracles
