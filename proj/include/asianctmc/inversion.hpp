#pragma once

#include <functional>

#include "asianctmc/linalg.hpp"

namespace asianctmc::inversion {

using linalg::CVector;
using linalg::cplx;

// Euler-algorithm settings. The default damping keeps the discretization
// (aliasing) error of the closed-form test pairs below 1e-8; 18.4 would give
// ~3e-8 on the linear pair.
struct InversionConfig {
    double a_param = 20.0;   // damping / discretization parameter
    int series_terms = 15;   // leading alternating-series terms
    int euler_terms = 11;    // binomial-average order m (m+1 partial sums)
    double scale = 1.0;      // strike scaling applied before inversion
    double warn_cap = 1e-6;  // error-proxy level that sets the warning flag
};

struct InversionResult {
    double value;
    double error_proxy;  // magnitude of the last Euler-average increment
    bool warn;
};

// Recovers f(k) from g(theta) = int_0^inf e^{-theta k} f(k) dk for real f:
// damped alternating series at theta_j = (a + 2 pi i j) / (2k), j = 0..n+m,
// with binomial averaging of the last m+1 partial sums.
InversionResult invert_laplace(const std::function<cplx(cplx)>& g, double k,
                               const InversionConfig& cfg = {});

// Componentwise inversion of a vector-valued transform; each theta_j is
// evaluated once and shared across components. Returns the selected
// starting-state component.
InversionResult invert_vector(const std::function<CVector(cplx)>& g_vec, double k,
                              const InversionConfig& cfg, std::size_t state_index);

}  // namespace asianctmc::inversion
