#pragma once

#include "asianctmc/chain.hpp"

namespace asianctmc::transforms {

using chain::Chain;
using linalg::CVector;
using linalg::cplx;

struct DiscreteQuery {
    cplx theta;    // Re(theta) > 0
    int n;         // number of monitoring steps beyond time 0 (n >= 0)
    double delta;  // monitoring interval, must match the chain's
};

struct ContinuousQuery {
    cplx theta;  // Re(theta) > 0
    double t;    // >= 0
};

enum class Strategy { backward, forward, expm_action, full_expm };

struct TransformResult {
    CVector values;  // one transform value per starting state
    Strategy strategy;
};

// Strike-transform of the discretely monitored average payoff:
//   (1/theta^2) (e^{-theta D} P(delta))^n e^{-theta D} 1 - (1/theta^2) 1
//   + (x/theta) * sum_{j=0}^{n} e^{j r delta}.
// Backward evaluation: n diagonal-scaled mat-vec passes, O(N^2 n).
TransformResult g_discrete(const Chain& c, double r, const DiscreteQuery& q);

// Same value via the materialized n-th matrix power, O(N^3 n); kept as the
// reference path for equivalence tests.
TransformResult g_discrete_forward(const Chain& c, double r, const DiscreteQuery& q);

// Strike-transform of the continuously monitored average payoff:
//   (1/theta^2) e^{(G - theta D) t} 1 - (1/theta^2) 1 + (x/(r theta))(e^{rt}-1),
// with the r -> 0 limit x t / theta. The exponential action is evaluated
// without forming e^{(G-theta D)t} unless Strategy::full_expm is requested.
TransformResult g_continuous(const Chain& c, double r, const ContinuousQuery& q,
                             Strategy strategy = Strategy::expm_action);

// sum_{j=0}^{n} e^{j r delta} = (1 - e^{(n+1) r delta}) / (1 - e^{r delta}),
// evaluated safely through the removable singularity at r delta = 0.
double geometric_growth_sum(double r, double delta, int n);

}  // namespace asianctmc::transforms
