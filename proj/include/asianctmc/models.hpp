#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "asianctmc/chain.hpp"

namespace asianctmc::models {

using chain::Generator;
using chain::StateGrid;

// dX = kappa (theta_bar - X) dt + sigma sqrt(X) dW
struct CirParams {
    double kappa;
    double theta_bar;
    double sigma;
    double r;
};

// dX = r X dt + sigma X^{beta+1} dW
struct CevParams {
    double sigma;
    double beta;
    double r;
};

// Double-exponential jump diffusion: dX/X = (r - lambda kbar) dt + sigma dW + jumps,
// log-jumps up ~ Exp(eta1) w.p. p_up, down ~ Exp(eta2) otherwise.
struct DejdParams {
    double sigma;
    double lambda;
    double p_up;
    double eta1;
    double eta2;
    double r;
};

// Lognormal jump diffusion: log-jumps ~ N(jump_mean, jump_std^2).
struct MjdParams {
    double sigma;
    double lambda;
    double jump_mean;
    double jump_std;
    double r;
};

// Tempered-stable pure-jump model with Levy density
//   c e^{-m y} / y^{1+y_exp} (y > 0),  c e^{-g |y|} / |y|^{1+y_exp} (y < 0).
struct CgmyParams {
    double c;
    double g;
    double m;
    double y;
    double r;
};

using ModelSpec = std::variant<CirParams, CevParams, DejdParams, MjdParams, CgmyParams>;

double rate_of(const ModelSpec& spec);
std::string model_name(const ModelSpec& spec);
// Throws invalid_argument on out-of-range parameters.
void validate_spec(const ModelSpec& spec);

enum class Placement { uniform, sinh_spot };
enum class Boundary { reflecting, absorbing };

struct GridSpec {
    std::size_t n_states = 50;
    std::optional<std::pair<double, double>> span;  // auto-sized when absent
    Placement placement = Placement::sinh_spot;
    // alpha = concentration * (high - low) in the sinh map; smaller values
    // cluster more states near the spot.
    double concentration = 0.08;
    Boundary boundary = Boundary::reflecting;
    // Maximum jump intensity fraction allowed to land beyond the grid edges,
    // measured from the spot state.
    double jump_mass_tol = 1e-8;
};

// Price levels covering `span` (or an automatic span leaving < 1e-6 lognormal
// proxy mass outside by time T, extended for jump tails), with the spot
// snapped onto a grid node.
StateGrid build_grid(const ModelSpec& spec, double spot, double maturity,
                     const GridSpec& grid);

// Tridiagonal generator matching the first two instantaneous moments of the
// diffusion at every interior node. Raw negative rates from non-uniform
// spacing fall back to first-moment-only upwind matching at that node.
Generator build_diffusion_generator(const std::function<double(double)>& drift,
                                    const std::function<double(double)>& vol,
                                    const StateGrid& grid,
                                    Boundary boundary = Boundary::reflecting);

// Jump-model generator: cell-integrated Levy rates off the tridiagonal band
// plus a diffusion part carrying the remaining risk-neutral drift. For CGMY,
// jumps below half the local log spacing are absorbed into the diffusion
// coefficient.
Generator build_jump_generator(const ModelSpec& spec, const StateGrid& grid,
                               double spot, const GridSpec& gridspec);

// Builds the generator for any supported model (diffusion or jump).
Generator build_generator(const ModelSpec& spec, double spot, double maturity,
                          const GridSpec& gridspec);

// max over interior nodes of |sum_j q_ij x_j - r x_i|; diagnostic only.
double risk_neutral_drift_check(const Generator& g, double r);

// Effective lognormal-proxy volatility at the spot (used for auto spans).
double proxy_volatility(const ModelSpec& spec, double spot);

// Expected relative jump size integral kbar = E[e^Y - 1] (jump models only).
double jump_compensator(const ModelSpec& spec);

}  // namespace asianctmc::models
