#include "asianctmc/validate.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "asianctmc/chain.hpp"
#include "asianctmc/inversion.hpp"
#include "asianctmc/models.hpp"
#include "asianctmc/oracles.hpp"
#include "asianctmc/pricing.hpp"
#include "asianctmc/tables.hpp"
#include "asianctmc/transforms.hpp"
#include "asianctmc/util.hpp"

namespace asianctmc::validate {

using chain::Chain;
using linalg::CMatrix;
using linalg::CVector;
using linalg::cplx;

namespace {

double max_abs_diff(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double max_rel_diff(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

struct Runner {
    const ValidateOptions& opts;
    std::vector<PropertyResult> results;

    void run(const std::string& name, const std::function<std::string()>& body) {
        PropertyResult r{name, true, ""};
        try {
            r.detail = body();  // throws or returns a detail string on success
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    }
};

void check(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

std::string worst_str(double worst, double tol) {
    std::ostringstream os;
    os << "worst " << worst << " (tol " << tol << ")";
    return os.str();
}

// representative model set: one per benchmark family, N = 50
std::vector<std::pair<std::string, models::ModelSpec>> benchmark_models() {
    std::vector<std::pair<std::string, models::ModelSpec>> out;
    for (const auto& table : tables::benchmark_tables()) {
        out.emplace_back(models::model_name(table.rows.front().model),
                         table.rows.front().model);
    }
    return out;
}

double table_spot(const models::ModelSpec& spec) {
    return std::holds_alternative<models::CirParams>(spec) ? 1.0 : 100.0;
}

}  // namespace

bool all_passed(const std::vector<PropertyResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::vector<PropertyResult> run_all(const ValidateOptions& opts) {
    Runner runner{opts, {}};
    const int cases = std::max(1, opts.cases);

    // --- generators ---------------------------------------------------------
    runner.run("generator_validity", [&] {
        int built = 0;
        for (const auto& [name, spec] : benchmark_models()) {
            const double spot = table_spot(spec);
            chain::Generator g =
                models::build_generator(models::ModelSpec(spec), spot, 1.0, {});
            const auto violations = g.validate();
            check(violations.empty(), name + " generator failed validation: " +
                                          (violations.empty() ? "" : violations[0].what));
            ++built;
        }
        for (int i = 0; i < cases; ++i) {
            Chain c = chain::make_random_chain(opts.seed + i, 2 + i % 7);
            check(c.generator().validate().empty(), "random generator failed validation");
            ++built;
        }
        if (opts.inject_broken_generator) {
            chain::Generator broken(chain::StateGrid({1.0, 2.0}),
                                    {-1.0, 0.5, 2.0, -2.0});
            check(broken.validate().empty(), "injected generator failed validation");
        }
        return std::to_string(built) + " generators clean";
    });

    runner.run("generator_rejects_bad_rows", [&] {
        chain::Generator broken(chain::StateGrid({1.0, 2.0}), {-1.0, 0.5, 2.0, -2.0});
        const auto v = broken.validate();
        check(!v.empty(), "row-sum violation not detected");
        return "violation reported: " + v[0].what;
    });

    // --- linalg -------------------------------------------------------------
    runner.run("expm_stochastic_and_semigroup", [&] {
        double worst_row = 0.0, worst_ck = 0.0;
        for (int i = 0; i < cases; ++i) {
            Chain c = chain::make_random_chain(opts.seed + 100 + i, 2 + i % 6);
            const double t = 0.1 + 0.05 * (i % 5);
            const double s = 0.2 + 0.1 * (i % 3);
            const CMatrix pt = chain::transition_matrix(c.generator(), t);
            const CMatrix ps = chain::transition_matrix(c.generator(), s);
            const CMatrix pts = chain::transition_matrix(c.generator(), t + s);
            for (std::size_t a = 0; a < c.size(); ++a) {
                double row = 0.0;
                for (std::size_t b = 0; b < c.size(); ++b) {
                    check(pt.at(a, b).real() >= -1e-12, "negative transition probability");
                    check(pt.at(a, b).real() <= 1.0 + 1e-12, "transition probability > 1");
                    row += pt.at(a, b).real();
                }
                worst_row = std::max(worst_row, std::abs(row - 1.0));
            }
            const CMatrix prod = linalg::mat_mul(pt, ps);
            worst_ck = std::max(worst_ck, linalg::max_norm(linalg::mat_sub(prod, pts)));
        }
        check(worst_row <= 1e-10, "row sums drift beyond 1e-10");
        check(worst_ck <= 1e-9, "Chapman-Kolmogorov gap beyond 1e-9");
        return worst_str(std::max(worst_row, worst_ck), 1e-9);
    });

    runner.run("expm_action_matches_expm", [&] {
        double worst = 0.0;
        for (int i = 0; i < cases; ++i) {
            const std::size_t n = 2 + (mix64(opts.seed + i) % 49);
            Chain c = chain::make_random_chain(opts.seed + 200 + i, n);
            const cplx theta(0.5 + 2.0 * (i % 4), 3.0 * (i % 3));
            CMatrix a(n, n);
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = 0; q < n; ++q) a.at(p, q) = c.generator().rate(p, q);
                a.at(p, p) -= theta * c.grid()[p];
            }
            CVector v(n);
            CounterRng rng(opts.seed + i, 7);
            for (std::size_t p = 0; p < n; ++p)
                v[p] = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
            const double t = 0.25 + 0.5 * (i % 4);
            const CVector via_action = linalg::expm_action(a, t, v);
            const CVector via_full = linalg::mat_vec(linalg::expm(a, t), v);
            double scale = linalg::max_norm(via_full);
            worst = std::max(worst, max_abs_diff(via_action, via_full) /
                                        std::max(scale, 1e-300));
        }
        check(worst <= 1e-10, worst_str(worst, 1e-10));
        return worst_str(worst, 1e-10);
    });

    runner.run("neumann_partial_sums_converge", [&] {
        for (int i = 0; i < std::min(cases, 10); ++i) {
            const std::size_t n = 3 + i % 4;
            CounterRng rng(opts.seed + 300 + i, 11);
            CMatrix a = CMatrix::identity(n);
            // perturbation with max norm exactly 0.3
            CMatrix e(n, n);
            double mx = 0.0;
            for (std::size_t p = 0; p < n * n; ++p) {
                e.data()[p] = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
                mx = std::max(mx, std::abs(e.data()[p]));
            }
            for (std::size_t p = 0; p < n * n; ++p) {
                e.data()[p] *= 0.3 / mx;
                a.data()[p] -= e.data()[p];
            }
            const CMatrix inv = linalg::mat_inverse(a);
            double prev = 1e300;
            for (std::size_t terms : {5u, 10u, 20u, 40u, 80u}) {
                const CMatrix s = linalg::neumann_inverse_check(a, terms);
                const double resid = linalg::max_norm(linalg::mat_sub(s, inv));
                check(resid <= prev + 1e-15, "Neumann residual not monotone");
                prev = resid;
            }
            check(prev <= 1e-12, "Neumann partial sums did not reach the inverse");
        }
        return "monotone to 1e-12";
    });

    // --- models -------------------------------------------------------------
    runner.run("diffusion_moment_identities", [&] {
        double worst = 0.0;
        for (const auto& [name, spec] : benchmark_models()) {
            if (!std::holds_alternative<models::CirParams>(spec) &&
                !std::holds_alternative<models::CevParams>(spec))
                continue;
            const double spot = table_spot(spec);
            chain::StateGrid grid = models::build_grid(spec, spot, 1.0, {});
            std::function<double(double)> drift, vol;
            if (const auto* cir = std::get_if<models::CirParams>(&spec)) {
                drift = [p = *cir](double x) { return p.kappa * (p.theta_bar - x); };
                vol = [p = *cir](double x) { return p.sigma * std::sqrt(x); };
            } else {
                const auto* cev = std::get_if<models::CevParams>(&spec);
                drift = [p = *cev](double x) { return p.r * x; };
                vol = [p = *cev](double x) { return p.sigma * std::pow(x, p.beta + 1.0); };
            }
            chain::Generator g = models::build_diffusion_generator(drift, vol, grid);
            for (std::size_t i = 1; i + 1 < g.size(); ++i) {
                double m1 = 0.0, m2 = 0.0;
                for (std::size_t j = 0; j < g.size(); ++j) {
                    const double dx = g.grid()[j] - g.grid()[i];
                    m1 += g.rate(i, j) * dx;
                    m2 += g.rate(i, j) * dx * dx;
                }
                const double want_m = drift(g.grid()[i]);
                const double want_v = vol(g.grid()[i]) * vol(g.grid()[i]);
                const double scale_m = std::max(1.0, std::abs(want_m));
                const double scale_v = std::max(1.0, want_v);
                // nodes repaired by the upwind fallback match the drift only
                const bool upwind = g.rate(i, i - 1) == 0.0 || g.rate(i, i + 1) == 0.0;
                worst = std::max(worst, std::abs(m1 - want_m) / scale_m);
                if (!upwind) worst = std::max(worst, std::abs(m2 - want_v) / scale_v);
            }
        }
        check(worst <= 1e-12, worst_str(worst, 1e-12));
        return worst_str(worst, 1e-12);
    });

    runner.run("gbm_limit_drift_defect", [&] {
        // DEJD with lambda = 0 degenerates to GBM; interior drift must be r x
        models::DejdParams gbm{0.25, 0.0, 0.5, 10.0, 10.0, 0.05};
        chain::Generator g = models::build_generator(gbm, 100.0, 1.0, {});
        const double defect = models::risk_neutral_drift_check(g, gbm.r);
        check(defect <= 1e-10, worst_str(defect, 1e-10));
        return worst_str(defect, 1e-10);
    });

    runner.run("jump_generator_risk_neutral_drift", [&] {
        double worst = 0.0;
        for (const auto& [name, spec] : benchmark_models()) {
            if (std::holds_alternative<models::CirParams>(spec) ||
                std::holds_alternative<models::CevParams>(spec))
                continue;
            chain::Generator g = models::build_generator(spec, 100.0, 1.0, {});
            worst = std::max(worst, models::risk_neutral_drift_check(g, models::rate_of(spec)));
        }
        // interior defect only; boundary rows are excluded by the check itself
        check(worst <= 1e-8, worst_str(worst, 1e-8));
        return worst_str(worst, 1e-8);
    });

    // --- transforms ---------------------------------------------------------
    runner.run("strategy_equivalence", [&] {
        double worst = 0.0;
        for (int i = 0; i < cases; ++i) {
            Chain c = chain::make_random_chain(opts.seed + 400 + i, 2 + i % 8, 0.2);
            CounterRng rng(opts.seed + 17 * i, 23);
            const cplx theta(0.2 + 3.0 * rng.next_double(),
                             6.0 * (rng.next_double() - 0.5));
            const int n = 1 + static_cast<int>(mix64(opts.seed + i) % 24);
            const auto back = transforms::g_discrete(c, 0.04, {theta, n, 0.2});
            const auto fwd = transforms::g_discrete_forward(c, 0.04, {theta, n, 0.2});
            worst = std::max(worst, max_rel_diff(back.values, fwd.values));

            const auto act =
                transforms::g_continuous(c, 0.04, {theta, 0.8});
            const auto full = transforms::g_continuous(c, 0.04, {theta, 0.8},
                                                       transforms::Strategy::full_expm);
            worst = std::max(worst, max_rel_diff(act.values, full.values));
        }
        check(worst <= 1e-10, worst_str(worst, 1e-10));
        return worst_str(worst, 1e-10);
    });

    runner.run("transform_tail_decay_and_positivity", [&] {
        Chain c = chain::make_random_chain(opts.seed + 777, 6, 0.25);
        const int n = 4;
        const double xmin = c.grid()[0];
        double prev = 1e300;
        for (double theta : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            // leading term of g_d: (e^{-theta D} P)^n e^{-theta D} 1
            CVector v(c.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                v[i] = std::exp(-theta * c.grid()[i]);
            for (int s = 0; s < n; ++s) {
                CVector pv = linalg::mat_vec(c.p_delta(), v);
                for (std::size_t i = 0; i < c.size(); ++i)
                    v[i] = std::exp(-theta * c.grid()[i]) * pv[i];
            }
            const double bound = std::exp(-theta * (n + 1) * xmin);
            double mx = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) {
                check(v[i].real() > 0.0, "leading-term entry not positive");
                check(v[i].real() <= bound * (1.0 + 1e-12), "entry above e^{-theta(n+1)xmin}");
                mx = std::max(mx, v[i].real());
            }
            check(mx < prev, "leading term not decaying in theta");
            prev = mx;
        }
        return "decay and bounds hold over theta in {1..16}";
    });

    // --- inversion ----------------------------------------------------------
    runner.run("inversion_closed_form_pairs", [&] {
        const inversion::InversionConfig cfg;
        double worst = 0.0;
        {
            auto g = [](cplx t) { return 1.0 / (t * t); };
            worst = std::max(worst, std::abs(inversion::invert_laplace(g, 1.0, cfg).value - 1.0));
        }
        {
            auto g = [](cplx t) { return 1.0 / (t * (t + 1.0)); };
            const double want = 1.0 - std::exp(-2.0);
            worst = std::max(worst,
                             std::abs(inversion::invert_laplace(g, 2.0, cfg).value - want));
        }
        {
            const double cpar = 1.0;
            auto g = [cpar](cplx t) {
                return (cpar * t + std::exp(-cpar * t) - 1.0) / (t * t);
            };
            worst = std::max(worst,
                             std::abs(inversion::invert_laplace(g, 0.5, cfg).value - 0.5));
        }
        check(worst <= 1e-8, worst_str(worst, 1e-8));
        return worst_str(worst, 1e-8);
    });

    runner.run("inversion_parameter_stability", [&] {
        const auto& t1 = tables::benchmark_table(1);
        pricing::PricingRequest req = tables::table_requests(t1)[2];  // n=12, ATM
        const double base = pricing::price_asian(req).price;
        pricing::PricingRequest more = req;
        more.inversion.series_terms = 30;
        const double p_more = pricing::price_asian(more).price;
        pricing::PricingRequest damped = req;
        damped.inversion.a_param = 23.0;
        const double p_damp = pricing::price_asian(damped).price;
        const double worst = std::max(std::abs(p_more - base), std::abs(p_damp - base));
        check(worst < 1e-6, worst_str(worst, 1e-6));
        return worst_str(worst, 1e-6);
    });

    // --- oracles ------------------------------------------------------------
    runner.run("z_transform_inversion", [&] {
        double worst = 0.0;
        for (int i = 0; i < cases; ++i) {
            const std::size_t n_states = 2 + (mix64(opts.seed + 11 * i) % 5);
            Chain c = chain::make_random_chain(opts.seed + 500 + i, n_states, 0.25);
            CounterRng rng(opts.seed + 23 * i, 31);
            const cplx theta(0.4 + 2.5 * rng.next_double(),
                             4.0 * (rng.next_double() - 0.5));
            const int n = static_cast<int>(mix64(opts.seed + i) % 9);
            const CVector coeff = oracles::z_coefficient(c, 0.03, theta, n);
            const CVector direct =
                transforms::g_discrete(c, 0.03, {theta, n, 0.25}).values;
            worst = std::max(worst, max_abs_diff(coeff, direct));
        }
        check(worst <= 1e-9, worst_str(worst, 1e-9));
        return worst_str(worst, 1e-9);
    });

    runner.run("mu_inversion", [&] {
        double worst = 0.0;
        for (int i = 0; i < cases; ++i) {
            const std::size_t n_states = 2 + (mix64(opts.seed + 7 * i) % 5);
            Chain c = chain::make_random_chain(opts.seed + 600 + i, n_states, 0.25);
            CounterRng rng(opts.seed + 29 * i, 37);
            const cplx theta(0.4 + 2.0 * rng.next_double(),
                             3.0 * (rng.next_double() - 0.5));
            for (double t : {0.25, 1.0, 4.0}) {
                const CVector inv = oracles::mu_invert(c, 0.03, theta, t);
                const CVector direct =
                    transforms::g_continuous(c, 0.03, {theta, t}).values;
                worst = std::max(worst, max_abs_diff(inv, direct));
            }
        }
        check(worst <= 1e-6, worst_str(worst, 1e-6));
        return worst_str(worst, 1e-6);
    });

    runner.run("series_sum_matches_L_discrete", [&] {
        double worst = 0.0;
        for (int i = 0; i < std::min(cases, 8); ++i) {
            Chain c = chain::make_random_chain(opts.seed + 650 + i, 4, 0.25);
            const cplx theta(1.1, 0.6);
            const cplx z(0.21, 0.21);  // |z| = 0.297
            CVector sum(c.size());
            for (int n = 0; n <= 60; ++n) {
                const CVector g = transforms::g_discrete(c, 0.03, {theta, n, 0.25}).values;
                const cplx zn = std::pow(z, n);
                for (std::size_t p = 0; p < c.size(); ++p) sum[p] += zn * g[p];
            }
            const CVector l = oracles::L_discrete(c, 0.03, theta, z);
            worst = std::max(worst, max_abs_diff(sum, l));
        }
        check(worst <= 1e-10, worst_str(worst, 1e-10));
        return worst_str(worst, 1e-10);
    });

    runner.run("resolvent_neumann_expansion", [&] {
        for (int i = 0; i < std::min(cases, 8); ++i) {
            Chain c = chain::make_random_chain(opts.seed + 700 + i, 4, 0.25);
            const cplx theta(1.3, 0.4);
            const double bound = oracles::mu_norm_bound(c, theta);
            const cplx mu = 2.5 * bound;
            const auto q = oracles::ContinuousDoubleQuery::make(c, theta, mu);
            // m = (theta D + mu I - G)^{-1} 1 via the resolvent
            const std::size_t n = c.size();
            CMatrix b(n, n);
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t l = 0; l < n; ++l) b.at(p, l) = -c.generator().rate(p, l);
                b.at(p, p) += q.theta * c.grid()[p] + q.mu;
            }
            CVector ones(n);
            for (std::size_t p = 0; p < n; ++p) ones[p] = 1.0;
            const CVector m = linalg::lu_solve(b, ones);
            // partial sums sum_i (G - theta D)^i 1 / mu^{i+1}
            CMatrix a(n, n);
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t l = 0; l < n; ++l) a.at(p, l) = c.generator().rate(p, l);
                a.at(p, p) -= q.theta * c.grid()[p];
            }
            CVector term = ones, acc(n);
            double prev = 1e300;
            cplx mu_pow = q.mu;
            for (int k = 0; k <= 40; ++k) {
                for (std::size_t p = 0; p < n; ++p) acc[p] += term[p] / mu_pow;
                const double resid = max_abs_diff(acc, m);
                check(resid <= prev * (1.0 + 1e-9), "resolvent Neumann residual grew");
                prev = resid;
                term = linalg::mat_vec(a, term);
                mu_pow *= q.mu;
            }
            check(prev <= 1e-10, "resolvent Neumann sum did not converge");
        }
        return "monotone residual decay to 1e-10";
    });

    runner.run("geometric_factor_identity", [&] {
        double worst = 0.0;
        for (int i = 0; i < cases; ++i) {
            CounterRng rng(opts.seed + 800 + i, 41);
            const double r = 0.01 + 0.15 * rng.next_double();
            const double delta = 0.05 + rng.next_double();
            const int n = static_cast<int>(mix64(opts.seed + i) % 40);
            double direct = 0.0;
            for (int j = 0; j <= n; ++j) direct += std::exp(j * r * delta);
            const double closed = transforms::geometric_growth_sum(r, delta, n);
            worst = std::max(worst, std::abs(direct - closed) / direct);
        }
        check(worst <= 1e-12, worst_str(worst, 1e-12));
        return worst_str(worst, 1e-12);
    });

    runner.run("enumeration_agreement", [&] {
        inversion::InversionConfig cfg;
        cfg.a_param = 28.0;
        cfg.series_terms = 400;
        cfg.euler_terms = 30;
        double worst = 0.0;
        for (int i = 0; i < std::min(cases, 50); ++i) {
            const double delta = 0.25;
            Chain c = chain::make_random_chain(opts.seed + 900 + i, 4, delta);
            const int n = 4;
            const double maturity = n * delta;
            CounterRng rng(opts.seed + 31 * i, 43);
            const double mean_state =
                (c.grid()[0] + c.grid()[c.size() - 1]) / 2.0;
            const double strike = mean_state * (0.7 + 0.6 * rng.next_double());
            const std::size_t start = mix64(opts.seed + i) % c.size();
            const double exact =
                oracles::enumerate_discrete_price(c, 0.03, maturity, n, strike, start);
            const double piped =
                pricing::price_discrete_chain(c, 0.03, maturity, n, strike, start, cfg);
            worst = std::max(worst, std::abs(exact - piped));
        }
        check(worst <= 1e-6, worst_str(worst, 1e-6));
        return worst_str(worst, 1e-6);
    });

    runner.run("mc_agreement", [&] {
        // exact-in-law simulation on the ATM continuous CIR benchmark chain
        const auto& t1 = tables::benchmark_table(1);
        pricing::PricingRequest req = tables::table_requests(t1)[2];
        req.monitoring = pricing::Monitoring::cont();
        models::ModelSpec norm = pricing::normalized_model(req.model, req.market.spot);
        chain::Generator gen = models::build_generator(norm, 1.0, req.market.maturity, req.grid);
        Chain c(std::move(gen));
        const std::size_t start = c.grid().index_of(1.0);
        const double strike = req.strike / req.market.spot;
        const double piped = pricing::price_continuous_chain(
            c, req.market.r, req.market.maturity, strike, start);
        const oracles::McResult mc = oracles::mc_continuous_price(
            c, req.market.r, req.market.maturity, strike, start,
            {opts.mc_paths, opts.seed, 32});
        const double gap = std::abs(piped - mc.price);
        check(gap <= 3.0 * mc.std_error + 1e-12,
              "pipeline " + std::to_string(piped) + " vs MC " + std::to_string(mc.price) +
                  " +- " + std::to_string(mc.std_error));
        std::ostringstream os;
        os << "gap " << gap << " vs 3se " << 3.0 * mc.std_error;
        return os.str();
    });

    // --- pricing ------------------------------------------------------------
    runner.run("strike_monotonicity", [&] {
        const auto& t1 = tables::benchmark_table(1);
        const auto reqs = tables::table_requests(t1);
        pricing::ChainCache cache;
        double prev = 1e300;
        for (std::size_t i = 0; i < 5; ++i) {  // the n=12 strike ladder
            const double p = pricing::price_asian(reqs[i], cache).price;
            check(p <= prev + 1e-12, "price increased in strike");
            prev = p;
        }
        return "non-increasing across the strike ladder";
    });

    runner.run("zero_strike_identity", [&] {
        const auto& t1 = tables::benchmark_table(1);
        pricing::PricingRequest req = tables::table_requests(t1)[0];
        req.strike = 0.0;
        const double fast = pricing::price_asian(req).price;
        // direct expectation: e^{-rT}/(n+1) sum_i (P^i x)[start]
        models::ModelSpec norm = pricing::normalized_model(req.model, req.market.spot);
        const double delta = req.market.maturity / req.monitoring.n;
        chain::Generator gen = models::build_generator(norm, 1.0, req.market.maturity, req.grid);
        Chain c(std::move(gen), delta);
        const std::size_t start = c.grid().index_of(1.0);
        CVector v = c.state_vector();
        double acc = v[start].real();
        for (int s = 0; s < req.monitoring.n; ++s) {
            v = linalg::mat_vec(c.p_delta(), v);
            acc += v[start].real();
        }
        const double direct = req.market.spot *
                              std::exp(-req.market.r * req.market.maturity) /
                              (req.monitoring.n + 1) * acc;
        const double gap = std::abs(fast - direct);
        check(gap <= 1e-10, worst_str(gap, 1e-10));
        return worst_str(gap, 1e-10);
    });

    runner.run("payoff_bounds", [&] {
        const auto& t3 = tables::benchmark_table(3);
        const auto reqs = tables::table_requests(t3);
        pricing::ChainCache cache;
        for (std::size_t i = 0; i < 3; ++i) {
            const pricing::PricingRequest& req = reqs[i];
            const double price = pricing::price_asian(req, cache).price;
            models::ModelSpec norm = pricing::normalized_model(req.model, req.market.spot);
            const double delta = req.market.maturity / req.monitoring.n;
            chain::Generator gen =
                models::build_generator(norm, 1.0, req.market.maturity, req.grid);
            Chain c(std::move(gen), delta);
            const double disc = std::exp(-req.market.r * req.market.maturity);
            const double upper =
                disc * c.grid()[c.size() - 1] * req.market.spot;
            check(price <= upper, "price above discounted max state");
            pricing::PricingRequest zs = req;
            zs.strike = 0.0;
            const double avg = pricing::price_asian(zs, cache).price / disc;
            const double lower = disc * std::max(avg - req.strike, 0.0);
            check(price >= lower - 1e-9, "price below discounted intrinsic bound");
        }
        return "bounds hold on the DEJD ladder";
    });

    runner.run("jump_model_grid_convergence", [&] {
        double worst = 0.0;
        for (const auto& [name, spec] : benchmark_models()) {
            if (std::holds_alternative<models::CirParams>(spec) ||
                std::holds_alternative<models::CevParams>(spec))
                continue;
            pricing::PricingRequest req;
            req.model = spec;
            req.market = {100.0, models::rate_of(spec), 1.0};
            req.strike = 100.0;
            req.monitoring = pricing::Monitoring::discrete(12);
            const double base = pricing::price_asian(req).price;
            pricing::PricingRequest fine = req;
            fine.grid.n_states = 100;
            fine.grid.jump_mass_tol = req.grid.jump_mass_tol * 1e-2;  // wider tails
            const double refined = pricing::price_asian(fine).price;
            worst = std::max(worst, std::abs(refined - base) / base);
        }
        check(worst < 2e-3, worst_str(worst, 2e-3));
        return worst_str(worst, 2e-3);
    });

    return runner.results;
}

}  // namespace asianctmc::validate
