// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "asianctmc/chain.hpp"
#include "asianctmc/inversion.hpp"
#include "asianctmc/models.hpp"
#include "asianctmc/oracles.hpp"
#include "asianctmc/pricing.hpp"
#include "asianctmc/tables.hpp"
#include "asianctmc/transforms.hpp"
#include "asianctmc/util.hpp"
#include "asianctmc/validate.hpp"

using namespace asianctmc;
using chain::Chain;
using linalg::CVector;
using linalg::cplx;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
    std::printf("[%s] criterion %d: %s — %s\n", o.pass ? "PASS" : "FAIL", id,
                name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

double max_gap(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double max_rel(const CVector& a, const CVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double s = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / s);
    }
    return worst;
}

// ---- criterion 1: transform-inversion equivalence --------------------------

Outcome criterion1() {
    const double t0 = now_s();
    double worst_z = 0.0, worst_mu = 0.0;
    for (int s = 0; s < 100; ++s) {
        const std::uint64_t seed = 1000 + s;
        const std::size_t n_states = 2 + (mix64(seed) % 5);  // N <= 6
        Chain c = chain::make_random_chain(seed, n_states, 0.25);
        CounterRng rng(seed, 51);
        const cplx theta(0.4 + 2.5 * rng.next_double(), 4.0 * (rng.next_double() - 0.5));
        const double r = 0.03;
        for (int n = 0; n <= 8; ++n) {
            const CVector coeff = oracles::z_coefficient(c, r, theta, n);
            const CVector direct = transforms::g_discrete(c, r, {theta, n, 0.25}).values;
            worst_z = std::max(worst_z, max_gap(coeff, direct));
        }
        for (double t : {0.25, 1.0, 4.0}) {
            const CVector inv = oracles::mu_invert(c, r, theta, t);
            const CVector direct = transforms::g_continuous(c, r, {theta, t}).values;
            worst_mu = std::max(worst_mu, max_gap(inv, direct));
        }
    }
    const double elapsed = now_s() - t0;
    std::ostringstream os;
    os << "z-coeff worst " << worst_z << " (tol 1e-9), mu-invert worst " << worst_mu
       << " (tol 1e-6), " << elapsed << "s (cap 60s)";
    return {worst_z <= 1e-9 && worst_mu <= 1e-6 && elapsed < 60.0, os.str()};
}

// ---- criterion 2: strategy equivalence and complexity slopes ---------------

double backward_cost_seconds(const Chain& c, int n) {
    const cplx theta(1.3, 2.1);
    const double delta = *c.delta();
    // loop until the window is long enough for a stable clock reading
    int iters = 1;
    double best = 1e300;
    for (int attempt = 0; attempt < 12; ++attempt) {
        const double t0 = now_s();
        for (int i = 0; i < iters; ++i)
            (void)transforms::g_discrete(c, 0.04, {theta, n, delta});
        const double dt = now_s() - t0;
        if (dt < 0.02) {
            iters *= 4;
            continue;
        }
        best = std::min(best, dt / iters);
        if (attempt >= 9) break;
    }
    return best;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome criterion2() {
    // equivalence at N = 10, n = 25
    Chain c10 = chain::make_random_chain(777, 10, 0.2);
    CounterRng rng(777, 53);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const cplx theta(0.3 + 2.5 * rng.next_double(), 6.0 * (rng.next_double() - 0.5));
        const auto b = transforms::g_discrete(c10, 0.05, {theta, 25, 0.2});
        const auto f = transforms::g_discrete_forward(c10, 0.05, {theta, 25, 0.2});
        worst = std::max(worst, max_rel(b.values, f.values));
    }

    // cost ~ n at fixed N = 50
    std::vector<double> ns = {25, 50, 100, 200}, tn;
    Chain c50 = chain::make_random_chain(778, 50, 0.2);
    for (double n : ns) tn.push_back(backward_cost_seconds(c50, static_cast<int>(n)));
    const double slope_n = fit_loglog_slope(ns, tn);

    // cost ~ N^2 at fixed n = 64
    std::vector<double> sizes = {25, 50, 100, 200}, ts;
    for (double size : sizes) {
        Chain c = chain::make_random_chain(779, static_cast<std::size_t>(size), 0.2);
        ts.push_back(backward_cost_seconds(c, 64));
    }
    const double slope_size = fit_loglog_slope(sizes, ts);

    std::ostringstream os;
    os << "fwd/bwd worst rel " << worst << " (tol 1e-12), slope(n) " << slope_n
       << " (want 1 +- 0.3), slope(N) " << slope_size << " (want 2 +- 0.3)";
    const bool pass = worst <= 1e-12 && std::abs(slope_n - 1.0) <= 0.3 &&
                      std::abs(slope_size - 2.0) <= 0.3;
    return {pass, os.str()};
}

// ---- criterion 3: closed-form inversion pairs -------------------------------

Outcome criterion3() {
    const inversion::InversionConfig cfg;
    double worst = 0.0;
    {
        auto g = [](cplx t) { return 1.0 / (t * t); };
        worst = std::max(worst,
                         std::abs(inversion::invert_laplace(g, 1.0, cfg).value - 1.0));
    }
    {
        auto g = [](cplx t) { return 1.0 / (t * (t + 1.0)); };
        worst = std::max(worst, std::abs(inversion::invert_laplace(g, 2.0, cfg).value -
                                         (1.0 - std::exp(-2.0))));
    }
    {
        auto g = [](cplx t) { return (t + std::exp(-t) - 1.0) / (t * t); };
        worst = std::max(worst,
                         std::abs(inversion::invert_laplace(g, 0.5, cfg).value - 0.5));
    }
    std::ostringstream os;
    os << "worst " << worst << " (tol 1e-8)";
    return {worst <= 1e-8, os.str()};
}

// ---- criterion 4: exhaustive-oracle agreement -------------------------------

Outcome criterion4() {
    inversion::InversionConfig cfg;
    cfg.a_param = 28.0;
    cfg.series_terms = 400;
    cfg.euler_terms = 30;
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        const std::uint64_t seed = 4000 + s;
        Chain c = chain::make_random_chain(seed, 4, 0.25);
        CounterRng rng(seed, 59);
        const double strike =
            (0.6 + 0.8 * rng.next_double()) * (c.grid()[1] + c.grid()[2]) / 2.0;
        const std::size_t start = mix64(seed) % 4;
        const double exact =
            oracles::enumerate_discrete_price(c, 0.03, 1.0, 4, strike, start);
        const double piped =
            pricing::price_discrete_chain(c, 0.03, 1.0, 4, strike, start, cfg);
        worst = std::max(worst, std::abs(exact - piped));
    }
    std::ostringstream os;
    os << "worst " << worst << " over 50 seeds (tol 1e-6)";
    return {worst <= 1e-6, os.str()};
}

// ---- criterion 5: Monte Carlo agreement ------------------------------------

Outcome criterion5() {
    std::ostringstream os;
    bool pass = true;
    for (const auto& table : tables::benchmark_tables()) {
        const models::ModelSpec& spec = table.rows.front().model;
        const models::ModelSpec norm = pricing::normalized_model(spec, table.spot);
        chain::Generator gen = models::build_generator(norm, 1.0, table.maturity, table.grid);
        Chain c(std::move(gen));
        const std::size_t start = c.grid().index_of(1.0);
        const double piped =
            pricing::price_continuous_chain(c, models::rate_of(spec), table.maturity,
                                            1.0, start);
        const auto mc = oracles::mc_continuous_price(
            c, models::rate_of(spec), table.maturity, 1.0, start, {1000000, 2024, 64});
        const double gap = std::abs(piped - mc.price);
        const bool ok = gap <= 3.0 * mc.std_error;
        pass = pass && ok;
        os << models::model_name(spec) << " gap " << gap << " vs 3se "
           << 3.0 * mc.std_error << (ok ? "; " : " [FAIL]; ");
    }
    return {pass, os.str()};
}

// ---- criterion 6: table reproduction / convergence fallback -----------------

Outcome criterion6() {
    std::ostringstream os;
    bool pass = true;

    // published-value tracking, asserted only where parameters are confirmed
    for (const auto& table : tables::benchmark_tables()) {
        const auto reqs = tables::table_requests(table);
        const auto rows = pricing::price_table(reqs, tables::table_benchmarks(table));
        double worst = 0.0;
        bool errored = false;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].price) {
                errored = true;
                continue;
            }
            const double ref = table.rows[i].reference;
            worst = std::max(worst, std::abs(*rows[i].price - ref) / ref);
        }
        const double tol = table.id == 1 ? 3e-3 : 1e-2;
        os << "table " << table.id << " max dev " << worst * 100.0 << "%";
        if (errored) os << " (rows errored)";
        if (table.params_confirmed) {
            const bool ok = !errored && worst <= tol;
            pass = pass && ok;
            os << (ok ? " <= " : " > ") << tol * 100.0 << "%; ";
        } else {
            os << " [reported only: parameters reconstructed]; ";
        }
    }

    // fallback half: doubling N moves each at-the-money price < 0.2%
    double worst_conv = 0.0;
    for (const auto& table : tables::benchmark_tables()) {
        pricing::PricingRequest req;
        req.model = table.rows.front().model;
        req.grid = table.grid;
        req.market = {table.spot, models::rate_of(req.model), table.maturity};
        req.strike = table.spot;
        req.monitoring = pricing::Monitoring::discrete(12);
        const double base = pricing::price_asian(req).price;
        pricing::PricingRequest fine = req;
        fine.grid.n_states = 2 * req.grid.n_states;
        if (fine.grid.span) {
            fine.grid.span->first *= 0.75;
            fine.grid.span->second *= 1.25;
        } else {
            fine.grid.jump_mass_tol *= 1e-2;
        }
        const double refined = pricing::price_asian(fine).price;
        worst_conv = std::max(worst_conv, std::abs(refined - base) / base);
    }
    os << "N-doubling ATM worst " << worst_conv * 100.0 << "% (tol 0.2%)";
    pass = pass && worst_conv < 2e-3;
    return {pass, os.str()};
}

// ---- criterion 7: timing -----------------------------------------------------

Outcome criterion7() {
    const auto& t1 = tables::benchmark_table(1);
    const auto reqs = tables::table_requests(t1);

    pricing::PricingRequest discrete250 = reqs[0];
    discrete250.monitoring = pricing::Monitoring::discrete(250);
    const auto prof_d = pricing::timing_profile(discrete250, 5);

    pricing::PricingRequest continuous = reqs[0];
    continuous.monitoring = pricing::Monitoring::cont();
    const auto prof_c = pricing::timing_profile(continuous, 5);

    const double t0 = now_s();
    (void)pricing::price_table(reqs, tables::table_benchmarks(t1));
    const double table_seconds = now_s() - t0;

    std::ostringstream os;
    os << "n=250 discrete " << prof_d.median_price_seconds << "s (cap 0.1), continuous "
       << prof_c.median_price_seconds << "s (cap 0.15), table-of-30 " << table_seconds
       << "s (cap 5)";
    const bool pass = prof_d.median_price_seconds <= 0.1 &&
                      prof_c.median_price_seconds <= 0.15 && table_seconds <= 5.0;
    return {pass, os.str()};
}

// ---- criterion 8: invariant suite -------------------------------------------

Outcome criterion8() {
    const auto results = validate::run_all({});
    int failed = 0;
    std::ostringstream os;
    for (const auto& r : results)
        if (!r.pass) {
            ++failed;
            os << r.name << ": " << r.detail << "; ";
        }
    if (failed == 0) {
        os << results.size() << " properties passed, 100% of generator builds valid";
        return {true, os.str()};
    }
    return {false, os.str()};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    report(1, "transform-inversion equivalence", criterion1());
    report(2, "strategy equivalence and complexity slopes", criterion2());
    report(3, "closed-form inversion pairs", criterion3());
    report(4, "exhaustive-oracle agreement", criterion4());
    report(5, "Monte Carlo agreement", criterion5());
    report(6, "benchmark-table reproduction / grid convergence", criterion6());
    report(7, "timing", criterion7());
    report(8, "invariant suite", criterion8());
    std::printf("%s (%d failing)\n", failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                failures);
    return failures == 0 ? 0 : 1;
}
