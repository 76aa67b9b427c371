#include "asianctmc/pricing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "asianctmc/kernels.hpp"
#include "asianctmc/util.hpp"

namespace asianctmc::pricing {

using linalg::CMatrix;
using linalg::CVector;
using linalg::cplx;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void check_request(const PricingRequest& req) {
    if (!(req.market.spot > 0.0))
        throw std::invalid_argument("price_asian: spot must be > 0");
    if (!(req.market.maturity > 0.0))
        throw std::invalid_argument("price_asian: maturity must be > 0");
    if (!(req.strike >= 0.0)) throw std::invalid_argument("price_asian: strike must be >= 0");
    if (!req.monitoring.continuous && req.monitoring.n < 1)
        throw std::invalid_argument("price_asian: discrete monitoring needs n >= 1");
    if (req.grid.span) {
        if (!(req.grid.span->first < req.market.spot &&
              req.market.spot < req.grid.span->second))
            throw std::invalid_argument("price_asian: spot outside grid span");
    }
}

std::string cache_key(const models::ModelSpec& spec, const models::GridSpec& grid,
                      double maturity, std::optional<double> delta) {
    std::ostringstream os;
    os.precision(17);
    os << models::model_name(spec) << '|';
    std::visit(
        [&os](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, models::CirParams>)
                os << p.kappa << ',' << p.theta_bar << ',' << p.sigma << ',' << p.r;
            else if constexpr (std::is_same_v<T, models::CevParams>)
                os << p.sigma << ',' << p.beta << ',' << p.r;
            else if constexpr (std::is_same_v<T, models::DejdParams>)
                os << p.sigma << ',' << p.lambda << ',' << p.p_up << ',' << p.eta1 << ','
                   << p.eta2 << ',' << p.r;
            else if constexpr (std::is_same_v<T, models::MjdParams>)
                os << p.sigma << ',' << p.lambda << ',' << p.jump_mean << ','
                   << p.jump_std << ',' << p.r;
            else
                os << p.c << ',' << p.g << ',' << p.m << ',' << p.y << ',' << p.r;
        },
        spec);
    os << '|' << grid.n_states << ',' << static_cast<int>(grid.placement) << ','
       << grid.concentration << ',' << static_cast<int>(grid.boundary) << ','
       << grid.jump_mass_tol;
    if (grid.span) os << ",span:" << grid.span->first << ':' << grid.span->second;
    os << "|T=" << maturity << "|delta=";
    if (delta)
        os << *delta;
    else
        os << "none";
    return os.str();
}

// discounted expected average, bypassing inversion (zero-strike fast path)
double zero_strike_price(const Chain& c, double r, double maturity,
                         const Monitoring& mon, std::size_t start) {
    const std::size_t n_states = c.size();
    if (!mon.continuous) {
        const CMatrix& p = c.p_delta();
        std::vector<double> preal(n_states * n_states);
        for (std::size_t i = 0; i < n_states * n_states; ++i)
            preal[i] = p.data()[i].real();
        std::vector<cplx> v(n_states), pv(n_states);
        for (std::size_t i = 0; i < n_states; ++i) v[i] = c.grid()[i];
        double acc = v[start].real();
        for (int step = 0; step < mon.n; ++step) {
            kernels::rmat_cvec(preal.data(), n_states, n_states, v.data(), pv.data());
            std::swap(v, pv);
            acc += v[start].real();
        }
        return std::exp(-r * maturity) / (mon.n + 1) * acc;
    }
    // E[A_T] through the augmented exponential
    //   exp([[G, x],[0,0]] T) = [[P(T), int_0^T P(u) x du], [0, 1]]
    CMatrix aug(n_states + 1, n_states + 1);
    for (std::size_t i = 0; i < n_states; ++i) {
        for (std::size_t j = 0; j < n_states; ++j)
            aug.at(i, j) = c.generator().rate(i, j);
        aug.at(i, n_states) = c.grid()[i];
    }
    const CMatrix e = linalg::expm(aug, maturity);
    return std::exp(-r * maturity) / maturity * e.at(start, n_states).real();
}

}  // namespace

models::ModelSpec normalized_model(const models::ModelSpec& spec, double spot) {
    if (!(spot > 0.0)) throw std::invalid_argument("normalized_model: spot must be > 0");
    models::ModelSpec out = spec;
    if (auto* p = std::get_if<models::CirParams>(&out)) {
        p->theta_bar /= spot;
        p->sigma /= std::sqrt(spot);
    } else if (auto* p = std::get_if<models::CevParams>(&out)) {
        p->sigma *= std::pow(spot, p->beta);
    }
    // jump models are scale-free in relative moves
    return out;
}

std::shared_ptr<const Chain> ChainCache::get_or_build(const models::ModelSpec& normalized,
                                                      const models::GridSpec& grid,
                                                      double maturity,
                                                      std::optional<double> delta) {
    const std::string key = cache_key(normalized, grid, maturity, delta);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    chain::Generator gen = models::build_generator(normalized, 1.0, maturity, grid);
    auto built = std::make_shared<const Chain>(std::move(gen), delta);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, std::move(built));
    return it->second;
}

PriceResult price_asian(const PricingRequest& req) {
    ChainCache cache;
    return price_asian(req, cache);
}

double price_discrete_chain(const Chain& c, double r, double maturity, int n,
                            double strike, std::size_t start_state,
                            const inversion::InversionConfig& cfg) {
    if (n < 1) throw std::invalid_argument("price_discrete_chain: n must be >= 1");
    if (strike == 0.0)
        return zero_strike_price(c, r, maturity, Monitoring::discrete(n), start_state);
    const double delta = maturity / n;
    auto g_vec = [&](cplx theta) {
        return transforms::g_discrete(c, r, {theta, n, delta}).values;
    };
    const auto inv = inversion::invert_vector(g_vec, (n + 1) * strike, cfg, start_state);
    return std::exp(-r * maturity) / (n + 1) * inv.value;
}

double price_continuous_chain(const Chain& c, double r, double maturity, double strike,
                              std::size_t start_state,
                              const inversion::InversionConfig& cfg,
                              transforms::Strategy strategy) {
    if (!(maturity > 0.0))
        throw std::invalid_argument("price_continuous_chain: maturity must be > 0");
    if (strike == 0.0)
        return zero_strike_price(c, r, maturity, Monitoring::cont(), start_state);
    auto g_vec = [&](cplx theta) {
        return transforms::g_continuous(c, r, {theta, maturity}, strategy).values;
    };
    const auto inv = inversion::invert_vector(g_vec, maturity * strike, cfg, start_state);
    return std::exp(-r * maturity) / maturity * inv.value;
}

PriceResult price_asian(const PricingRequest& req, ChainCache& cache) {
    check_request(req);
    const double t0 = now_seconds();
    const double spot = req.market.spot;
    const double r = req.market.r;
    const double maturity = req.market.maturity;
    const double strike = req.strike / spot;  // normalized units

    models::ModelSpec norm = normalized_model(req.model, spot);
    models::GridSpec grid = req.grid;
    if (grid.span) grid.span = {grid.span->first / spot, grid.span->second / spot};

    std::optional<double> delta;
    if (!req.monitoring.continuous) delta = maturity / req.monitoring.n;
    const std::shared_ptr<const Chain> c = cache.get_or_build(norm, grid, maturity, delta);
    const std::size_t start = c->grid().index_of(1.0);

    Diagnostics diag;
    diag.n_states = c->size();
    diag.strategy = req.monitoring.continuous ? transforms::Strategy::expm_action
                                              : transforms::Strategy::backward;

    double price;
    if (strike == 0.0) {
        price = spot * zero_strike_price(*c, r, maturity, req.monitoring, start);
    } else {
        inversion::InversionConfig cfg = req.inversion;
        cfg.scale = 1.0 / spot;
        double k_point, payoff_scale;
        std::function<CVector(cplx)> g_vec;
        if (req.monitoring.continuous) {
            k_point = maturity * strike;
            payoff_scale = std::exp(-r * maturity) / maturity;
            // Pade-plus-squaring on the full matrix outruns the Taylor action
            // at this size once ||(G - theta D) t|| gets large.
            diag.strategy = transforms::Strategy::full_expm;
            g_vec = [&](cplx theta) {
                return transforms::g_continuous(*c, r, {theta, maturity},
                                                transforms::Strategy::full_expm)
                    .values;
            };
        } else {
            k_point = (req.monitoring.n + 1) * strike;
            payoff_scale = std::exp(-r * maturity) / (req.monitoring.n + 1);
            g_vec = [&](cplx theta) {
                return transforms::g_discrete(*c, r, {theta, req.monitoring.n, *delta})
                    .values;
            };
        }
        const inversion::InversionResult inv =
            inversion::invert_vector(g_vec, k_point, cfg, start);
        price = spot * payoff_scale * inv.value;
        diag.error_proxy = spot * payoff_scale * inv.error_proxy;
        diag.warned = inv.warn;
        if (price < 0.0) {
            if (price < -1e-9 * spot)
                throw linalg::numeric_error("price_asian: negative price beyond tolerance",
                                            price);
            price = 0.0;
            diag.clamped = true;
        }
    }
    diag.seconds = now_seconds() - t0;
    return {price, diag};
}

std::vector<TableRow> price_table(const std::vector<PricingRequest>& requests,
                                  const std::vector<std::optional<double>>& benchmarks) {
    if (requests.empty()) throw std::invalid_argument("price_table: empty request list");
    if (!benchmarks.empty() && benchmarks.size() != requests.size())
        throw std::invalid_argument("price_table: benchmark count mismatch");

    std::vector<TableRow> rows(requests.size());
    ChainCache cache;
    parallel_for(requests.size(), [&](std::size_t i) {
        const PricingRequest& req = requests[i];
        TableRow& row = rows[i];
        row.strike = req.strike;
        if (!req.monitoring.continuous) row.n = req.monitoring.n;
        if (!benchmarks.empty()) row.benchmark = benchmarks[i];
        try {
            const PriceResult res = price_asian(req, cache);
            row.price = res.price;
            row.seconds = res.diag.seconds;
            if (row.benchmark && *row.benchmark != 0.0)
                row.rel_err_pct = (res.price - *row.benchmark) / *row.benchmark * 100.0;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

TimingProfile timing_profile(const PricingRequest& req, int repetitions) {
    if (repetitions < 3)
        throw std::invalid_argument("timing_profile: repetitions must be >= 3");
    check_request(req);

    const double tb0 = now_seconds();
    ChainCache cache;
    {
        PricingRequest warm = req;
        (void)price_asian(warm, cache);  // builds and caches the chain
    }
    const double build_seconds = now_seconds() - tb0;

    std::vector<double> samples(repetitions);
    for (int i = 0; i < repetitions; ++i) {
        const double t0 = now_seconds();
        (void)price_asian(req, cache);
        samples[i] = now_seconds() - t0;
    }
    std::sort(samples.begin(), samples.end());
    const double median = samples[samples.size() / 2];
    return {build_seconds, median, median + build_seconds, repetitions};
}

SweepReport convergence_sweep(const PricingRequest& base, const std::vector<int>& n_values) {
    if (n_values.empty())
        throw std::invalid_argument("convergence_sweep: need at least one n");
    for (std::size_t i = 1; i < n_values.size(); ++i)
        if (n_values[i] <= n_values[i - 1])
            throw std::invalid_argument("convergence_sweep: n values must increase");

    ChainCache cache;
    SweepReport report;
    PricingRequest cont = base;
    cont.monitoring = Monitoring::cont();
    const double continuous_price = price_asian(cont, cache).price;

    for (int n : n_values) {
        PricingRequest req = base;
        req.monitoring = Monitoring::discrete(n);
        const double p = price_asian(req, cache).price;
        report.rows.push_back({n, p, p - continuous_price});
    }
    report.rows.push_back({std::nullopt, continuous_price, 0.0});

    report.monotone_trend = true;
    for (std::size_t i = 2; i + 1 < report.rows.size(); ++i) {
        const double d1 = report.rows[i - 1].price - report.rows[i - 2].price;
        const double d2 = report.rows[i].price - report.rows[i - 1].price;
        if (d1 * d2 < 0.0) report.monotone_trend = false;
    }
    report.gaps_shrink =
        std::abs(report.rows.front().gap_to_continuous) >
        std::abs(report.rows[report.rows.size() - 2].gap_to_continuous);
    return report;
}

}  // namespace asianctmc::pricing
