#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "asianctmc/inversion.hpp"
#include "asianctmc/models.hpp"
#include "asianctmc/transforms.hpp"

namespace asianctmc::pricing {

using chain::Chain;

struct Market {
    double spot;
    double r;
    double maturity;
};

struct Monitoring {
    bool continuous = false;
    int n = 0;  // monitoring steps when discrete

    static Monitoring discrete(int n) { return {false, n}; }
    static Monitoring cont() { return {true, 0}; }
};

struct PricingRequest {
    models::ModelSpec model;
    models::GridSpec grid;
    Market market;
    double strike;
    Monitoring monitoring;
    inversion::InversionConfig inversion;
};

struct Diagnostics {
    double error_proxy = 0.0;  // inversion error proxy, price units
    bool warned = false;
    bool clamped = false;  // tiny negative price clamped to zero
    double seconds = 0.0;
    transforms::Strategy strategy = transforms::Strategy::backward;
    std::size_t n_states = 0;
};

struct PriceResult {
    double price;
    Diagnostics diag;
};

// Model rescaled so that `spot` becomes 1; prices scale linearly back.
models::ModelSpec normalized_model(const models::ModelSpec& spec, double spot);

// Chains cached per (normalized model, grid, delta); safe for concurrent use.
class ChainCache {
public:
    std::shared_ptr<const Chain> get_or_build(const models::ModelSpec& normalized,
                                              const models::GridSpec& grid,
                                              double maturity,
                                              std::optional<double> delta);

private:
    std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<const Chain>> entries_;
};

PriceResult price_asian(const PricingRequest& req);
PriceResult price_asian(const PricingRequest& req, ChainCache& cache);

// Prices directly on a prebuilt chain, strike in chain units. These are the
// building blocks price_asian assembles; the oracle suites drive them on raw
// chains that have no model behind them.
double price_discrete_chain(const Chain& c, double r, double maturity, int n,
                            double strike, std::size_t start_state,
                            const inversion::InversionConfig& cfg = {});
double price_continuous_chain(const Chain& c, double r, double maturity, double strike,
                              std::size_t start_state,
                              const inversion::InversionConfig& cfg = {},
                              transforms::Strategy strategy = transforms::Strategy::full_expm);

struct TableRow {
    double strike;
    std::optional<int> n;  // absent = continuous monitoring
    std::optional<double> benchmark;
    std::optional<double> price;
    std::optional<double> rel_err_pct;
    double seconds = 0.0;
    std::string error;  // non-empty when the row failed
};

// Prices every request (concurrently, sharing one chain cache) and reports
// relative errors in percent against the supplied benchmarks. Per-row errors
// are recorded; the table is still produced.
std::vector<TableRow> price_table(const std::vector<PricingRequest>& requests,
                                  const std::vector<std::optional<double>>& benchmarks);

struct TimingProfile {
    double build_seconds;         // one-time chain construction
    double median_price_seconds;  // per price, chain build excluded
    double median_total_seconds;  // per price including amortized build
    int repetitions;
};

TimingProfile timing_profile(const PricingRequest& req, int repetitions);

struct SweepRow {
    std::optional<int> n;  // absent = continuous
    double price;
    double gap_to_continuous;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // one per n, continuous last
    bool monotone_trend;         // discrete prices move one way toward the limit
    bool gaps_shrink;            // |price(n) - continuous| decreases with n
};

// Prices the request across the given monitoring frequencies plus the
// continuous limit.
SweepReport convergence_sweep(const PricingRequest& base, const std::vector<int>& n_values);

}  // namespace asianctmc::pricing
