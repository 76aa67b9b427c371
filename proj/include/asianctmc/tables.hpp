#pragma once

#include <string>
#include <vector>

#include "asianctmc/pricing.hpp"

namespace asianctmc::tables {

struct RefRow {
    models::ModelSpec model;
    double strike;
    int n;  // -1 = continuous monitoring
    double benchmark;  // published external benchmark price
    double reference;  // published CTMC (N=50) price this engine tracks
};

struct BenchmarkTable {
    int id;
    std::string title;
    double spot;
    double maturity;
    models::GridSpec grid;
    // Reference parameter sets are transcribed by provenance where published
    // and reconstructed against the reference prices otherwise; tables with
    // reconstructed parameters keep the tighter checks advisory.
    bool params_confirmed;
    std::vector<RefRow> rows;
};

const std::vector<BenchmarkTable>& benchmark_tables();
const BenchmarkTable& benchmark_table(int id);

// Pricing requests (and benchmark values) for every row of a table.
std::vector<pricing::PricingRequest> table_requests(const BenchmarkTable& table);
std::vector<std::optional<double>> table_benchmarks(const BenchmarkTable& table);

}  // namespace asianctmc::tables
