#include "asianctmc/tables.hpp"

#include <cmath>
#include <stdexcept>

namespace asianctmc::tables {

using models::CevParams;
using models::CgmyParams;
using models::CirParams;
using models::DejdParams;
using models::GridSpec;
using models::MjdParams;
using models::ModelSpec;

namespace {

constexpr int kContinuous = -1;

std::vector<BenchmarkTable> build_tables() {
    std::vector<BenchmarkTable> out;

    // ---- Table 1: CIR ------------------------------------------------------
    {
        const CirParams cir{2.0, 1.0, 1.0, 0.05};
        BenchmarkTable t;
        t.id = 1;
        t.title = "Asian options under the CIR model";
        t.spot = 1.0;
        t.maturity = 1.0;
        t.grid.n_states = 50;
        t.params_confirmed = false;
        const double strikes[] = {0.90, 0.95, 1.00, 1.05, 1.10};
        struct Block {
            int n;
            double bench[5];
            double ref[5];
        };
        const Block blocks[] = {
            {12,
             {0.21279, 0.18659, 0.16282, 0.14140, 0.12223},
             {0.21300, 0.18674, 0.16297, 0.14158, 0.12245}},
            {25,
             {0.21428, 0.18810, 0.16432, 0.14287, 0.12365},
             {0.21449, 0.18823, 0.16445, 0.14303, 0.12385}},
            {50,
             {0.21501, 0.18883, 0.16505, 0.14359, 0.12434},
             {0.21521, 0.18896, 0.16517, 0.14374, 0.12453}},
            {100,
             {0.21538, 0.18920, 0.16542, 0.14395, 0.12470},
             {0.21558, 0.18933, 0.16554, 0.14410, 0.12489}},
            {250,
             {0.21560, 0.18943, 0.16565, 0.14418, 0.12492},
             {0.21581, 0.18956, 0.16578, 0.14432, 0.12510}},
            {kContinuous,
             {0.21575, 0.18958, 0.16580, 0.14433, 0.12506},
             {0.21592, 0.18976, 0.16600, 0.14457, 0.12534}},
        };
        for (const Block& b : blocks)
            for (int k = 0; k < 5; ++k)
                t.rows.push_back({cir, strikes[k], b.n, b.bench[k], b.ref[k]});
        out.push_back(std::move(t));
    }

    // ---- Table 2: CEV ------------------------------------------------------
    {
        BenchmarkTable t;
        t.id = 2;
        t.title = "Asian options under the CEV model";
        t.spot = 100.0;
        t.maturity = 1.0;
        t.grid.n_states = 50;
        t.params_confirmed = false;
        const double strikes[] = {80, 90, 100, 110, 120};
        struct Block {
            double beta;
            int n;
            double bench[5];
            double ref[5];
        };
        const double r = 0.09;
        auto cev = [&](double beta) {
            return CevParams{0.2 * std::pow(100.0, -beta), beta, r};
        };
        const Block blocks[] = {
            {0.25, 250,
             {21.60167, 13.15550, 6.84034, 3.07180, 1.22841},
             {21.60980, 13.15551, 6.82623, 3.05697, 1.22502}},
            {-0.25, 250,
             {21.67122, 13.26903, 6.84853, 2.92962, 1.04072},
             {21.67979, 13.26768, 6.83409, 2.91599, 1.04154}},
            {-0.5, 250,
             {21.71428, 13.32877, 6.85365, 2.86119, 0.95542},
             {21.72238, 13.32676, 6.83906, 2.84824, 0.95805}},
            {0.25, kContinuous,
             {21.59408, 13.15109, 6.83859, 3.07333, 1.23175},
             {21.61093, 13.15920, 6.83146, 3.06136, 1.22765}},
            {-0.25, kContinuous,
             {21.66618, 13.26741, 6.85150, 2.93166, 1.04453},
             {21.68112, 13.27137, 6.83932, 2.92050, 1.04420}},
            {-0.5, kContinuous,
             {21.71118, 13.32850, 6.85984, 2.86666, 0.95995},
             {21.72379, 13.33044, 6.84429, 2.85281, 0.96070}},
        };
        for (const Block& b : blocks)
            for (int k = 0; k < 5; ++k)
                t.rows.push_back({cev(b.beta), strikes[k], b.n, b.bench[k], b.ref[k]});
        out.push_back(std::move(t));
    }

    // ---- Table 3: DEJD -----------------------------------------------------
    {
        BenchmarkTable t;
        t.id = 3;
        t.title = "Asian options under the DEJD model";
        t.spot = 100.0;
        t.maturity = 1.0;
        t.grid.n_states = 50;
        t.params_confirmed = false;

        // Part (I): discretely monitored
        const DejdParams kou_d{0.120381, 0.330966, 0.2071, 9.65997, 3.13868, 0.0367};
        struct DBlock {
            int n;
            double bench[3];
            double ref[3];
        };
        const double strikes_d[] = {90, 100, 110};
        const DBlock dblocks[] = {
            {12, {12.71236, 5.01712, 1.04142}, {12.70873, 5.01263, 1.03989}},
            {50, {12.74369, 5.05809, 1.06878}, {12.74025, 5.05371, 1.06725}},
            {250, {12.75241, 5.06949, 1.07646}, {12.74881, 5.06504, 1.07489}},
        };
        for (const DBlock& b : dblocks)
            for (int k = 0; k < 3; ++k)
                t.rows.push_back({kou_d, strikes_d[k], b.n, b.bench[k], b.ref[k]});

        // Part (II): continuously monitored, sigma ladder
        auto kou_c = [](double sigma) {
            return DejdParams{sigma, 3.0, 0.6, 25.0, 25.0, 0.09};
        };
        struct CBlock {
            double sigma;
            double strikes[5];
            double bench[5];
            double ref[5];
        };
        const CBlock cblocks[] = {
            {0.05,
             {90, 95, 100, 105, 110},
             {13.47952, 9.16588, 5.38761, 2.72681, 1.28264},
             {13.47752, 9.16582, 5.38772, 2.72530, 1.28198}},
            {0.1,
             {90, 95, 100, 105, 110},
             {13.55964, 9.41962, 5.91537, 3.35071, 1.74896},
             {13.56389, 9.42470, 5.91780, 3.35143, 1.74943}},
            {0.2,
             {80, 90, 100, 110, 120},
             {14.17380, 10.53795, 7.48805, 5.09001, 3.32061},
             {14.17568, 10.53807, 7.48648, 5.08736, 3.31789}},
            {0.3,
             {80, 90, 100, 110, 120},
             {15.33688, 12.10723, 9.35336, 7.08059, 5.26109},
             {15.33575, 12.10441, 9.34914, 7.07551, 5.25589}},
            {0.4,
             {80, 90, 100, 110, 120},
             {16.81490, 13.87995, 11.33257, 9.16131, 7.34063},
             {16.81958, 13.88190, 11.33275, 9.16048, 7.33944}},
            {0.5,
             {80, 90, 100, 110, 120},
             {18.46259, 15.75006, 13.36027, 11.27716, 9.47826},
             {18.46148, 15.74575, 13.35386, 11.26950, 9.47003}},
        };
        for (const CBlock& b : cblocks)
            for (int k = 0; k < 5; ++k)
                t.rows.push_back(
                    {kou_c(b.sigma), b.strikes[k], kContinuous, b.bench[k], b.ref[k]});
        out.push_back(std::move(t));
    }

    // ---- Table 4: MJD ------------------------------------------------------
    {
        BenchmarkTable t;
        t.id = 4;
        t.title = "Asian options under the MJD model";
        t.spot = 100.0;
        t.maturity = 1.0;
        t.grid.n_states = 50;
        t.params_confirmed = false;
        const MjdParams mjd{0.126349, 0.174814, -0.390078, 0.338796, 0.0367};
        const double strikes[] = {90, 100, 110};
        struct Block {
            int n;
            double bench[3];
            double ref[3];
        };
        const Block blocks[] = {
            {12, {12.71066, 5.01127, 1.05162}, {12.70636, 5.00546, 1.04940}},
            {50, {12.74093, 5.05246, 1.07959}, {12.73665, 5.04667, 1.07733}},
            {250, {12.74917, 5.06381, 1.08740}, {12.74490, 5.05803, 1.08512}},
            {kContinuous, {12.74857, 5.05974, 1.08413}, {12.74699, 5.06095, 1.08712}},
        };
        for (const Block& b : blocks)
            for (int k = 0; k < 3; ++k)
                t.rows.push_back({mjd, strikes[k], b.n, b.bench[k], b.ref[k]});
        out.push_back(std::move(t));
    }

    // ---- Table 5: CGMY -----------------------------------------------------
    {
        BenchmarkTable t;
        t.id = 5;
        t.title = "Asian options under the CGMY model";
        t.spot = 100.0;
        t.maturity = 1.0;
        t.grid.n_states = 50;
        t.params_confirmed = false;
        const CgmyParams cgmy{4.0, 50.0, 60.0, 0.7, 0.0367};
        const double strikes[] = {90, 100, 110};
        struct Block {
            int n;
            double bench[3];
            double ref[3];
        };
        const Block blocks[] = {
            {12, {12.70625, 5.03492, 1.02115}, {12.70318, 5.02612, 1.01304}},
            {50, {12.73854, 5.07570, 1.04674}, {12.73644, 5.06716, 1.03854}},
            {250, {12.74737, 5.08694, 1.05389}, {12.74549, 5.07849, 1.04567}},
            {kContinuous, {12.74788, 5.08865, 1.05810}, {12.74780, 5.08138, 1.05751}},
        };
        for (const Block& b : blocks)
            for (int k = 0; k < 3; ++k)
                t.rows.push_back({cgmy, strikes[k], b.n, b.bench[k], b.ref[k]});
        out.push_back(std::move(t));
    }

    return out;
}

}  // namespace

const std::vector<BenchmarkTable>& benchmark_tables() {
    static const std::vector<BenchmarkTable> tables = build_tables();
    return tables;
}

const BenchmarkTable& benchmark_table(int id) {
    for (const BenchmarkTable& t : benchmark_tables())
        if (t.id == id) return t;
    throw std::invalid_argument("benchmark_table: unknown table id " + std::to_string(id));
}

std::vector<pricing::PricingRequest> table_requests(const BenchmarkTable& table) {
    std::vector<pricing::PricingRequest> reqs;
    reqs.reserve(table.rows.size());
    for (const RefRow& row : table.rows) {
        pricing::PricingRequest req;
        req.model = row.model;
        req.grid = table.grid;
        req.market = {table.spot, models::rate_of(row.model), table.maturity};
        req.strike = row.strike;
        req.monitoring = row.n == kContinuous ? pricing::Monitoring::cont()
                                              : pricing::Monitoring::discrete(row.n);
        reqs.push_back(std::move(req));
    }
    return reqs;
}

std::vector<std::optional<double>> table_benchmarks(const BenchmarkTable& table) {
    std::vector<std::optional<double>> out;
    out.reserve(table.rows.size());
    for (const RefRow& row : table.rows) out.emplace_back(row.benchmark);
    return out;
}

}  // namespace asianctmc::tables
