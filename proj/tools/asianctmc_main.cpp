#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "asianctmc/config.hpp"
#include "asianctmc/kernels.hpp"
#include "asianctmc/pricing.hpp"
#include "asianctmc/tables.hpp"
#include "asianctmc/validate.hpp"

namespace {

using namespace asianctmc;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;   // config / argument / domain errors
constexpr int kExitNumeric = 2;  // numerical failures

pricing::PricingRequest load_request(const std::string& config_path,
                                     const std::vector<std::string>& overrides) {
    config::ConfigMap cfg = config::load_config_file(config_path);
    for (const std::string& o : overrides) config::apply_override(cfg, o);
    return config::build_request(cfg);
}

std::string format_n(const std::optional<int>& n) {
    return n ? std::to_string(*n) : "inf";
}

void write_table_csv(std::ostream& os, const std::vector<pricing::TableRow>& rows,
                     bool timing) {
    os << "K,n,benchmark,price,rel_err_pct,seconds\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.5f", row.strike);
        os << buf << ',' << format_n(row.n) << ',';
        if (row.benchmark) {
            std::snprintf(buf, sizeof(buf), "%.5f", *row.benchmark);
            os << buf;
        }
        os << ',';
        if (row.price) {
            std::snprintf(buf, sizeof(buf), "%.5f", *row.price);
            os << buf;
        }
        os << ',';
        if (row.rel_err_pct) {
            std::snprintf(buf, sizeof(buf), "%.4f", *row.rel_err_pct);
            os << buf;
        } else {
            os << "n/a";
        }
        std::snprintf(buf, sizeof(buf), "%.4f", timing ? row.seconds : 0.0);
        os << ',' << buf << '\n';
    }
}

int emit_csv(const std::string& output, const std::vector<pricing::TableRow>& rows,
             bool timing) {
    if (output.empty() || output == "-") {
        write_table_csv(std::cout, rows, timing);
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "error: cannot open output file '" << output << "'\n";
            return kExitDomain;
        }
        write_table_csv(out, rows, timing);
    }
    int failures = 0;
    for (const auto& row : rows)
        if (!row.error.empty()) {
            std::cerr << "row K=" << row.strike << " n=" << format_n(row.n)
                      << " failed: " << row.error << "\n";
            ++failures;
        }
    return failures == 0 ? kExitOk : kExitNumeric;
}

int run_price(const std::string& config_path, const std::vector<std::string>& overrides) {
    const pricing::PricingRequest req = load_request(config_path, overrides);
    const pricing::PriceResult res = pricing::price_asian(req);
    std::printf("price = %.5f\n", res.price);
    std::printf("error_proxy = %.3e%s\n", res.diag.error_proxy,
                res.diag.warned ? " (warning: above cap)" : "");
    std::printf("states = %zu, backend = %s, seconds = %.4f%s\n", res.diag.n_states,
                std::string(kernels::backend_name(kernels::active_backend())).c_str(),
                res.diag.seconds, res.diag.clamped ? ", clamped" : "");
    return kExitOk;
}

int run_table(int table_id, const std::string& output, bool timing) {
    const tables::BenchmarkTable& table = tables::benchmark_table(table_id);
    const auto requests = tables::table_requests(table);
    const auto benchmarks = tables::table_benchmarks(table);
    const auto rows = pricing::price_table(requests, benchmarks);
    return emit_csv(output, rows, timing);
}

int run_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& n_values_csv, const std::string& output) {
    pricing::PricingRequest req = load_request(config_path, overrides);
    std::vector<int> n_values;
    std::stringstream ss(n_values_csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) n_values.push_back(std::stoi(item));
    const pricing::SweepReport report = pricing::convergence_sweep(req, n_values);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!output.empty() && output != "-") {
        file.open(output);
        if (!file) {
            std::cerr << "error: cannot open output file '" << output << "'\n";
            return kExitDomain;
        }
        os = &file;
    }
    *os << "n,price,gap_to_continuous\n";
    char buf[64];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.5f,%.3e", row.price, row.gap_to_continuous);
        *os << format_n(row.n) << ',' << buf << '\n';
    }
    std::cout << "monotone_trend = " << (report.monotone_trend ? "yes" : "no")
              << ", gaps_shrink = " << (report.gaps_shrink ? "yes" : "no") << "\n";
    return kExitOk;
}

int run_validate(const validate::ValidateOptions& opts) {
    const auto results = validate::run_all(opts);
    for (const auto& r : results)
        std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
    const bool ok = validate::all_passed(results);
    std::printf("%zu properties, %s\n", results.size(), ok ? "all passed" : "FAILURES");
    return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asian option pricing on CTMC approximations"};
    app.require_subcommand(1);

    std::string config_path, output = "-", n_values = "12,25,50,100,250";
    std::vector<std::string> overrides;
    int table_id = 1;
    bool timing = false;
    validate::ValidateOptions vopts;

    CLI::App* price = app.add_subcommand("price", "price one option from a config file");
    price->add_option("--config", config_path, "config file")->required();
    price->add_option("--set", overrides, "override section.key=value");

    CLI::App* table = app.add_subcommand("table", "reproduce a benchmark table as CSV");
    table->add_option("--paper-table", table_id, "benchmark table id (1-5)")
        ->required()
        ->check(CLI::Range(1, 5));
    table->add_option("--output", output, "CSV path or - for stdout");
    table->add_flag("--timing", timing, "fill the seconds column with wall-clock times");

    CLI::App* sweep = app.add_subcommand("sweep", "monitoring-frequency convergence sweep");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--set", overrides, "override section.key=value");
    sweep->add_option("--n-values", n_values, "comma-separated monitoring counts");
    sweep->add_option("--output", output, "CSV path or - for stdout");

    CLI::App* validate_cmd = app.add_subcommand("validate", "run the oracle suite");
    validate_cmd->add_option("--seed", vopts.seed, "randomness seed");
    validate_cmd->add_option("--cases", vopts.cases, "random cases per property");
    validate_cmd->add_option("--mc-paths", vopts.mc_paths, "Monte Carlo paths");
    validate_cmd->add_flag("--inject-broken", vopts.inject_broken_generator,
                           "inject a broken generator fixture (negative test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (price->parsed()) return run_price(config_path, overrides);
        if (table->parsed()) return run_table(table_id, output, timing);
        if (sweep->parsed()) return run_sweep(config_path, overrides, n_values, output);
        if (validate_cmd->parsed()) return run_validate(vopts);
    } catch (const asianctmc::linalg::numeric_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const asianctmc::config::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitDomain;
}
