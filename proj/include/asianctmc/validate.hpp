#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asianctmc::validate {

struct ValidateOptions {
    std::uint64_t seed = 42;
    int cases = 25;                   // randomized instances per property
    std::uint64_t mc_paths = 100000;  // Monte Carlo paths for the MC property
    bool inject_broken_generator = false;  // negative-test hook
};

struct PropertyResult {
    std::string name;
    bool pass;
    std::string detail;  // worst deviation or the failing instance
};

// Runs every module invariant with seeded randomness. Deterministic for a
// given options struct.
std::vector<PropertyResult> run_all(const ValidateOptions& opts = {});

bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace asianctmc::validate
