#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace asianctmc {

// Worker count: ASIANCTMC_THREADS overrides hardware concurrency.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks, one per
// worker; results must be written to caller-owned, index-addressed storage so
// that parallel and serial runs are bit-identical.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// SplitMix64 finalizer. Full-avalanche 64->64 mixer, usable as a
// counter-based generator: out_i = mix64(seed + i * golden).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based stream: draws are a pure function of (seed, stream, counter),
// so parallel and serial simulation orders produce identical paths.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed ^ mix64(stream + 0x2545f4914f6cdd1dull))) {}

    std::uint64_t next_u64() { return mix64(state_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
};

// Pairwise (tree) summation; deterministic and more accurate than left fold.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace asianctmc
