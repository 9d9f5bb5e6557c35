#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace countsim {

// Mixes a master seed with purpose tags so that every consumer (weight init,
// training data, test data, schedule draws, ...) gets an independent stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t subtag = 0);

// Deterministic random source. std::mt19937_64 has a standard-mandated output
// sequence; the <random> distributions do not, so every draw goes through the
// helpers below to keep runs bit-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0,n). Modulo bias is < n/2^64, irrelevant at our n.
    int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    // k distinct integers from {0,...,n-1}, partial Fisher-Yates order.
    std::vector<int> sample_distinct(int k, int n);

private:
    std::mt19937_64 engine_;
};

// Stream tags used across the project. Values are arbitrary but frozen:
// changing them changes every seeded run.
namespace stream {
inline constexpr std::uint64_t kInit = 0x11;
inline constexpr std::uint64_t kTrain = 0x22;
inline constexpr std::uint64_t kTest = 0x33;
inline constexpr std::uint64_t kSchedule = 0x44;
inline constexpr std::uint64_t kAnalysis = 0x55;
} // namespace stream

} // namespace countsim
