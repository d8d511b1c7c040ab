#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace noisecal {

std::uint64_t fnv1a_64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent stream identified by (seed, label).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view label);

/// Pseudo-random stream with platform-independent uniform and normal draws.
///
/// std::normal_distribution is implementation-defined, so record synthesis
/// uses Box-Muller on the raw 64-bit engine output to stay bit-reproducible
/// across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t seed, std::string_view label) : engine_(derive_stream_seed(seed, label)) {}

    /// Uniform on [0, 1).
    double uniform();
    double normal();
    std::uint64_t next_u64() { return engine_(); }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace noisecal
