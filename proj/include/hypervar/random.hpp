#pragma once

#include <array>
#include <cstdint>

namespace hypervar {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream addressed by (seed, replicate, sample).
///
/// Every (seed, replicate, sample) triple names an independent stream, so
/// replicates and samples can be generated in any order or on any thread with
/// identical results.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t sample);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

}  // namespace hypervar
