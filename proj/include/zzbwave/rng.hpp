#pragma once

#include <array>
#include <cstdint>

namespace zzbwave {

// Philox4x64-10 counter-based generator. A (key, counter) pair maps to four
// 64-bit outputs with no sequential state, so per-trial substreams keyed by
// (seed, trial index) produce identical draws under any work partitioning.
struct Philox4x64 {
    static std::array<uint64_t, 4> block(uint64_t key0, uint64_t key1,
                                         const std::array<uint64_t, 4>& counter);
};

// Sequential view over one substream: draws consume successive counter blocks
// of Philox4x64 keyed by (seed, stream).
class PhiloxStream {
public:
    PhiloxStream(uint64_t seed, uint64_t stream)
        : key0_(seed), key1_(stream), counter_{0, 0, 0, 0} {}

    uint64_t next_u64();
    // Uniform on (0,1), never returning an endpoint.
    double uniform();
    // Standard normal via Box-Muller.
    double normal();

private:
    void refill();

    uint64_t key0_;
    uint64_t key1_;
    std::array<uint64_t, 4> counter_;
    std::array<uint64_t, 4> buf_{};
    int have_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace zzbwave
