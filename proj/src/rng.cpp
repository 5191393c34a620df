#include "zzbwave/rng.hpp"

#include <cmath>

namespace zzbwave {

namespace {

constexpr uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<uint64_t>(p >> 64);
    lo = static_cast<uint64_t>(p);
}

} // namespace

std::array<uint64_t, 4> Philox4x64::block(uint64_t key0, uint64_t key1,
                                          const std::array<uint64_t, 4>& counter) {
    std::array<uint64_t, 4> c = counter;
    uint64_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
        uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return c;
}

void PhiloxStream::refill() {
    // The counter advances before each block, matching the reference stream
    // order of numpy.random.Philox: the first block is at counter 1.
    for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;
    }
    buf_ = Philox4x64::block(key0_, key1_, counter_);
    have_ = 4;
}

uint64_t PhiloxStream::next_u64() {
    if (have_ == 0) refill();
    return buf_[4 - have_--];
}

double PhiloxStream::uniform() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double PhiloxStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    cached_normal_ = rad * std::sin(ang);
    has_cached_normal_ = true;
    return rad * std::cos(ang);
}

} // namespace zzbwave
