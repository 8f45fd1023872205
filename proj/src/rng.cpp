#include "hermcalc/rng.hpp"

#include <cmath>

namespace hermcalc {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t kind, std::uint64_t level, std::uint64_t path) {
    return mix64(mix64(mix64(kind) ^ level) ^ path);
}

std::uint64_t RngStream::next_u64() {
    if (have_ == 0) {
        // numpy advances the 256-bit little-endian counter before generating,
        // so the first block of a fresh stream sits at counter value 1
        for (int i = 0; i < 4; ++i) {
            if (++counter_[static_cast<size_t>(i)] != 0) break;
        }
        block_ = philox4x64_10(counter_, key_);
        have_ = 4;
    }
    return block_[static_cast<size_t>(4 - have_--)];
}

double RngStream::uniform01() {
    // 53 random bits, centered: strictly inside (0,1)
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (have_gauss_) {
        have_gauss_ = false;
        return spare_gauss_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_gauss_ = r * std::sin(a);
    have_gauss_ = true;
    return r * std::cos(a);
}

double RngStream::exponential() { return -std::log(uniform01()); }

}  // namespace hermcalc
