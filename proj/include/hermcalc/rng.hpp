#pragma once

#include <array>
#include <cstdint>

namespace hermcalc {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11), the same
// variant numpy exposes as np.random.Philox; unit tests pin raw blocks
// against that implementation.  Streams are cheap: any (key, counter) pair
// can be jumped to directly, so every (experiment, level, path) tuple gets
// its own independent, platform-reproducible stream.
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key);

// splitmix64 finalizer; used to hash labels/indices into stream ids
std::uint64_t mix64(std::uint64_t x);

class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : key_{master_seed, stream_id}, counter_{0, 0, 0, 0}, have_(0), have_gauss_(false) {}

    std::uint64_t next_u64();
    double uniform01();     // in (0, 1), never exactly 0 or 1
    double gaussian();      // standard normal via Box-Muller on own uniforms
    double exponential();   // rate 1

    std::uint64_t stream_id() const { return key_[1]; }

private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> block_{};
    int have_;
    bool have_gauss_;
    double spare_gauss_ = 0.0;
};

// Deterministic stream-id derivation: experiment kind, refinement level and
// path index are mixed into a single 64-bit id.
std::uint64_t derive_stream(std::uint64_t kind, std::uint64_t level, std::uint64_t path);

}  // namespace hermcalc
