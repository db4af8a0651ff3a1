#pragma once

#include <cstdint>
#include <limits>

namespace gwalk {

/// Counter-based random stream: output i of stream k is mix64(key_k + i*gamma).
/// Streams are split by index, not by drawing, so replica r of a run always
/// sees the same sequence no matter which thread executes it or how many
/// draws the parent stream has made. The mixer is the splitmix64 finalizer.
class random_stream {
  public:
    using result_type = std::uint64_t;

    random_stream() : random_stream(0) {}
    explicit random_stream(std::uint64_t seed) : key_(mix64(seed + kSeedSalt)), ctr_(0), seed_(seed) {}

    /// Child stream fully determined by (this stream's key, index).
    random_stream split(std::uint64_t index) const {
        random_stream child;
        child.key_ = mix64(key_ ^ mix64(index + kSplitSalt));
        child.ctr_ = 0;
        child.seed_ = seed_;
        return child;
    }

    std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * kGamma); }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1. Lemire's multiply-shift with rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Seed this stream was originally constructed from (recorded in outputs).
    std::uint64_t seed() const noexcept { return seed_; }

    // UniformRandomBitGenerator interface.
    std::uint64_t operator()() { return next_u64(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kSeedSalt = 0x5851f42d4c957f2dULL;
    static constexpr std::uint64_t kSplitSalt = 0xd6e8feb86659fd93ULL;

    std::uint64_t key_;
    std::uint64_t ctr_;
    std::uint64_t seed_;
};

}  // namespace gwalk
