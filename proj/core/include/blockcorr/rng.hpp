// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace blockcorr {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; full-avalanche mix of a 64-bit word.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-keyed stream descriptor. A (seed, stream) pair names one
/// reproducible random sequence; child(i) derives sub-streams so replicated
/// work can be scheduled in any order (or across threads) without changing
/// any result.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// 64-bit engine key for this stream. Two mixing rounds so that both
    /// coordinates avalanche.
    constexpr std::uint64_t key() const noexcept {
        const std::uint64_t h = detail::mix64(seed + detail::kGolden);
        return detail::mix64(h ^ (stream + detail::kGolden));
    }

    /// Sub-stream `index` rooted at this stream.
    constexpr RngStream child(std::uint64_t index) const noexcept {
        return RngStream{key(), index};
    }

    friend constexpr bool operator==(const RngStream&, const RngStream&) = default;
};

/// Deterministic generator over one RngStream. Distribution state is owned
/// here, so a fresh Rng constructed from the same stream always replays the
/// same sequence.
class Rng {
public:
    explicit Rng(RngStream stream) : engine_(stream.key()) {}

    double normal() { return normal_(engine_); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    double chi_squared(double dof) {
        return std::chi_squared_distribution<double>(dof)(engine_);
    }

    std::uint64_t bits() { return engine_(); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace blockcorr
