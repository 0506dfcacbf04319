#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace eqlab {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter counter, Key key) noexcept {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t prod0 = std::uint64_t{kMul0} * counter[0];
            const std::uint64_t prod1 = std::uint64_t{kMul1} * counter[2];
            const auto hi0 = static_cast<std::uint32_t>(prod0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(prod0);
            const auto hi1 = static_cast<std::uint32_t>(prod1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(prod1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return counter;
    }
};

/// Reproducible uniform variates addressed by (seed, stream, sample index,
/// slot). The value of a slot never depends on how samples are distributed
/// over workers or in which order they are drawn.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint32_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// Fills out with uniforms in [0, 1) for the given sample index. Each
    /// Philox block yields two doubles with 53 random bits each.
    void uniforms(std::uint64_t index, std::span<double> out) const noexcept {
        for (std::size_t slot = 0; slot < out.size(); slot += 2) {
            const Philox4x32::Counter block = Philox4x32::generate(
                {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                 static_cast<std::uint32_t>(slot / 2), stream_},
                key_);
            out[slot] = to_unit(block[0], block[1]);
            if (slot + 1 < out.size()) {
                out[slot + 1] = to_unit(block[2], block[3]);
            }
        }
    }

    static constexpr double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

private:
    Philox4x32::Key key_;
    std::uint32_t stream_;
};

} // namespace eqlab
