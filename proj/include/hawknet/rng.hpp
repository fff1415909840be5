#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hawknet {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). The 64-bit key is the seed; the 128-bit
// counter is split into a 64-bit block index and a 64-bit stream id, so
// Philox(seed, s) and Philox(seed, s') never share a counter when s != s'.
// Replication r of any Monte-Carlo loop uses stream id r, which makes results
// independent of scheduling.
class Philox {
public:
    using result_type = std::uint64_t;

    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (buffered_ == 0) refill();
        return buffer_[--buffered_];
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1].
    double uniform_pos() noexcept { return 1.0 - uniform(); }

    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

    // One Philox4x32-10 block for an explicit key and counter; exposed for the
    // known-answer test.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 2> key,
                                              std::array<std::uint32_t, 4> counter) noexcept;

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_{0};
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_{0};
};

// Derives a child seed, used when one stage needs several independent seeded
// sub-stages (for example a history draw and a continuation draw).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

} // namespace hawknet
