#pragma once

#include <array>
#include <cstdint>

namespace levyqsd {

/// Philox4x32 with 10 rounds (Salmon et al.'s counter-based generator).
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                                          std::array<std::uint32_t, 2> key) noexcept;

/// Stream of variates for one replication. The key is the run seed and the
/// counter carries (block index, replication index), so every replication
/// owns an independent substream no matter which thread runs it.
///
/// Distribution transforms are written out here rather than taken from
/// <random> so the variates are identical across standard libraries.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) noexcept;

    [[nodiscard]] std::uint32_t next_u32() noexcept;
    [[nodiscard]] std::uint64_t next_u64() noexcept;
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    [[nodiscard]] double uniform() noexcept;
    [[nodiscard]] double normal() noexcept;
    [[nodiscard]] double exponential(double rate) noexcept;
    /// Erlang(shape, rate) as a sum of exponentials.
    [[nodiscard]] double erlang(int shape, double rate) noexcept;
    /// Number of failures before the first success, P(N = n) = (1 - q) q^n.
    [[nodiscard]] std::uint64_t geometric_failures(double q) noexcept;

    [[nodiscard]] std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() noexcept;

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

}  // namespace levyqsd
