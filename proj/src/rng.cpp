#include "levyqsd/rng.hpp"

#include <cmath>
#include <limits>

namespace levyqsd {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53U;
constexpr std::uint32_t kM1 = 0xCD9E8D57U;
constexpr std::uint32_t kW0 = 0x9E3779B9U;
constexpr std::uint32_t kW1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32U);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kW0;
            k[1] += kW1;
        }
        std::uint32_t hi0 = 0;
        std::uint32_t lo0 = 0;
        std::uint32_t hi1 = 0;
        std::uint32_t lo1 = 0;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U)}, stream_(stream) {}

void Rng::refill() noexcept {
    const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32U),
                                           static_cast<std::uint32_t>(stream_),
                                           static_cast<std::uint32_t>(stream_ >> 32U)};
    buffer_ = philox4x32_10(ctr, key_);
    ++block_;
    pos_ = 0;
}

std::uint32_t Rng::next_u32() noexcept {
    if (pos_ == 4) refill();
    return buffer_[static_cast<std::size_t>(pos_++)];
}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32U) | lo;
}

double Rng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11U) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    // Box-Muller; both outputs are used.
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * 3.14159265358979323846 * uniform();
    spare_normal_ = r * std::sin(a);
    has_spare_normal_ = true;
    return r * std::cos(a);
}

double Rng::exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

double Rng::erlang(int shape, double rate) noexcept {
    double sum = 0.0;
    for (int i = 0; i < shape; ++i) sum += exponential(rate);
    return sum;
}

std::uint64_t Rng::geometric_failures(double q) noexcept {
    if (q <= 0.0) return 0;
    const double n = std::floor(std::log(uniform()) / std::log(q));
    if (!(n < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(n);
}

}  // namespace levyqsd
