#include "stochosc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stochosc {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round(const Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMulA, c[0], hi0, lo0);
    mulhilo(kMulB, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// 53-bit uniform in (0, 1].
inline double to_unit_interval(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    ctr = round(ctr, key);
    for (int r = 1; r < 10; ++r) {
        key[0] += kWeylA;
        key[1] += kWeylB;
        ctr = round(ctr, key);
    }
    return ctr;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_lo_(static_cast<std::uint32_t>(stream)),
      stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

std::array<std::uint32_t, 4> CounterStream::block(std::uint64_t index) const noexcept {
    return Philox4x32::generate(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_lo_, stream_hi_}, key_);
}

std::pair<double, double> CounterStream::uniform_pair(std::uint64_t index) const noexcept {
    const auto b = block(index);
    return {to_unit_interval(b[0], b[1]), to_unit_interval(b[2], b[3])};
}

std::pair<double, double> CounterStream::normal_pair(std::uint64_t index) const noexcept {
    const auto [u1, u2] = uniform_pair(index);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

void fill_wiener_increments(std::uint64_t seed, std::uint64_t path_index, std::size_t m, std::uint64_t first_step,
                            std::size_t n_steps, double dt, std::span<double> out) {
    if (!(dt > 0.0)) throw std::invalid_argument("wiener increments: dt must be positive");
    if (out.size() < n_steps * m) throw std::invalid_argument("wiener increments: output buffer too small");
    const CounterStream stream(seed, path_index);
    const double scale = std::sqrt(dt);
    const std::uint64_t blocks_per_step = (m + 1) / 2;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const std::uint64_t base = (first_step + s) * blocks_per_step;
        double* row = out.data() + s * m;
        for (std::size_t j = 0; j < m; j += 2) {
            const auto [z0, z1] = stream.normal_pair(base + j / 2);
            row[j] = scale * z0;
            if (j + 1 < m) row[j + 1] = scale * z1;
        }
    }
}

Matrix wiener_increments(std::uint64_t seed, std::uint64_t path_index, std::size_t m, std::size_t n_steps, double dt) {
    Matrix out(n_steps, m);
    fill_wiener_increments(seed, path_index, m, 0, n_steps, dt, out.data);
    return out;
}

}  // namespace stochosc
