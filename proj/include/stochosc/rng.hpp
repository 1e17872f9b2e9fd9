#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "stochosc/phase.hpp"

namespace stochosc {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// the output is a pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// A logical random stream addressed by (seed, stream id). Block `i` of the
/// stream is Philox(counter = (i, stream), key = seed), so any block can be
/// produced independently of the others and of the thread computing it.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::array<std::uint32_t, 4> block(std::uint64_t index) const noexcept;
    /// Two uniforms in (0, 1] with 53 random bits each.
    std::pair<double, double> uniform_pair(std::uint64_t index) const noexcept;
    /// Two independent standard normals (Box–Muller on uniform_pair).
    std::pair<double, double> normal_pair(std::uint64_t index) const noexcept;

private:
    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
};

/// Writes n_steps x m Wiener increments (N(0, dt) each) for steps
/// [first_step, first_step + n_steps) of path `path_index` into out, row-major.
/// Step s of the path uses stream blocks s*ceil(m/2) .. s*ceil(m/2)+ceil(m/2)-1.
void fill_wiener_increments(std::uint64_t seed, std::uint64_t path_index, std::size_t m, std::uint64_t first_step,
                            std::size_t n_steps, double dt, std::span<double> out);

/// n_steps x m matrix of increments for one path.
Matrix wiener_increments(std::uint64_t seed, std::uint64_t path_index, std::size_t m, std::size_t n_steps, double dt);

}  // namespace stochosc
