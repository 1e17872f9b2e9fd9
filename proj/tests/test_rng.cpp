#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stochosc/rng.hpp"

using namespace stochosc;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("increment moments at one million samples") {
    const double dt = 1e-3;
    const std::size_t n = 500000;
    const Matrix w = wiener_increments(42, 0, 2, n, dt);
    REQUIRE(w.data.size() == 1000000);
    double sum = 0.0, sq = 0.0;
    for (double v : w.data) sum += v;
    const double mean = sum / w.data.size();
    for (double v : w.data) sq += (v - mean) * (v - mean);
    const double var = sq / (w.data.size() - 1);
    const double stderr_mean = std::sqrt(dt / w.data.size());
    CHECK(std::abs(mean) < 4 * stderr_mean);
    CHECK(std::abs(var / dt - 1.0) < 0.01);
}

TEST_CASE("same seed and path give identical increments") {
    const Matrix a = wiener_increments(42, 0, 1, 1000, 0.01);
    const Matrix b = wiener_increments(42, 0, 1, 1000, 0.01);
    CHECK(a == b);
    const Matrix c = wiener_increments(42, 1, 1, 1000, 0.01);
    CHECK_FALSE(a == c);
    const Matrix d = wiener_increments(43, 0, 1, 1000, 0.01);
    CHECK_FALSE(a == d);
}

TEST_CASE("any window of steps can be generated independently") {
    const std::size_t m = 3;
    const Matrix full = wiener_increments(7, 5, m, 200, 0.5);
    std::vector<double> part(50 * m);
    fill_wiener_increments(7, 5, m, 120, 50, 0.5, part);
    for (std::size_t i = 0; i < part.size(); ++i) CHECK(part[i] == full.data[120 * m + i]);
}

TEST_CASE("uniforms lie in (0, 1]") {
    const CounterStream s(1, 2);
    for (std::uint64_t i = 0; i < 10000; ++i) {
        const auto [u, v] = s.uniform_pair(i);
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("normal pairs are uncorrelated") {
    const CounterStream s(99, 0);
    const int n = 200000;
    double xy = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto [a, b] = s.normal_pair(i);
        xy += a * b;
    }
    CHECK(std::abs(xy / n) < 4.0 / std::sqrt(n));
}
