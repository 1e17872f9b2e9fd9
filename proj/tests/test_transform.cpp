#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "coupled.hpp"
#include "oracles.hpp"
#include "stochosc/models.hpp"
#include "stochosc/transform.hpp"

using namespace stochosc;
using doctest::Approx;

namespace {

OscillatorModel vdp() { return build_van_der_pol(0.1, 1.0, 0.25, 0.1); }

}  // namespace

TEST_CASE("transformed Van der Pol drift at (1, 0)") {
    const auto t = build_transformed_system(vdp());
    const auto d = t.system.drift(std::vector<double>{1.0, 0.0});
    CHECK(d[0] == Approx(2.0 / 15.0).epsilon(1e-14));
    CHECK(d[1] == -1.25);
    CHECK(t.system.provenance() == Provenance::TransformedReduction);
}

TEST_CASE("general damping is rejected") {
    CHECK_THROWS_AS(build_transformed_system(build_duffing(0.5, 1, 3, 2)), std::invalid_argument);
}

TEST_CASE("zero damping leaves the system unchanged") {
    const auto m = build_linear_oscillator(0.25, 1.0, 0.5);
    const OscillatorModel undamped("free", LienardDamping{{Polynomial()}}, m.restoring(), m.potential(),
                                   m.diffusion());
    const auto t = build_transformed_system(undamped);
    const auto direct = reduce_to_phase_system(undamped);
    for (std::size_t k = 0; k < 2; ++k) CHECK(t.system.drift_polynomials()[k] == direct.drift_polynomials()[k]);
    CHECK(t.system.diffusion_polynomials() == direct.diffusion_polynomials());
    CHECK(t.H.is_zero());
}

TEST_CASE("constant noise is unchanged by the change of variables") {
    const auto t = build_transformed_system(vdp());
    const auto s = t.system.diffusion(std::vector<double>{1.7, -0.3});
    CHECK(s(0, 0) == 0.0);
    CHECK(s(1, 0) == 0.1);
}

TEST_CASE("state-dependent noise is composed with the inverse map") {
    PolynomialDiffusion pd{1, 1, {MultiPolynomial::variable(2, 1)}};  // sigma = y
    const OscillatorModel m("mult", LienardDamping{{Polynomial({0, 0, 3})}}, {MultiPolynomial::variable(1, 0)},
                            std::nullopt, pd);
    const auto t = build_transformed_system(m);
    const std::vector<double> z{0.7, 1.1};
    const double F = 0.7 * 0.7 * 0.7;
    CHECK(t.system.diffusion(z)(1, 0) == Approx(1.1 - F).epsilon(1e-14));
}

TEST_CASE("gradient of H equals F") {
    for (const auto& m : {vdp(), build_coupled_lienard({1.0, 2.0}, {1.0, 1.0}, 0.5, 2, 1, 0.5),
                          build_duffing_vdp_general({0.5, -1, 0, 1}, {0, -1}, 0.5)}) {
        const auto t = build_transformed_system(m);
        const auto grad = t.H.gradient();
        const std::size_t n = m.dimension();
        for (std::size_t i = 0; i < n; ++i) CHECK(grad[i] == MultiPolynomial::from_univariate(t.F[i], n, i));
    }
}

TEST_CASE("position drift vanishes on y = F(x)") {
    const auto t = build_transformed_system(build_coupled_lienard({1.0, 2.0}, {1.0, 1.0}, 0.5, 2, 1, 0.5));
    for (std::size_t i = 0; i < 2; ++i) {
        auto d = t.system.drift_polynomials()[i];
        for (std::size_t k = 0; k < 2; ++k) d = d.substitute(2 + k, MultiPolynomial::from_univariate(t.F[k], 4, k));
        CHECK(d.is_zero());
    }
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
        const auto x = oracle::uniform_point(rng, 2, 3.0);
        const auto F = evaluate_F(t.F, x);
        const auto d = t.system.drift(std::vector<double>{x[0], x[1], F[0], F[1]});
        CHECK(std::abs(d[0]) <= 1e-13 * (1 + std::abs(F[0])));
        CHECK(std::abs(d[1]) <= 1e-13 * (1 + std::abs(F[1])));
    }
}

TEST_CASE("phase maps") {
    const auto t = build_transformed_system(vdp());
    const auto p = phi_forward(PhasePoint({1.0}, {1.0}), t.F);
    CHECK(p.x[0] == 1.0);
    CHECK(p.y[0] == Approx(1.0 - 2.0 / 15.0).epsilon(1e-15));
    CHECK(phi_forward(PhasePoint({2.0}, {3.0}), {Polynomial()}) == PhasePoint({2.0}, {3.0}));
    CHECK(phi_inverse(PhasePoint({2.0}, {3.0}), {Polynomial()}) == PhasePoint({2.0}, {3.0}));

    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto z = oracle::uniform_point(rng, 2, 3.0);
        const PhasePoint s({z[0]}, {z[1]});
        const auto back = phi_inverse(phi_forward(s, t.F), t.F);
        CHECK(back.x[0] == s.x[0]);
        CHECK(back.y[0] == Approx(s.y[0]).epsilon(1e-14));
    }
}

TEST_CASE("direct and transformed paths converge under refinement") {
    // Both systems see the same Brownian path; halving dt should roughly
    // halve the gap between their position trajectories.
    const auto model = vdp();
    const auto direct = reduce_to_phase_system(model);
    const auto t = build_transformed_system(model);
    const double fine_dt = 1e-4;
    const Matrix dW = wiener_increments(42, 0, 1, 10000, fine_dt);
    const std::vector<double> z0{1.0, 0.0};
    const auto zt = phi_forward(PhasePoint::from_flat(z0), t.F).flat();

    const double coarse = coupled::max_gap(coupled::run(direct, z0, dW, fine_dt, 2),
                                           coupled::run(t.system, zt, dW, fine_dt, 2));
    const double fine = coupled::max_gap(coupled::run(direct, z0, dW, fine_dt, 1),
                                         coupled::run(t.system, zt, dW, fine_dt, 1));
    MESSAGE("gap at 2e-4: " << coarse << ", at 1e-4: " << fine);
    CHECK(coarse / fine >= 1.5);
    CHECK(coarse / fine <= 3.0);
    CHECK(fine < 0.05);
}
