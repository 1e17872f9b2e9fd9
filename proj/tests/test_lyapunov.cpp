#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <random>

#include "oracles.hpp"
#include "stochosc/lyapunov.hpp"
#include "stochosc/models.hpp"
#include "stochosc/serialize.hpp"
#include "stochosc/transform.hpp"

using namespace stochosc;
using doctest::Approx;

namespace {

OscillatorModel duffing() { return build_duffing(0.5, 1.0, 3.0, 2.0); }
OscillatorModel vdp() { return build_van_der_pol(0.1, 1.0, 0.25, 0.1); }

// x'' + b(x, y) + g(x) = sigma W' with scalar data.
OscillatorModel scalar_general(MultiPolynomial b, Polynomial g, double sigma, const std::string& name = "custom") {
    return OscillatorModel(name, GeneralDamping{{std::move(b)}}, {MultiPolynomial::from_univariate(g, 1, 0)},
                           std::nullopt, ConstantDiffusion{Matrix::identity(1, sigma)});
}

OscillatorModel scalar_lienard(Polynomial f, Polynomial g, double sigma, const std::string& name = "custom") {
    return OscillatorModel(name, LienardDamping{{std::move(f)}}, {MultiPolynomial::from_univariate(g, 1, 0)},
                           std::nullopt, ConstantDiffusion{Matrix::identity(1, sigma)});
}

OscillatorModel indefinite_restoring_model() { return scalar_lienard(Polynomial({0, 0, 3}), Polynomial({0, -1}), 1.0, "indefinite"); }

MultiPolynomial y_power(unsigned k, double c) {
    MultiPolynomial p(2);
    p.add_term({0, k}, c);
    return p;
}

bool near_zero_coefficients(const MultiPolynomial& p, double tol) {
    for (const auto& [e, c] : p.terms())
        if (std::abs(c) > tol) return false;
    return true;
}

const ConditionResult& find(const LyapunovCertificate& cert, const std::string& name) {
    for (const auto& c : cert.conditions)
        if (c.name == name) return c;
    throw std::runtime_error("condition " + name + " missing");
}

bool has(const std::vector<Criterion>& v, Criterion c) { return std::find(v.begin(), v.end(), c) != v.end(); }

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("energy Lyapunov function") {
    const auto V = build_energy_lyapunov(duffing(), 3.0);
    CHECK(V.V(std::vector<double>{1.0, 1.0}) == 1.75);
    CHECK(V(std::vector<double>{1.0, 1.0}) == 4.75);
    CHECK(V(std::vector<double>{0.0, 0.0}) == 3.0);
    CHECK(V.construction == Construction::EnergyForm);

    const auto vd = build_vector_duffing(Matrix(1, 1, 0.0), Matrix::identity(1), {1.0}, 0.5);
    CHECK(build_energy_lyapunov(vd).V(std::vector<double>{1.0, 0.0}) == 0.75);

    const OscillatorModel no_g("nog", GeneralDamping{{MultiPolynomial(4), MultiPolynomial(4)}},
                               {MultiPolynomial::variable(2, 1), MultiPolynomial::variable(2, 0)}, std::nullopt,
                               ConstantDiffusion{Matrix::identity(2)});
    CHECK_THROWS_AS(build_energy_lyapunov(no_g), std::invalid_argument);
}

TEST_CASE("scalar transformed Lyapunov function") {
    const auto V = build_transformed_lyapunov_scalar(vdp());
    const double exact = -1.0 / 12.0 + 9.0 / 16.0;
    CHECK(V.V(std::vector<double>{1.0, 0.0}) == Approx(exact).epsilon(1e-14));
    const auto F = Polynomial({-0.2, 0, 0.2}).antiderivative();
    const double quad = oracle::simpson([&](double s) { return F(s) + s + 0.25 * s * s * s; }, 0.0, 1.0);
    CHECK(std::abs(V.V(std::vector<double>{1.0, 0.0}) - quad) < 1e-10);

    const auto zero = build_transformed_lyapunov_scalar(scalar_lienard(Polynomial(), Polynomial(), 1.0));
    CHECK(zero.V == y_power(2, 0.5));
    const auto harmonic = build_transformed_lyapunov_scalar(scalar_lienard(Polynomial(), Polynomial({0, 1}), 1.0));
    MultiPolynomial energy = y_power(2, 0.5);
    energy.add_term({2, 0}, 0.5);
    CHECK(harmonic.V == energy);

    CHECK_THROWS_AS(build_transformed_lyapunov_scalar(duffing()), std::invalid_argument);
}

TEST_CASE("vector transformed Lyapunov function") {
    const auto m = build_coupled_lienard({1.0}, {1.0}, 0.0, 2, 1, 0.5);
    const auto ts = build_transformed_system(m);
    MultiPolynomial H(1);
    H.add_term({6}, 1.0 / 30.0);
    CHECK(ts.H.coeff({6}) == Approx(1.0 / 30.0).epsilon(1e-15));
    CHECK(ts.H.terms().size() == 1);

    const auto V = build_transformed_lyapunov_vector(m);
    const double x = 1.3, y = -0.4;
    CHECK(V.V(std::vector<double>{x, y}) ==
          Approx(std::pow(x, 6) / 30 - std::pow(x, 4) + 0.5 * y * y).epsilon(1e-13));

    const auto lin = build_linear_oscillator(0.25, 1.0, 0.5);
    const OscillatorModel undamped("free", LienardDamping{{Polynomial()}}, lin.restoring(), lin.potential(),
                                   lin.diffusion());
    CHECK(build_transformed_lyapunov_vector(undamped).V == build_energy_lyapunov(undamped).V);

    // Two uncoupled copies: H is the sum of the scalar H's.
    const auto two = build_transformed_system(build_coupled_lienard({1.0, 2.0}, {1.0, 1.0}, 0.0, 2, 1, 0.5));
    const auto a = build_transformed_system(build_coupled_lienard({1.0}, {1.0}, 0.0, 2, 1, 0.5));
    const auto b = build_transformed_system(build_coupled_lienard({2.0}, {1.0}, 0.0, 2, 1, 0.5));
    CHECK(two.H == a.H.embed(2, 0) + b.H.embed(2, 1));
}

// ---------------------------------------------------------------------------

TEST_CASE("Duffing generator identity") {
    const auto m = duffing();
    const auto LV = apply_generator(reduce_to_phase_system(m), build_energy_lyapunov(m));
    MultiPolynomial expected = y_power(2, -1.0);
    expected.add_term({0, 0}, 2.0);
    CHECK(LV == expected);
    CHECK((LV + y_power(2, 2 * 0.5 * 1.0) - MultiPolynomial::constant(2, 2.0)).is_zero());
}

TEST_CASE("generator of constants and conserved energy") {
    const auto sys = reduce_to_phase_system(duffing());
    CHECK(apply_generator(sys, LyapunovFunction{MultiPolynomial::constant(2, 5.0)}).is_zero());
    const auto free = scalar_lienard(Polynomial(), Polynomial({0, 1}), 0.0);
    CHECK(apply_generator(reduce_to_phase_system(free), build_transformed_lyapunov_scalar(free)).is_zero());
}

TEST_CASE("finite-difference generator") {
    const auto m = duffing();
    const auto sys = reduce_to_phase_system(m);
    const auto V = build_energy_lyapunov(m);
    const double fd = finite_difference_generator(sys, V, PhasePoint({1.0}, {1.0}), 1e-4);
    CHECK(std::abs(fd - 1.0) < 1e-5);
    CHECK(std::abs(finite_difference_generator(sys, [](std::span<const double>) { return 3.0; },
                                               PhasePoint({0.3}, {0.7}), 1e-4)) < 1e-9);

    const auto ou = reduce_to_phase_system(build_linear_oscillator(0.25, 1.0, 0.5));
    const auto Vq = build_energy_lyapunov(build_linear_oscillator(0.25, 1.0, 0.5));
    const auto LV = apply_generator(ou, Vq);
    for (double x : {-1.0, 0.5, 2.0}) {
        const std::vector<double> z{x, 0.3};
        CHECK(finite_difference_generator(ou, Vq, PhasePoint({x}, {0.3}), 1e-3) ==
              Approx(LV(z)).epsilon(1e-9));
    }
}

TEST_CASE("exact and finite-difference generators agree for every catalog model") {
    std::mt19937_64 rng(17);
    for (const auto& entry : model_catalog()) {
        const auto model = entry.build();
        const auto sys = reduce_to_phase_system(model);
        const auto V = model.potential_or_derived() ? build_energy_lyapunov(model)
                                                    : build_transformed_lyapunov_scalar(model);
        const auto LV = apply_generator(sys, V);
        const std::size_t d = sys.dimension();
        int bad = 0;
        for (int i = 0; i < 500; ++i) {
            const auto z = oracle::uniform_point(rng, d, 3.0);
            const double exact = LV(z);
            const double fd = finite_difference_generator(sys, V, PhasePoint::from_flat(z), 1e-4);
            if (std::abs(exact - fd) > 1e-4 * (1 + std::abs(exact))) ++bad;
        }
        INFO(entry.name);
        CHECK(bad == 0);
    }
}

TEST_CASE("generator is linear") {
    // Dyadic coefficients keep every product and sum exact.
    const auto sys = reduce_to_phase_system(duffing());
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> c(-16, 16), e(0, 4);
    for (int trial = 0; trial < 20; ++trial) {
        MultiPolynomial U(2), W(2);
        for (int t = 0; t < 6; ++t) {
            U.add_term({static_cast<unsigned>(e(rng)), static_cast<unsigned>(e(rng))}, c(rng) / 8.0);
            W.add_term({static_cast<unsigned>(e(rng)), static_cast<unsigned>(e(rng))}, c(rng) / 8.0);
        }
        const GeneratorOperator L(sys);
        CHECK(L.apply(U * 2.0 + W * -0.5) == L.apply(U) * 2.0 + L.apply(W) * -0.5);
    }
}

TEST_CASE("transformed generator identity for Van der Pol") {
    const auto m = vdp();
    const auto ts = build_transformed_system(m);
    const auto LV = apply_generator(ts.system, build_transformed_lyapunov_scalar(m));
    const auto F = MultiPolynomial::from_univariate(ts.F[0], 2, 0);
    const auto g = m.restoring_in_phase()[0];
    const auto y = MultiPolynomial::variable(2, 1);
    const auto half = MultiPolynomial::constant(2, 0.5);
    const double sigma = 0.1;
    const auto rhs = half * y * y + MultiPolynomial::constant(2, 0.5 * sigma * sigma) - half * (y - F) * (y - F) -
                     F * (half * F + g);
    CHECK(near_zero_coefficients(LV - rhs, 1e-12));
}

TEST_CASE("energy inequality behind the Lyapunov bound") {
    const VerificationDomain domain{10.0, 41};
    for (const auto& model : {duffing(), vdp(), find_model("vector_duffing").build()}) {
        const double c = 1.0;
        const auto sys = reduce_to_phase_system(model);
        const auto V0 = build_energy_lyapunov(model);
        const auto LV = apply_generator(sys, V0);
        // K1 from the grid, then K >= K1 / c.
        const auto margin = (V0.V * c - LV);
        const SampleGrid grid(sys.dimension(), domain);
        const auto low = scan_min_serial(grid, [&](std::span<const double> z) { return margin(z); });
        const double K1 = std::max(0.0, -low.value);
        const auto bound = check_energy_noise_bound(model, c, K1, domain);
        INFO(model.name());
        REQUIRE(bound.passed());
        const double K = K1 / c;
        const auto gap = V0.V * c + MultiPolynomial::constant(sys.dimension(), c * K) - LV;
        const auto worst = scan_min_serial(grid, [&](std::span<const double> z) {
            return gap(z) + 1e-9 * (1 + gap.magnitude(z));
        });
        CHECK(worst.value >= 0.0);
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("ray verdicts") {
    MultiPolynomial::RayRestriction r;
    r.coeffs = {0, 0, 1};
    r.magnitudes = {0, 0, 1};
    int deg = -2;
    CHECK(ray_verdict(r, Requirement::NonNegative, &deg) == Status::Pass);
    CHECK(deg == 2);
    r.coeffs = {5, 0, -1};
    r.magnitudes = {5, 0, 1};
    CHECK(ray_verdict(r, Requirement::NonNegative) == Status::Fail);
    r.coeffs = {3};
    r.magnitudes = {3};
    CHECK(ray_verdict(r, Requirement::NonNegative) == Status::Pass);
    CHECK(ray_verdict(r, Requirement::Unbounded) == Status::Fail);
    // Cancellation along the ray: the next coefficient decides.
    r.coeffs = {0, 2, 1e-17};
    r.magnitudes = {0, 2, 1};
    CHECK(ray_verdict(r, Requirement::Unbounded, &deg) == Status::Pass);
    CHECK(deg == 1);
}

TEST_CASE("probe directions") {
    const auto d = probe_directions(2, 1);
    CHECK(d.size() == 4 + 4 + 64);
    for (const auto& v : d) CHECK(std::hypot(v[0], v[1]) == Approx(1.0).epsilon(1e-12));
    CHECK(probe_directions(2, 1) == d);
}

TEST_CASE("noise bound condition") {
    const VerificationDomain domain;
    CHECK(check_energy_noise_bound(duffing(), 1.0, 2.0, domain).passed());

    const auto quiet = build_duffing(0.5, 1.0, 3.0, 0.0);
    CHECK(check_energy_noise_bound(quiet, 1.0, 0.0, domain).passed());

    const auto loud = scalar_general(MultiPolynomial(2), Polynomial({0, 1}), 10.0);
    const auto r = check_energy_noise_bound(loud, 0.01, 0.0, domain);
    CHECK(r.status == Status::Fail);
    REQUIRE(r.point.size() == 2);
    CHECK(std::abs(r.point[0]) < 1e-9);
    CHECK(std::abs(r.point[1]) < 1e-9);
}

TEST_CASE("dissipation bound") {
    const VerificationDomain domain;
    const auto d = check_dissipation_bound(duffing(), 10.0, domain);
    CHECK(d.passed());
    CHECK(d.witness.at("alpha") == 0.0);

    const auto v = check_dissipation_bound(vdp(), 10.0, domain);
    CHECK(v.passed());
    CHECK(v.witness.at("alpha") == Approx(0.2).epsilon(1e-12));

    const auto cubic = scalar_general(y_power(3, -1.0), Polynomial({0, 1}), 1.0);
    CHECK(check_dissipation_bound(cubic, 10.0, domain).status == Status::Fail);
    CHECK(check_dissipation_bound(cubic, 1e9, domain).status == Status::Fail);

    PolynomialDiffusion pd{1, 1, {MultiPolynomial::variable(2, 0)}};
    const OscillatorModel mult("m", LienardDamping{{Polynomial({1})}}, {MultiPolynomial::variable(1, 0)},
                               std::nullopt, pd);
    CHECK_THROWS_AS(check_dissipation_bound(mult, 10.0, domain), std::invalid_argument);
}

TEST_CASE("scalar Liénard conditions for Van der Pol") {
    const VerificationDomain domain;
    const auto r = check_scalar_lienard(vdp(), domain);
    CHECK(r[0].passed());
    CHECK(r[1].passed());
    CHECK(r[2].passed());

    // Independent grid maximization of the noise-bound deficit.
    const Polynomial F = Polynomial({-0.2, 0, 0.2}).antiderivative();
    const Polynomial g({0, 1, 0, 0.25});
    double low = INFINITY, low_x = INFINITY;
    for (int i = 0; i <= 200; ++i) {
        const double x = -10.0 + 0.1 * i;
        const double Fx = F(x);
        low_x = std::min(low_x, Fx * (0.5 * Fx + g(x)));
        for (int j = 0; j <= 200; ++j) {
            const double y = -10.0 + 0.1 * j;
            low = std::min(low, 0.5 * (y - Fx) * (y - Fx) + Fx * (0.5 * Fx + g(x)));
        }
    }
    const double K1 = std::max(0.0, 0.005 - low);
    CHECK(r[2].witness.at("K1") == Approx(K1).epsilon(1e-9));
    CHECK(K1 <= 0.005 + std::max(0.0, -low_x) + 1e-12);
}

TEST_CASE("scalar Liénard conditions: degenerate model and sign-indefinite restoring force") {
    const VerificationDomain domain;
    const auto zero = check_scalar_lienard(scalar_lienard(Polynomial(), Polynomial(), 0.5), domain);
    CHECK(zero[1].status == Status::Fail);

    // x g(x) < 0 near the origin, yet the criterion holds.
    const auto r = check_scalar_lienard(indefinite_restoring_model(), domain);
    CHECK(r[1].passed());
    CHECK(r[2].passed());
    CHECK(r[1].witness.at("c1") == 0.5);
    CHECK(r[1].witness.at("c2") == Approx(1.3).epsilon(1e-9));
    for (double x = 1.3; x <= 10.0; x += 0.01) CHECK(x * (x * x * x - x) >= 0.5 * x * x);

    CHECK_THROWS_AS(check_scalar_lienard(duffing(), domain), std::invalid_argument);
}

TEST_CASE("vector Liénard conditions") {
    const VerificationDomain domain;
    const auto r = check_vector_lienard(build_coupled_lienard({1.0}, {1.0}, 0.0, 2, 1, 0.5), domain);
    CHECK(r[0].passed());
    CHECK(r[1].passed());
    CHECK(r[2].passed());
    CHECK(r[1].witness.at("ring_min_r5") < r[1].witness.at("ring_min_r10"));
    CHECK(r[1].witness.at("ring_min_r10") < r[1].witness.at("ring_min_r20"));
    // Oracle: H + G on the rings.
    auto hg = [](double x) { return std::pow(x, 6) / 30 - std::pow(x, 4) - x * x; };
    CHECK(hg(5) < hg(10));
    CHECK(hg(10) < hg(20));

    auto harmonic = [](double sign) {
        MultiPolynomial G(1);
        G.add_term({2}, sign);
        return OscillatorModel("h", LienardDamping{{Polynomial()}}, G.gradient(), G,
                               ConstantDiffusion{Matrix::identity(1, 0.5)});
    };
    CHECK(check_vector_lienard(harmonic(1.0), domain)[1].passed());
    CHECK(check_vector_lienard(harmonic(-1.0), domain)[1].status == Status::Fail);
    CHECK_THROWS_AS(check_vector_lienard(duffing(), domain), std::invalid_argument);
}

TEST_CASE("unbounded and nonnegative checks") {
    const VerificationDomain domain;
    MultiPolynomial p(2);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 2}, 1.0);
    CHECK(check_unbounded(p, domain, "q").passed());
    CHECK(check_nonnegative(p, domain, "q").passed());
    MultiPolynomial saddle(2);
    saddle.add_term({2, 0}, 1.0);
    saddle.add_term({0, 2}, -1.0);
    CHECK(check_nonnegative(saddle, domain, "s").status == Status::Fail);
    CHECK(check_unbounded(saddle, domain, "s").status == Status::Fail);
    MultiPolynomial flat(2);
    flat.add_term({2, 0}, 1.0);
    CHECK(check_nonnegative(flat, domain, "f").passed());
    CHECK(check_unbounded(flat, domain, "f").status == Status::Fail);
}

// ---------------------------------------------------------------------------

TEST_CASE("certificates for the standard models") {
    const auto d = verify_nonexplosion(duffing());
    CHECK(d.theorem == Criterion::DissipativeConstantNoise);
    CHECK(d.constants.at("alpha") == 0.0);
    CHECK(has(d.passed, Criterion::EnergyBound));

    const auto v = verify_nonexplosion(vdp());
    CHECK(v.theorem == Criterion::DissipativeConstantNoise);
    CHECK(v.constants.at("alpha") == Approx(0.2).epsilon(1e-12));
    CHECK(has(v.passed, Criterion::ScalarLienard));
    CHECK(find(v, "Theorem3.02_coercivity").passed());

    const auto cubic = scalar_general(y_power(3, -1.0), Polynomial({0, 1}), 1.0);
    const auto c = verify_nonexplosion(cubic);
    CHECK(c.theorem == Criterion::None);
    CHECK_FALSE(c.non_explosive());
    CHECK(find(c, "Corollary1.dissipation").status == Status::Fail);
    CHECK(c.report_text.find("no criterion applies") != std::string::npos);
}

TEST_CASE("certificates for the Liénard families") {
    const auto gen = verify_nonexplosion(find_model("duffing_vdp_general").build());
    CHECK(gen.non_explosive());
    CHECK(has(gen.passed, Criterion::ScalarLienard));

    const auto cl = verify_nonexplosion(build_coupled_lienard({1.0}, {1.0}, 0.0, 2, 1, 0.5));
    CHECK(cl.non_explosive());
    CHECK(has(cl.passed, Criterion::VectorLienard));

    const auto cat = verify_nonexplosion(find_model("coupled_lienard").build());
    CHECK(cat.theorem == Criterion::VectorLienard);

    const auto vd = verify_nonexplosion(find_model("vector_duffing").build());
    CHECK(vd.non_explosive());
}

TEST_CASE("every catalog model is certified") {
    for (const auto& e : model_catalog()) {
        INFO(e.name);
        CHECK(verify_nonexplosion(e.build()).non_explosive());
    }
}

TEST_CASE("certificates are deterministic") {
    VerifyOptions opts;
    const auto a = to_json(verify_nonexplosion(vdp(), opts)).dump();
    const auto b = to_json(verify_nonexplosion(vdp(), opts)).dump();
    CHECK(a == b);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    const auto c = to_json(verify_nonexplosion(vdp(), opts)).dump();
    omp_set_num_threads(saved);
    CHECK(a == c);
}

TEST_CASE("serial and parallel grid scans agree") {
    for (const auto& domain : {VerificationDomain{10.0, 0}, VerificationDomain{3.0, 21},
                               VerificationDomain{10.0, 0, 5000}}) {
        for (std::size_t dims : {std::size_t{2}, std::size_t{4}, std::size_t{6}}) {
            const SampleGrid grid(dims, domain);
            // Coarse rounding creates ties so the index rule matters.
            auto fn = [](std::span<const double> z) {
                double s = 0.0;
                for (double v : z) s += (v - 0.5) * (v - 0.5);
                return std::floor(s);
            };
            const auto serial = scan_min_serial(grid, fn);
            for (int threads : {1, 2, 4}) {
                omp_set_num_threads(threads);
                const auto par = scan_min(grid, fn);
                CHECK(par.value == serial.value);
                CHECK(par.index == serial.index);
                CHECK(par.point == serial.point);
                CHECK(par.evaluated == serial.evaluated);
            }
        }
    }
}

TEST_CASE("sample grid layout") {
    CHECK(SampleGrid(2, {}).size() == 201u * 201u);
    CHECK(SampleGrid(4, {}).size() == 41u * 41u * 41u * 41u);
    CHECK_FALSE(SampleGrid(6, {}).is_lattice());
    CHECK(SampleGrid(6, {}).size() == 100000u);
    CHECK(SampleGrid(2, {}).describe() == "201^2");
    CHECK(SampleGrid(2, {}).spacing() == Approx(0.1));
    std::vector<double> p(2);
    SampleGrid(2, {}).point(0, p);
    CHECK(p == std::vector<double>{-10.0, -10.0});
}
