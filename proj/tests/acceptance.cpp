// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "coupled.hpp"
#include "oracles.hpp"
#include "stochosc/cli.hpp"
#include "stochosc/lyapunov.hpp"
#include "stochosc/models.hpp"
#include "stochosc/transform.hpp"

using namespace stochosc;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome no_escapes(const OscillatorModel& model) {
    IntegrationConfig c;
    c.dt = 1e-3;
    c.T = 10.0;
    c.r_max = 1e4;
    c.initial = PhasePoint({1.0}, {0.0});
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = simulate_ensemble(reduce_to_phase_system(model), c, 500);
    const double dt = seconds_since(t0);
    return {r.escape_count == 0 && dt < 10.0,
            model.name() + ": escape_count = " + std::to_string(r.escape_count) + " of 500, " + fmt("%.2f s", dt)};
}

bool has(const std::vector<Criterion>& v, Criterion c) { return std::find(v.begin(), v.end(), c) != v.end(); }

Outcome verifier_conclusions() {
    int ok = 0;
    std::string detail;
    auto check = [&](bool pass, const std::string& what) {
        ok += pass;
        detail += (pass ? " ok:" : " FAILED:") + what;
    };
    const auto d = verify_nonexplosion(find_model("duffing").build(preset_params("duffing")));
    check(d.theorem == Criterion::DissipativeConstantNoise && d.constants.at("alpha") == 0.0, "duffing");

    const auto v = verify_nonexplosion(find_model("vanderpol").build(preset_params("vanderpol")));
    check(v.theorem == Criterion::DissipativeConstantNoise && std::abs(v.constants.at("alpha") - 0.2) < 1e-12 &&
              has(v.passed, Criterion::ScalarLienard),
          "vanderpol");

    const auto g = verify_nonexplosion(build_duffing_vdp_general({0, 0, 0, 1}, {0, -1}, 0.5));
    check(g.non_explosive() && has(g.passed, Criterion::ScalarLienard), "duffing_vdp_general(m=2,n=1)");

    const auto l = verify_nonexplosion(find_model("coupled_lienard").build());
    check(l.theorem == Criterion::VectorLienard, "coupled_lienard");

    MultiPolynomial b(2);
    b.add_term({0, 3}, -1.0);
    const OscillatorModel cubic("cubic", GeneralDamping{{b}}, {MultiPolynomial::variable(1, 0)}, std::nullopt,
                                ConstantDiffusion{Matrix::identity(1, 1.0)});
    const auto c = verify_nonexplosion(cubic);
    check(c.theorem == Criterion::None, "b=-y^3 gives None");
    return {ok == 5, std::to_string(ok) + "/5" + detail};
}

Outcome generator_oracle() {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (const auto& entry : model_catalog()) {
        const auto model = entry.build();
        const auto sys = reduce_to_phase_system(model);
        const auto V = model.potential_or_derived() ? build_energy_lyapunov(model)
                                                    : build_transformed_lyapunov_scalar(model);
        const auto LV = apply_generator(sys, V);
        for (int i = 0; i < 500; ++i) {
            const auto z = oracle::uniform_point(rng, sys.dimension(), 3.0);
            const double exact = LV(z);
            const double fd = finite_difference_generator(sys, V, PhasePoint::from_flat(z), 1e-4);
            worst = std::max(worst, std::abs(exact - fd) / (1 + std::abs(exact)));
        }
    }
    const auto duff = find_model("duffing").build();
    const auto LV = apply_generator(reduce_to_phase_system(duff), build_energy_lyapunov(duff));
    MultiPolynomial expected(2);
    expected.add_term({0, 2}, -2 * 0.5 * 1.0);
    expected.add_term({0, 0}, 0.5 * 2.0 * 2.0);
    const bool identity = (LV - expected).is_zero();
    return {worst <= 1e-4 && identity, "max relative FD gap " + fmt("%.2e", worst) +
                                           (identity ? ", Duffing identity exact" : ", Duffing identity broken")};
}

Outcome scalar_lienard_identity() {
    const auto m = find_model("vanderpol").build();
    const auto ts = build_transformed_system(m);
    const auto LV = apply_generator(ts.system, build_transformed_lyapunov_scalar(m));
    const auto F = MultiPolynomial::from_univariate(ts.F[0], 2, 0);
    const auto g = m.restoring_in_phase()[0];
    const auto y = MultiPolynomial::variable(2, 1);
    const auto half = MultiPolynomial::constant(2, 0.5);
    const double s = 0.1;
    const auto diff = LV - (half * y * y + MultiPolynomial::constant(2, 0.5 * s * s) - half * (y - F) * (y - F) -
                            F * (half * F + g));
    double worst = 0.0;
    for (const auto& [e, c] : diff.terms()) worst = std::max(worst, std::abs(c));
    return {worst <= 1e-12, "max coefficient of the difference " + fmt("%.2e", worst)};
}

Outcome transform_equivalence() {
    // Coupled increments: the coarse run sums pairs of the fine Brownian
    // increments, so both step sizes follow the same Wiener path.
    const auto model = find_model("vanderpol").build();
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
    const double ratio = coarse / fine;
    return {ratio >= 1.5 && ratio <= 3.0 && fine < 0.05,
            "gap(2e-4) = " + fmt("%.3e", coarse) + ", gap(1e-4) = " + fmt("%.3e", fine) + ", ratio " +
                fmt("%.3f", ratio)};
}

Outcome strong_convergence() {
    IntegrationConfig c;
    c.dt = std::ldexp(1.0, -10);
    c.T = 1.0;
    c.initial = PhasePoint({1.0}, {0.0});
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = estimate_strong_order(reduce_to_phase_system(find_model("duffing").build()), c, 200, 4);
    const double secs = seconds_since(t0);
    return {r.order_estimate >= 0.7 && r.order_estimate <= 1.3 && secs < 30.0 && !r.unreliable,
            "order " + fmt("%.3f", r.order_estimate) + ", " + fmt("%.2f s", secs)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("stochosc_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run = [&](const std::string& threads, const std::string& tag) {
        const std::string csv = (dir / (tag + ".csv")).string(), js = (dir / (tag + ".json")).string();
        const std::vector<std::string> args{"stochosc", "ensemble", "--model", "duffing", "--preset", "paper",
                                            "--paths", "200", "-T", "10", "--threads", threads, "-o", csv,
                                            "--json", js};
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return std::make_tuple(code, slurp(csv), slurp(js));
    };
    const int saved = omp_get_max_threads();
    const auto [c1, csv1, json1] = run("1", "a");
    const auto [c2, csv2, json2] = run("4", "b");
    omp_set_num_threads(saved);
    fs::remove_all(dir);
    const bool same = c1 == 0 && c2 == 0 && !csv1.empty() && csv1 == csv2 && json1 == json2;
    return {same, std::string("threads 1 vs 4: CSV ") + (csv1 == csv2 ? "identical" : "differs") + ", JSON " +
                      (json1 == json2 ? "identical" : "differs") + " (" + std::to_string(csv1.size()) + " bytes)"};
}

Outcome indefinite_restoring_force() {
    const OscillatorModel m("indefinite", LienardDamping{{Polynomial({0, 0, 3})}}, {MultiPolynomial::variable(1, 0, -1.0)},
                            std::nullopt, ConstantDiffusion{Matrix::identity(1, 1.0)});
    const auto r = check_scalar_lienard(m, VerificationDomain{});
    const bool pass = r[0].passed() && r[1].passed() && r[2].passed();
    std::string detail = "f = 3x^2, g = -x:";
    for (const auto& c : r) detail += " " + c.name + "=" + to_string(c.status);
    if (r[1].witness.count("c2"))
        detail += ", c1 = " + fmt("%g", r[1].witness.at("c1")) + ", c2 = " + fmt("%g", r[1].witness.at("c2"));
    return {pass, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"non-explosion, Duffing", [] { return no_escapes(find_model("duffing").build(preset_params("duffing"))); }},
        {"non-explosion, Van der Pol",
         [] { return no_escapes(find_model("vanderpol").build(preset_params("vanderpol"))); }},
        {"verifier conclusions", verifier_conclusions},
        {"generator oracle", generator_oracle},
        {"scalar Lienard identity", scalar_lienard_identity},
        {"transform equivalence", transform_equivalence},
        {"strong convergence", strong_convergence},
        {"determinism", determinism},
        {"sign-indefinite restoring force", indefinite_restoring_force},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
