#include "stochosc/transform.hpp"

#include <stdexcept>

namespace stochosc {

std::vector<MultiPolynomial> pull_back_velocity(const std::vector<MultiPolynomial>& entries,
                                                const std::vector<Polynomial>& F) {
    const std::size_t n = F.size();
    std::vector<MultiPolynomial> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.is_constant()) {
            out.push_back(e);
            continue;
        }
        MultiPolynomial s = e;
        for (std::size_t i = 0; i < n; ++i) {
            if (s.degree_in(n + i) == 0) continue;
            const auto shifted =
                MultiPolynomial::variable(2 * n, n + i) - MultiPolynomial::from_univariate(F[i], 2 * n, i);
            s = s.substitute(n + i, shifted);
        }
        out.push_back(std::move(s));
    }
    return out;
}

TransformedSystem build_transformed_system(const OscillatorModel& model) {
    if (!model.is_lienard())
        throw std::invalid_argument("change of variables requires Liénard damping f_i(x_i) x_i'; model '" +
                                    model.name() + "' has general damping");
    const std::size_t n = model.dimension();
    const std::size_t m = model.noise_dimension();
    const auto& f = model.lienard().f;

    std::vector<Polynomial> F;
    F.reserve(n);
    MultiPolynomial H(n);
    for (std::size_t i = 0; i < n; ++i) {
        F.push_back(f[i].antiderivative());
        H += MultiPolynomial::from_univariate(F.back().antiderivative(), n, i);
    }

    const auto g = model.restoring_in_phase();
    std::vector<MultiPolynomial> drift;
    drift.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        drift.push_back(MultiPolynomial::variable(2 * n, n + i) - MultiPolynomial::from_univariate(F[i], 2 * n, i));
    for (std::size_t i = 0; i < n; ++i) drift.push_back(-g[i]);

    std::vector<MultiPolynomial> diffusion(n * m, MultiPolynomial(2 * n));
    const auto sigma = pull_back_velocity(model.diffusion_polynomials(), F);
    diffusion.insert(diffusion.end(), sigma.begin(), sigma.end());

    PhaseSystem system(n, m, std::move(drift), std::move(diffusion), Provenance::TransformedReduction,
                       model.name() + " (transformed)");
    return TransformedSystem{model, std::move(F), std::move(H), std::move(system)};
}

std::vector<double> evaluate_F(const std::vector<Polynomial>& F, const std::vector<double>& x) {
    if (F.size() != x.size()) throw std::invalid_argument("transform: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = F[i](x[i]);
    return out;
}

PhasePoint phi_forward(const PhasePoint& state, const std::vector<Polynomial>& F) {
    const auto Fx = evaluate_F(F, state.x);
    PhasePoint out = state;
    for (std::size_t i = 0; i < Fx.size(); ++i) out.y[i] += Fx[i];
    return out;
}

PhasePoint phi_inverse(const PhasePoint& state, const std::vector<Polynomial>& F) {
    const auto Fx = evaluate_F(F, state.x);
    PhasePoint out = state;
    for (std::size_t i = 0; i < Fx.size(); ++i) out.y[i] -= Fx[i];
    return out;
}

}  // namespace stochosc
