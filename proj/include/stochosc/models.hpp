#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stochosc/phase.hpp"

namespace stochosc {

/// Diffusion for the general model families: a scalar multiple of the
/// identity, an explicit constant matrix, or a polynomial matrix.
using DiffusionSpec = std::variant<double, Matrix, PolynomialDiffusion>;

/// x'' + 2 alpha omega0 x' + omega0^2 (x + lambda x^3) = sigma W'
OscillatorModel build_duffing(double alpha, double omega0, double lambda, double sigma);

/// x'' + 2 xi omega0 (x^2 - 1) x' + omega0^2 (x + gamma x^3) = sigma W'
OscillatorModel build_van_der_pol(double xi, double omega0, double gamma, double sigma);

/// Scalar Duffing–Van der Pol family with damping f(x) = sum_{j=1}^{2m} xi_j x^j
/// and restoring force g(x) = sum_{j=1}^{2n} a_j x^{j+1}. `xi` holds xi_1..xi_2m
/// and `a` holds a_1..a_2n; requires m > n >= 1, xi_2m > 0 and a_2n < 0.
OscillatorModel build_duffing_vdp_general(const std::vector<double>& xi, const std::vector<double>& a,
                                          const DiffusionSpec& sigma);

/// X'' + B X' + A X + sum_i K_ii x_i^3 e_i = sigma W' with A symmetric PSD,
/// K_ii > 0 and B positive (<y, B y> >= 0).
OscillatorModel build_vector_duffing(const Matrix& B, const Matrix& A, const std::vector<double>& k_diag,
                                     const DiffusionSpec& sigma);

/// x_i'' + xi_i x_i^{2 n1} x_i' + dG/dx_i = sigma W' with
/// G(x) = -sum_i (a_i x_i^{2 n2 + 2} + nu x_1 x_i),  n1 > n2 > 0.
OscillatorModel build_coupled_lienard(const std::vector<double>& xi, const std::vector<double>& a, double nu,
                                      unsigned n1, unsigned n2, const DiffusionSpec& sigma);

/// Damped linear oscillator x'' + 2 zeta omega0 x' + omega0^2 x = sigma W'
/// (the Ornstein–Uhlenbeck process in phase space).
OscillatorModel build_linear_oscillator(double zeta, double omega0, double sigma);

/// Positivity test used for the damping matrix B: the symmetric part must be
/// positive semidefinite (smallest eigenvalue >= -1e-12) and <y, B y> >= 0 on
/// 1000 pseudo-random unit vectors.
bool is_positive_matrix(const Matrix& B);

struct ModelCatalogEntry {
    std::string name;
    std::string description;
    nlohmann::json default_params;
    /// Params supplied here are merged over the defaults; unknown keys throw.
    std::function<OscillatorModel(const nlohmann::json&)> builder;

    OscillatorModel build(const nlohmann::json& params = nlohmann::json::object()) const;
};

const std::vector<ModelCatalogEntry>& model_catalog();
const ModelCatalogEntry& find_model(const std::string& name);

/// Parameters of the `--preset paper` runs: the published Duffing and
/// Van der Pol parameter sets, and the catalog defaults for other models.
nlohmann::json preset_params(const std::string& name);

}  // namespace stochosc
