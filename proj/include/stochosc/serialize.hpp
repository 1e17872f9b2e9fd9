#pragma once

#include <json.hpp>

#include "stochosc/integrator.hpp"
#include "stochosc/lyapunov.hpp"
#include "stochosc/phase.hpp"

namespace stochosc {

/// Coefficient array, ascending degree.
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

/// [{"exponents": [...], "coeff": r}, ...]
nlohmann::json to_json(const MultiPolynomial& p);
MultiPolynomial multipoly_from_json(const nlohmann::json& j, std::size_t nvars);

/// Builds a model from inline polynomial data. Keys:
///   damping_general  n polynomials in (x, y), or
///   damping_lienard  n coefficient arrays f_i(x_i)
///   restoring        n polynomials in x, or
///   potential        one polynomial G in x (g = grad G)
///   sigma            number (sigma * I), n x m matrix, or {"polynomial": n x m polynomials in (x, y)}
///   name             optional label
/// For n = 1 a restoring or potential entry may be a plain coefficient array.
OscillatorModel build_custom_model(const nlohmann::json& params);

/// {theorem, conditions: [{name, status, detail, witness}], constants, domain: {R_check, grid}, notes}
nlohmann::json to_json(const LyapunovCertificate& cert);

nlohmann::json to_json(const StrongOrderResult& r);

}  // namespace stochosc
