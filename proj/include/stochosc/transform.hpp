#pragma once

#include <vector>

#include "stochosc/phase.hpp"

namespace stochosc {

/// Liénard model rewritten in the coordinates (x, y + F(x)), F_i = int_0^{x_i} f_i:
///
///   dx_i = (y_i - F_i(x_i)) dt
///   dy_i = -dG/dx_i dt + sum_j sigma_ij(x, y - F(x)) dW_j
///
/// H(x) = sum_i int_0^{x_i} F_i(s) ds, so that grad H = F.
struct TransformedSystem {
    OscillatorModel base;
    std::vector<Polynomial> F;
    MultiPolynomial H;
    PhaseSystem system;
};

/// Throws std::invalid_argument for models without Liénard damping.
TransformedSystem build_transformed_system(const OscillatorModel& model);

/// F_i(x_i) for every coordinate.
std::vector<double> evaluate_F(const std::vector<Polynomial>& F, const std::vector<double>& x);

/// (x, y) -> (x, y + F(x))
PhasePoint phi_forward(const PhasePoint& state, const std::vector<Polynomial>& F);
/// (x, y) -> (x, y - F(x))
PhasePoint phi_inverse(const PhasePoint& state, const std::vector<Polynomial>& F);

/// sigma entries with every velocity variable y_i replaced by y_i - F_i(x_i).
std::vector<MultiPolynomial> pull_back_velocity(const std::vector<MultiPolynomial>& entries,
                                                const std::vector<Polynomial>& F);

}  // namespace stochosc
