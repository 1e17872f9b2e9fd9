#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stochosc/polynomial.hpp"

namespace stochosc {

/// State (x, y) of an n-dimensional oscillator in phase space; y is the velocity.
struct PhasePoint {
    std::vector<double> x;
    std::vector<double> y;

    PhasePoint() = default;
    PhasePoint(std::vector<double> pos, std::vector<double> vel);

    std::size_t dimension() const noexcept { return x.size(); }
    bool is_finite() const noexcept;
    double norm() const noexcept;

    /// Concatenated (x_1..x_n, y_1..y_n).
    std::vector<double> flat() const;
    static PhasePoint from_flat(std::span<const double> z);

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Row-major dense matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    static Matrix identity(std::size_t n, double scale = 1.0);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Damping b(x, y) given entrywise as polynomials over the 2n phase variables.
struct GeneralDamping {
    std::vector<MultiPolynomial> b;
};

/// Liénard damping f_i(x_i) * y_i, one univariate polynomial per coordinate.
struct LienardDamping {
    std::vector<Polynomial> f;
};

using Damping = std::variant<GeneralDamping, LienardDamping>;

struct ConstantDiffusion {
    Matrix sigma;  // n x m
};

/// sigma(x, y) with entries polynomial over the 2n phase variables, row-major n x m.
struct PolynomialDiffusion {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<MultiPolynomial> entries;
};

using Diffusion = std::variant<ConstantDiffusion, PolynomialDiffusion>;

/// Second-order oscillator  x'' + b(x, x') + g(x) = sigma(x, x') W'.
///
/// The restoring force g is a vector of polynomials in x. When a potential G is
/// supplied, g must equal grad G; builders that know G pass g = grad G exactly.
class OscillatorModel {
public:
    OscillatorModel(std::string name, Damping damping, std::vector<MultiPolynomial> restoring,
                    std::optional<MultiPolynomial> potential, Diffusion diffusion);

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return n_; }
    std::size_t noise_dimension() const noexcept { return m_; }

    const Damping& damping() const noexcept { return damping_; }
    bool is_lienard() const noexcept { return std::holds_alternative<LienardDamping>(damping_); }
    const LienardDamping& lienard() const;

    const std::vector<MultiPolynomial>& restoring() const noexcept { return g_; }
    const std::optional<MultiPolynomial>& potential() const noexcept { return potential_; }
    /// The stored potential, or for scalar models the antiderivative of g.
    std::optional<MultiPolynomial> potential_or_derived() const;

    const Diffusion& diffusion() const noexcept { return diffusion_; }
    bool has_constant_diffusion() const noexcept { return std::holds_alternative<ConstantDiffusion>(diffusion_); }

    /// b(x, y) as polynomials over the 2n phase variables (Liénard: f_i(x_i) y_i).
    std::vector<MultiPolynomial> damping_polynomials() const;
    /// g(x) lifted to the 2n phase variables.
    std::vector<MultiPolynomial> restoring_in_phase() const;
    /// sigma as an n x m row-major matrix of polynomials over the 2n phase variables.
    std::vector<MultiPolynomial> diffusion_polynomials() const;

private:
    std::string name_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    Damping damping_;
    std::vector<MultiPolynomial> g_;
    std::optional<MultiPolynomial> potential_;
    Diffusion diffusion_;
};

enum class Provenance { DirectReduction, TransformedReduction };

/// First-order Itô system dz = drift(z) dt + diffusion(z) dW on R^{2n}.
///
/// Drift and diffusion are kept both as exact polynomials (for generator
/// calculus) and as compiled evaluators (for simulation).
class PhaseSystem {
public:
    PhaseSystem(std::size_t n, std::size_t m, std::vector<MultiPolynomial> drift,
                std::vector<MultiPolynomial> diffusion, Provenance provenance, std::string label = {});

    std::size_t dimension() const noexcept { return 2 * n_; }
    std::size_t half_dimension() const noexcept { return n_; }
    std::size_t noise_dimension() const noexcept { return m_; }
    Provenance provenance() const noexcept { return provenance_; }
    const std::string& label() const noexcept { return label_; }

    const std::vector<MultiPolynomial>& drift_polynomials() const noexcept { return drift_; }
    /// 2n x m, row-major.
    const std::vector<MultiPolynomial>& diffusion_polynomials() const noexcept { return diffusion_; }
    bool additive_noise() const noexcept { return additive_; }

    void drift(std::span<const double> z, std::span<double> out) const;
    /// Writes the 2n x m matrix row-major into out.
    void diffusion(std::span<const double> z, std::span<double> out) const;

    std::vector<double> drift(std::span<const double> z) const;
    Matrix diffusion(std::span<const double> z) const;

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<MultiPolynomial> drift_;
    std::vector<MultiPolynomial> diffusion_;
    Provenance provenance_;
    std::string label_;
    std::vector<CompiledPolynomial> drift_eval_;
    std::vector<CompiledPolynomial> diffusion_eval_;
    std::vector<double> constant_diffusion_;
    bool additive_ = false;
};

/// dx = y dt,  dy = -[b(x, y) + g(x)] dt + sigma(x, y) dW.
PhaseSystem reduce_to_phase_system(const OscillatorModel& model);

}  // namespace stochosc
