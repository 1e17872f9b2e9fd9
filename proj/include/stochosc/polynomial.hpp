#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace stochosc {

/// Dense univariate polynomial with real coefficients, index k holding the
/// coefficient of x^k. Trailing zeros are stripped on construction, so the
/// zero polynomial has no coefficients and equality is coefficient-wise.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial monomial(unsigned power, double c = 1.0);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    double coeff(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    double leading_coefficient() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

    double operator()(double x) const noexcept;

    Polynomial derivative() const;
    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void canonicalize();
    std::vector<double> coeffs_;
};

class CompiledPolynomial;

/// Sparse polynomial in a fixed number of variables. Terms are keyed by the
/// exponent vector; a stored coefficient is never exactly zero.
class MultiPolynomial {
public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, double>;

    MultiPolynomial() = default;
    explicit MultiPolynomial(std::size_t nvars) : nvars_(nvars) {}

    static MultiPolynomial constant(std::size_t nvars, double c);
    static MultiPolynomial variable(std::size_t nvars, std::size_t index, double c = 1.0);
    /// p(z_index) viewed as a polynomial in nvars variables.
    static MultiPolynomial from_univariate(const Polynomial& p, std::size_t nvars, std::size_t index);

    std::size_t nvars() const noexcept { return nvars_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    double constant_term() const noexcept;
    double coeff(const Exponents& e) const noexcept;

    /// Adds c to the coefficient of the monomial e; drops the term if it cancels.
    void add_term(const Exponents& e, double c);

    unsigned total_degree() const noexcept;
    unsigned degree_in(std::size_t var) const noexcept;
    double max_abs_coefficient() const noexcept;

    double operator()(std::span<const double> z) const;
    /// Sum of |coeff * monomial| at z; the rounding scale of operator().
    double magnitude(std::span<const double> z) const;

    MultiPolynomial partial(std::size_t var) const;
    std::vector<MultiPolynomial> gradient() const;

    /// Replaces variable `var` by `replacement` (same variable count).
    MultiPolynomial substitute(std::size_t var, const MultiPolynomial& replacement) const;
    /// Re-indexes variable i as i + offset in a space of new_nvars variables.
    MultiPolynomial embed(std::size_t new_nvars, std::size_t offset) const;

    /// Coefficients of t -> p(t * direction), ascending, together with the
    /// per-degree sum of term magnitudes (used to spot cancellation).
    struct RayRestriction {
        std::vector<double> coeffs;
        std::vector<double> magnitudes;
    };
    RayRestriction along_ray(std::span<const double> direction) const;

    CompiledPolynomial compile() const;

    MultiPolynomial operator-() const;
    MultiPolynomial& operator+=(const MultiPolynomial& rhs);
    MultiPolynomial& operator-=(const MultiPolynomial& rhs);
    MultiPolynomial& operator*=(double s);

    friend MultiPolynomial operator+(MultiPolynomial a, const MultiPolynomial& b) { return a += b; }
    friend MultiPolynomial operator-(MultiPolynomial a, const MultiPolynomial& b) { return a -= b; }
    friend MultiPolynomial operator*(MultiPolynomial a, double s) { return a *= s; }
    friend MultiPolynomial operator*(double s, MultiPolynomial a) { return a *= s; }
    friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b);
    friend bool operator==(const MultiPolynomial&, const MultiPolynomial&) = default;

private:
    void check_same_space(const MultiPolynomial& other) const;

    std::size_t nvars_ = 0;
    TermMap terms_;
};

MultiPolynomial pow(const MultiPolynomial& p, unsigned k);

/// Flat, allocation-free evaluator for a MultiPolynomial; used in the
/// integrator and grid-scan hot loops.
class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    explicit CompiledPolynomial(const MultiPolynomial& p);

    std::size_t nvars() const noexcept { return nvars_; }
    bool is_constant() const noexcept { return max_degree_ == 0; }
    double operator()(std::span<const double> z) const;

private:
    std::size_t nvars_ = 0;
    unsigned max_degree_ = 0;
    std::vector<double> coeffs_;
    std::vector<unsigned> exponents_;  // row-major, nvars_ per term
};

}  // namespace stochosc
