#include "stochosc/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace stochosc {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(unsigned power, double c) {
    std::vector<double> v(power + 1, 0.0);
    v[power] = c;
    return Polynomial(std::move(v));
}

void Polynomial::canonicalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    if (coeffs_.empty()) return {};
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) a[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    canonicalize();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    canonicalize();
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    canonicalize();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(r));
}

// ---------------------------------------------------------------------------
// MultiPolynomial

namespace {

double monomial_value(const MultiPolynomial::Exponents& e, std::span<const double> z) {
    double m = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) m *= z[i];
    return m;
}

}  // namespace

MultiPolynomial MultiPolynomial::constant(std::size_t nvars, double c) {
    MultiPolynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

MultiPolynomial MultiPolynomial::variable(std::size_t nvars, std::size_t index, double c) {
    if (index >= nvars) throw std::out_of_range("MultiPolynomial::variable: index out of range");
    MultiPolynomial p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.add_term(e, c);
    return p;
}

MultiPolynomial MultiPolynomial::from_univariate(const Polynomial& q, std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("MultiPolynomial::from_univariate: index out of range");
    MultiPolynomial p(nvars);
    for (std::size_t k = 0; k < q.coeffs().size(); ++k) {
        Exponents e(nvars, 0);
        e[index] = static_cast<unsigned>(k);
        p.add_term(e, q.coeffs()[k]);
    }
    return p;
}

bool MultiPolynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

double MultiPolynomial::constant_term() const noexcept { return coeff(Exponents(nvars_, 0)); }

double MultiPolynomial::coeff(const Exponents& e) const noexcept {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

void MultiPolynomial::add_term(const Exponents& e, double c) {
    if (e.size() != nvars_) throw std::invalid_argument("MultiPolynomial: exponent vector has wrong length");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

unsigned MultiPolynomial::total_degree() const noexcept {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (auto k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

unsigned MultiPolynomial::degree_in(std::size_t var) const noexcept {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

double MultiPolynomial::max_abs_coefficient() const noexcept {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

double MultiPolynomial::operator()(std::span<const double> z) const {
    if (z.size() != nvars_) throw std::invalid_argument("MultiPolynomial: point has wrong dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) acc += c * monomial_value(e, z);
    return acc;
}

double MultiPolynomial::magnitude(std::span<const double> z) const {
    if (z.size() != nvars_) throw std::invalid_argument("MultiPolynomial: point has wrong dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) acc += std::abs(c * monomial_value(e, z));
    return acc;
}

MultiPolynomial MultiPolynomial::partial(std::size_t var) const {
    if (var >= nvars_) throw std::out_of_range("MultiPolynomial::partial: variable out of range");
    MultiPolynomial d(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents de = e;
        de[var] -= 1;
        d.add_term(de, c * static_cast<double>(e[var]));
    }
    return d;
}

std::vector<MultiPolynomial> MultiPolynomial::gradient() const {
    std::vector<MultiPolynomial> g;
    g.reserve(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) g.push_back(partial(i));
    return g;
}

MultiPolynomial MultiPolynomial::substitute(std::size_t var, const MultiPolynomial& replacement) const {
    if (var >= nvars_) throw std::out_of_range("MultiPolynomial::substitute: variable out of range");
    check_same_space(replacement);
    std::vector<MultiPolynomial> powers{constant(nvars_, 1.0)};
    MultiPolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        while (powers.size() <= e[var]) powers.push_back(powers.back() * replacement);
        Exponents rest = e;
        rest[var] = 0;
        MultiPolynomial mono(nvars_);
        mono.add_term(rest, c);
        out += mono * powers[e[var]];
    }
    return out;
}

MultiPolynomial MultiPolynomial::embed(std::size_t new_nvars, std::size_t offset) const {
    if (offset + nvars_ > new_nvars) throw std::invalid_argument("MultiPolynomial::embed: target space too small");
    MultiPolynomial out(new_nvars);
    for (const auto& [e, c] : terms_) {
        Exponents ne(new_nvars, 0);
        std::copy(e.begin(), e.end(), ne.begin() + static_cast<std::ptrdiff_t>(offset));
        out.add_term(ne, c);
    }
    return out;
}

MultiPolynomial::RayRestriction MultiPolynomial::along_ray(std::span<const double> direction) const {
    if (direction.size() != nvars_) throw std::invalid_argument("MultiPolynomial::along_ray: wrong dimension");
    RayRestriction r;
    const unsigned deg = total_degree();
    r.coeffs.assign(deg + 1, 0.0);
    r.magnitudes.assign(deg + 1, 0.0);
    for (const auto& [e, c] : terms_) {
        unsigned s = 0;
        for (auto k : e) s += k;
        const double v = c * monomial_value(e, direction);
        r.coeffs[s] += v;
        r.magnitudes[s] += std::abs(v);
    }
    return r;
}

CompiledPolynomial MultiPolynomial::compile() const { return CompiledPolynomial(*this); }

MultiPolynomial MultiPolynomial::operator-() const {
    MultiPolynomial r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

void MultiPolynomial::check_same_space(const MultiPolynomial& other) const {
    if (other.nvars_ != nvars_) throw std::invalid_argument("MultiPolynomial: variable count mismatch");
}

MultiPolynomial& MultiPolynomial::operator+=(const MultiPolynomial& rhs) {
    check_same_space(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

MultiPolynomial& MultiPolynomial::operator-=(const MultiPolynomial& rhs) {
    check_same_space(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

MultiPolynomial& MultiPolynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
    a.check_same_space(b);
    MultiPolynomial r(a.nvars_);
    MultiPolynomial::Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

MultiPolynomial pow(const MultiPolynomial& p, unsigned k) {
    MultiPolynomial r = MultiPolynomial::constant(p.nvars(), 1.0);
    for (unsigned i = 0; i < k; ++i) r = r * p;
    return r;
}

// ---------------------------------------------------------------------------
// CompiledPolynomial

CompiledPolynomial::CompiledPolynomial(const MultiPolynomial& p) : nvars_(p.nvars()) {
    coeffs_.reserve(p.terms().size());
    exponents_.reserve(p.terms().size() * nvars_);
    for (const auto& [e, c] : p.terms()) {
        coeffs_.push_back(c);
        exponents_.insert(exponents_.end(), e.begin(), e.end());
        for (auto k : e) max_degree_ = std::max(max_degree_, k);
    }
}

double CompiledPolynomial::operator()(std::span<const double> z) const {
    const std::size_t stride = max_degree_ + 1;
    const std::size_t table_size = nvars_ * stride;
    constexpr std::size_t kStackTable = 256;
    std::array<double, kStackTable> stack_table;
    std::vector<double> heap_table;
    double* powers = stack_table.data();
    if (table_size > kStackTable) {
        heap_table.resize(table_size);
        powers = heap_table.data();
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
        double* row = powers + i * stride;
        row[0] = 1.0;
        for (std::size_t k = 1; k < stride; ++k) row[k] = row[k - 1] * z[i];
    }
    double acc = 0.0;
    const unsigned* e = exponents_.data();
    for (double c : coeffs_) {
        double m = c;
        for (std::size_t i = 0; i < nvars_; ++i) m *= powers[i * stride + e[i]];
        acc += m;
        e += nvars_;
    }
    return acc;
}

}  // namespace stochosc
