#include "stochosc/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace stochosc {

PhasePoint::PhasePoint(std::vector<double> pos, std::vector<double> vel) : x(std::move(pos)), y(std::move(vel)) {
    if (x.size() != y.size()) throw std::invalid_argument("PhasePoint: position and velocity lengths differ");
}

bool PhasePoint::is_finite() const noexcept {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

double PhasePoint::norm() const noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

std::vector<double> PhasePoint::flat() const {
    std::vector<double> z(x);
    z.insert(z.end(), y.begin(), y.end());
    return z;
}

PhasePoint PhasePoint::from_flat(std::span<const double> z) {
    if (z.size() % 2 != 0) throw std::invalid_argument("PhasePoint::from_flat: odd length");
    const auto n = z.size() / 2;
    return PhasePoint({z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n)},
                      {z.begin() + static_cast<std::ptrdiff_t>(n), z.end()});
}

Matrix Matrix::identity(std::size_t n, double scale) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
    return m;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t damping_size(const Damping& d) {
    return std::visit([](const auto& v) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, GeneralDamping>)
            return v.b.size();
        else
            return v.f.size();
    }, d);
}

bool coefficients_match(const MultiPolynomial& a, const MultiPolynomial& b) {
    const MultiPolynomial diff = a - b;
    const double scale = std::max({1.0, a.max_abs_coefficient(), b.max_abs_coefficient()});
    return diff.max_abs_coefficient() <= 1e-12 * scale;
}

}  // namespace

OscillatorModel::OscillatorModel(std::string name, Damping damping, std::vector<MultiPolynomial> restoring,
                                 std::optional<MultiPolynomial> potential, Diffusion diffusion)
    : name_(std::move(name)),
      n_(restoring.size()),
      damping_(std::move(damping)),
      g_(std::move(restoring)),
      potential_(std::move(potential)),
      diffusion_(std::move(diffusion)) {
    if (n_ == 0) throw std::invalid_argument("OscillatorModel: dimension must be positive");
    if (damping_size(damping_) != n_)
        throw std::invalid_argument("OscillatorModel: damping has " + std::to_string(damping_size(damping_)) +
                                    " entries, expected " + std::to_string(n_));
    if (const auto* gd = std::get_if<GeneralDamping>(&damping_)) {
        for (const auto& b : gd->b)
            if (b.nvars() != 2 * n_)
                throw std::invalid_argument("OscillatorModel: damping entries must be polynomials in 2n variables");
    }
    for (const auto& g : g_)
        if (g.nvars() != n_)
            throw std::invalid_argument("OscillatorModel: restoring force entries must be polynomials in n variables");

    if (const auto* c = std::get_if<ConstantDiffusion>(&diffusion_)) {
        if (c->sigma.rows != n_ || c->sigma.cols == 0)
            throw std::invalid_argument("OscillatorModel: constant diffusion must be n x m with m >= 1");
        m_ = c->sigma.cols;
    } else {
        const auto& p = std::get<PolynomialDiffusion>(diffusion_);
        if (p.rows != n_ || p.cols == 0 || p.entries.size() != p.rows * p.cols)
            throw std::invalid_argument("OscillatorModel: polynomial diffusion must be n x m with m >= 1");
        for (const auto& e : p.entries)
            if (e.nvars() != 2 * n_)
                throw std::invalid_argument("OscillatorModel: diffusion entries must be polynomials in 2n variables");
        m_ = p.cols;
    }

    if (potential_) {
        if (potential_->nvars() != n_)
            throw std::invalid_argument("OscillatorModel: potential must be a polynomial in n variables");
        const auto grad = potential_->gradient();
        for (std::size_t i = 0; i < n_; ++i)
            if (!coefficients_match(grad[i], g_[i]))
                throw std::invalid_argument("OscillatorModel: restoring force component " + std::to_string(i + 1) +
                                            " is not the gradient of the potential");
    }
}

const LienardDamping& OscillatorModel::lienard() const {
    if (const auto* l = std::get_if<LienardDamping>(&damping_)) return *l;
    throw std::invalid_argument("model '" + name_ + "' does not have Liénard damping");
}

std::optional<MultiPolynomial> OscillatorModel::potential_or_derived() const {
    if (potential_) return potential_;
    if (n_ != 1) return std::nullopt;
    // Univariate in x_1: the coefficient map is indexed by {k}.
    std::vector<double> coeffs(g_[0].total_degree() + 1, 0.0);
    for (const auto& [e, c] : g_[0].terms()) coeffs[e[0]] = c;
    return MultiPolynomial::from_univariate(Polynomial(std::move(coeffs)).antiderivative(), 1, 0);
}

std::vector<MultiPolynomial> OscillatorModel::damping_polynomials() const {
    if (const auto* gd = std::get_if<GeneralDamping>(&damping_)) return gd->b;
    const auto& lf = std::get<LienardDamping>(damping_);
    std::vector<MultiPolynomial> b;
    b.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i)
        b.push_back(MultiPolynomial::from_univariate(lf.f[i], 2 * n_, i) * MultiPolynomial::variable(2 * n_, n_ + i));
    return b;
}

std::vector<MultiPolynomial> OscillatorModel::restoring_in_phase() const {
    std::vector<MultiPolynomial> g;
    g.reserve(n_);
    for (const auto& gi : g_) g.push_back(gi.embed(2 * n_, 0));
    return g;
}

std::vector<MultiPolynomial> OscillatorModel::diffusion_polynomials() const {
    if (const auto* p = std::get_if<PolynomialDiffusion>(&diffusion_)) return p->entries;
    const auto& c = std::get<ConstantDiffusion>(diffusion_);
    std::vector<MultiPolynomial> out;
    out.reserve(c.sigma.data.size());
    for (double v : c.sigma.data) out.push_back(MultiPolynomial::constant(2 * n_, v));
    return out;
}

// ---------------------------------------------------------------------------

PhaseSystem::PhaseSystem(std::size_t n, std::size_t m, std::vector<MultiPolynomial> drift,
                         std::vector<MultiPolynomial> diffusion, Provenance provenance, std::string label)
    : n_(n), m_(m), drift_(std::move(drift)), diffusion_(std::move(diffusion)), provenance_(provenance),
      label_(std::move(label)) {
    if (drift_.size() != 2 * n_) throw std::invalid_argument("PhaseSystem: drift must have 2n components");
    if (diffusion_.size() != 2 * n_ * m_) throw std::invalid_argument("PhaseSystem: diffusion must be 2n x m");
    additive_ = true;
    for (const auto& p : drift_) {
        if (p.nvars() != 2 * n_) throw std::invalid_argument("PhaseSystem: drift entries must live in 2n variables");
        drift_eval_.push_back(p.compile());
    }
    for (const auto& p : diffusion_) {
        if (p.nvars() != 2 * n_) throw std::invalid_argument("PhaseSystem: diffusion entries must live in 2n variables");
        diffusion_eval_.push_back(p.compile());
        additive_ = additive_ && p.is_constant();
    }
    if (additive_)
        for (const auto& p : diffusion_) constant_diffusion_.push_back(p.constant_term());
}

void PhaseSystem::drift(std::span<const double> z, std::span<double> out) const {
    for (std::size_t k = 0; k < drift_eval_.size(); ++k) out[k] = drift_eval_[k](z);
}

void PhaseSystem::diffusion(std::span<const double> z, std::span<double> out) const {
    if (additive_) {
        std::copy(constant_diffusion_.begin(), constant_diffusion_.end(), out.begin());
        return;
    }
    for (std::size_t k = 0; k < diffusion_eval_.size(); ++k) out[k] = diffusion_eval_[k](z);
}

std::vector<double> PhaseSystem::drift(std::span<const double> z) const {
    std::vector<double> out(2 * n_);
    drift(z, out);
    return out;
}

Matrix PhaseSystem::diffusion(std::span<const double> z) const {
    Matrix out(2 * n_, m_);
    diffusion(z, out.data);
    return out;
}

PhaseSystem reduce_to_phase_system(const OscillatorModel& model) {
    const std::size_t n = model.dimension();
    const std::size_t m = model.noise_dimension();
    const auto b = model.damping_polynomials();
    const auto g = model.restoring_in_phase();

    std::vector<MultiPolynomial> drift;
    drift.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) drift.push_back(MultiPolynomial::variable(2 * n, n + i));
    for (std::size_t i = 0; i < n; ++i) drift.push_back(-(b[i] + g[i]));

    std::vector<MultiPolynomial> diffusion(n * m, MultiPolynomial(2 * n));
    const auto sigma = model.diffusion_polynomials();
    diffusion.insert(diffusion.end(), sigma.begin(), sigma.end());

    return PhaseSystem(n, m, std::move(drift), std::move(diffusion), Provenance::DirectReduction, model.name());
}

}  // namespace stochosc
