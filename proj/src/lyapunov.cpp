#include "stochosc/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stochosc/rng.hpp"
#include "stochosc/transform.hpp"

namespace stochosc {

namespace {

Polynomial to_univariate(const MultiPolynomial& p) {
    if (p.nvars() != 1) throw std::invalid_argument("expected a polynomial in one variable");
    std::vector<double> c(p.total_degree() + 1, 0.0);
    for (const auto& [e, v] : p.terms()) c[e[0]] = v;
    return Polynomial(std::move(c));
}

MultiPolynomial half_velocity_square(std::size_t n) {
    MultiPolynomial p(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        MultiPolynomial::Exponents e(2 * n, 0);
        e[n + i] = 2;
        p.add_term(e, 0.5);
    }
    return p;
}

MultiPolynomial require_potential(const OscillatorModel& model) {
    auto G = model.potential_or_derived();
    if (!G) throw std::invalid_argument("model '" + model.name() + "' has no potential G");
    return *G;
}

// sum_ij sigma_ij^2 over an n x m row-major polynomial matrix.
MultiPolynomial trace_covariance(const std::vector<MultiPolynomial>& sigma, std::size_t nvars) {
    MultiPolynomial t(nvars);
    for (const auto& s : sigma) t += s * s;
    return t;
}

}  // namespace

// ---------------------------------------------------------------------------

LyapunovFunction build_energy_lyapunov(const OscillatorModel& model, double K) {
    const std::size_t n = model.dimension();
    MultiPolynomial V = require_potential(model).embed(2 * n, 0) + half_velocity_square(n);
    return {std::move(V), K, Construction::EnergyForm};
}

LyapunovFunction build_transformed_lyapunov_scalar(const OscillatorModel& model, double K) {
    if (model.dimension() != 1 || !model.is_lienard())
        throw std::invalid_argument("scalar transformed Lyapunov function needs a scalar Liénard model");
    const Polynomial F = model.lienard().f[0].antiderivative();
    const Polynomial g = to_univariate(model.restoring()[0]);
    MultiPolynomial V = MultiPolynomial::from_univariate((F + g).antiderivative(), 2, 0) + half_velocity_square(1);
    return {std::move(V), K, Construction::ScalarTransformed};
}

LyapunovFunction build_transformed_lyapunov_vector(const OscillatorModel& model, double K) {
    if (!model.is_lienard())
        throw std::invalid_argument("vector transformed Lyapunov function needs Liénard damping");
    const std::size_t n = model.dimension();
    const MultiPolynomial G = require_potential(model);
    const auto ts = build_transformed_system(model);
    MultiPolynomial V = (ts.H + G).embed(2 * n, 0) + half_velocity_square(n);
    return {std::move(V), K, Construction::VectorTransformed};
}

// ---------------------------------------------------------------------------

GeneratorOperator::GeneratorOperator(const PhaseSystem& system) : system_(&system) {
    const std::size_t d = system.dimension();
    const std::size_t m = system.noise_dimension();
    const auto& sigma = system.diffusion_polynomials();
    covariance_.assign(d * d, MultiPolynomial(d));
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k; l < d; ++l) {
            MultiPolynomial a(d);
            for (std::size_t j = 0; j < m; ++j) {
                const auto& sk = sigma[k * m + j];
                const auto& sl = sigma[l * m + j];
                if (sk.is_zero() || sl.is_zero()) continue;
                a += sk * sl;
            }
            covariance_[k * d + l] = a;
            covariance_[l * d + k] = std::move(a);
        }
}

MultiPolynomial GeneratorOperator::apply(const MultiPolynomial& V) const {
    const std::size_t d = system_->dimension();
    if (V.nvars() != d) throw std::invalid_argument("generator: V must be a polynomial in the 2n phase variables");
    const auto& drift = system_->drift_polynomials();
    MultiPolynomial LV(d);
    std::vector<MultiPolynomial> grad = V.gradient();
    for (std::size_t k = 0; k < d; ++k)
        if (!grad[k].is_zero() && !drift[k].is_zero()) LV += drift[k] * grad[k];
    for (std::size_t k = 0; k < d; ++k) {
        if (grad[k].is_zero()) continue;
        for (std::size_t l = k; l < d; ++l) {
            const auto& a = covariance_[k * d + l];
            if (a.is_zero()) continue;
            const MultiPolynomial second = grad[k].partial(l);
            if (second.is_zero()) continue;
            LV += a * second * (k == l ? 0.5 : 1.0);
        }
    }
    return LV;
}

MultiPolynomial apply_generator(const PhaseSystem& system, const LyapunovFunction& V) {
    return GeneratorOperator(system).apply(V);
}

double finite_difference_generator(const PhaseSystem& system, const std::function<double(std::span<const double>)>& V,
                                   const PhasePoint& point, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_difference_generator: h must be positive");
    const std::vector<double> z = point.flat();
    const std::size_t d = z.size();
    if (d != system.dimension()) throw std::invalid_argument("finite_difference_generator: dimension mismatch");
    const std::size_t m = system.noise_dimension();
    const auto drift = system.drift(z);
    const Matrix sigma = system.diffusion(z);

    std::vector<double> w = z;
    auto shifted = [&](std::size_t k, double dk, std::size_t l, double dl) {
        w = z;
        w[k] += dk;
        w[l] += dl;
        return V(w);
    };

    const double v0 = V(z);
    double LV = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        if (drift[k] == 0.0) continue;
        const double dv = (shifted(k, h, k, 0.0) - shifted(k, -h, k, 0.0)) / (2.0 * h);
        LV += drift[k] * dv;
    }
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = k; l < d; ++l) {
            double a = 0.0;
            for (std::size_t j = 0; j < m; ++j) a += sigma(k, j) * sigma(l, j);
            if (a == 0.0) continue;
            double second;
            if (k == l) {
                second = (shifted(k, h, k, 0.0) - 2.0 * v0 + shifted(k, -h, k, 0.0)) / (h * h);
                LV += 0.5 * a * second;
            } else {
                second = (shifted(k, h, l, h) - shifted(k, h, l, -h) - shifted(k, -h, l, h) + shifted(k, -h, l, -h)) /
                         (4.0 * h * h);
                LV += a * second;
            }
        }
    return LV;
}

// ---------------------------------------------------------------------------

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::DissipativeConstantNoise: return "Corollary1";
        case Criterion::EnergyBound: return "Theorem2";
        case Criterion::ScalarLienard: return "Theorem3";
        case Criterion::VectorLienard: return "Theorem4";
        case Criterion::None: return "None";
    }
    return "None";
}

Status ray_verdict(const MultiPolynomial::RayRestriction& ray, Requirement req, int* degree) {
    if (degree) *degree = -1;
    for (std::size_t k = ray.coeffs.size(); k-- > 0;) {
        const double c = ray.coeffs[k];
        const double mag = ray.magnitudes[k];
        if (mag == 0.0 || std::abs(c) <= 1e-12 * mag) continue;
        if (degree) *degree = static_cast<int>(k);
        const bool grows = c > 0.0 && (k >= 1 || req == Requirement::NonNegative);
        return grows ? Status::Pass : Status::Fail;
    }
    return req == Requirement::NonNegative ? Status::Pass : Status::Fail;
}

std::vector<std::vector<double>> probe_directions(std::size_t dims, std::uint64_t seed) {
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < dims; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(dims, 0.0);
            d[i] = s;
            dirs.push_back(std::move(d));
        }
    if (dims >= 2 && dims <= 6) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(dims));
        for (std::size_t mask = 0; mask < (std::size_t{1} << dims); ++mask) {
            std::vector<double> d(dims);
            for (std::size_t i = 0; i < dims; ++i) d[i] = (mask >> i & 1U) ? -inv : inv;
            dirs.push_back(std::move(d));
        }
    }
    const CounterStream stream(seed, 0x7261790000000000ULL + dims);
    std::uint64_t block = 0;
    for (int r = 0; r < 64; ++r) {
        std::vector<double> d(dims);
        for (std::size_t i = 0; i < dims; i += 2) {
            const auto [z0, z1] = stream.normal_pair(block++);
            d[i] = z0;
            if (i + 1 < dims) d[i + 1] = z1;
        }
        double norm = 0.0;
        for (double v : d) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : d) v /= norm;
        dirs.push_back(std::move(d));
    }
    return dirs;
}

AsymptoticResult check_asymptotics(const MultiPolynomial& p, Requirement req, std::uint64_t seed) {
    const double tol = 1e-12 * p.max_abs_coefficient();
    MultiPolynomial kept(p.nvars());
    int residue_degree = -1;
    for (const auto& [e, c] : p.terms()) {
        if (std::abs(c) > tol) {
            kept.add_term(e, c);
            continue;
        }
        unsigned deg = 0;
        for (auto v : e) deg += v;
        residue_degree = std::max(residue_degree, static_cast<int>(deg));
    }

    AsymptoticResult result;
    for (const auto& d : probe_directions(p.nvars(), seed)) {
        int degree = -1;
        Status s = ray_verdict(kept.along_ray(d), req, &degree);
        if (residue_degree >= 0 && residue_degree >= degree) s = Status::Indeterminate;
        if (s == Status::Fail) return {Status::Fail, d};
        if (s == Status::Indeterminate && result.status == Status::Pass) result = {Status::Indeterminate, d};
    }
    return result;
}

namespace {

std::string format_point(const std::vector<double>& z) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (std::size_t i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
    os << ")";
    return os.str();
}

ScanResult grid_min(const MultiPolynomial& p, const VerificationDomain& domain) {
    const SampleGrid grid(p.nvars(), domain);
    const CompiledPolynomial f = p.compile();
    return scan_min(grid, [&f](std::span<const double> z) { return f(z); });
}

bool below_rounding(const MultiPolynomial& p, const ScanResult& r) {
    return r.value < -1e-12 * (1.0 + p.magnitude(r.point));
}

}  // namespace

ConditionResult check_nonnegative(const MultiPolynomial& p, const VerificationDomain& domain, std::string name) {
    ConditionResult out;
    out.name = std::move(name);
    const ScanResult r = grid_min(p, domain);
    out.witness["grid_min"] = r.value;
    if (below_rounding(p, r)) {
        out.status = Status::Fail;
        out.point = r.point;
        out.detail = "violated at " + format_point(r.point);
        return out;
    }
    const auto asym = check_asymptotics(p, Requirement::NonNegative, domain.seed);
    out.status = asym.status;
    if (asym.status == Status::Fail) {
        out.point = asym.direction;
        out.detail = "negative leading behaviour along direction " + format_point(asym.direction);
    } else if (asym.status == Status::Indeterminate) {
        out.point = asym.direction;
        out.detail = "holds on the grid; leading behaviour undecided along " + format_point(asym.direction);
    } else {
        out.detail = "holds on the grid and along all probe rays";
    }
    return out;
}

ConditionResult check_unbounded(const MultiPolynomial& p, const VerificationDomain& domain, std::string name) {
    ConditionResult out;
    out.name = std::move(name);
    out.witness["grid_min"] = grid_min(p, domain).value;
    const auto asym = check_asymptotics(p, Requirement::Unbounded, domain.seed);
    out.status = asym.status;
    if (asym.status != Status::Pass) {
        out.point = asym.direction;
        out.detail = (asym.status == Status::Fail ? "does not grow along direction "
                                                  : "growth undecided along direction ") +
                     format_point(asym.direction);
        return out;
    }
    const auto dirs = probe_directions(p.nvars(), domain.seed);
    const CompiledPolynomial f = p.compile();
    double previous = -std::numeric_limits<double>::infinity();
    std::vector<double> z(p.nvars());
    for (double radius : {0.5 * domain.radius, domain.radius, 2.0 * domain.radius}) {
        double ring_min = std::numeric_limits<double>::infinity();
        for (const auto& d : dirs) {
            for (std::size_t i = 0; i < z.size(); ++i) z[i] = radius * d[i];
            ring_min = std::min(ring_min, f(z));
        }
        out.witness["ring_min_r" + std::to_string(static_cast<int>(std::lround(radius)))] = ring_min;
        if (!(ring_min > previous)) {
            out.status = Status::Fail;
            out.detail = "ring minimum does not increase at radius " + std::to_string(radius);
            return out;
        }
        previous = ring_min;
    }
    out.detail = "grows along all probe rays; ring minima increasing";
    return out;
}

// ---------------------------------------------------------------------------

namespace {

MultiPolynomial velocity_dot(const std::vector<MultiPolynomial>& v, std::size_t n) {
    MultiPolynomial s(2 * n);
    for (std::size_t i = 0; i < n; ++i) s += MultiPolynomial::variable(2 * n, n + i) * v[i];
    return s;
}

MultiPolynomial energy_noise_margin(const OscillatorModel& model, double c) {
    const std::size_t n = model.dimension();
    const MultiPolynomial G = require_potential(model).embed(2 * n, 0);
    return velocity_dot(model.damping_polynomials(), n) + (G + half_velocity_square(n)) * c -
           trace_covariance(model.diffusion_polynomials(), 2 * n) * 0.5;
}

// K making the polynomial nonnegative on the grid.
double lift_to_nonnegative(const MultiPolynomial& p, const VerificationDomain& domain) {
    return std::max(0.0, -grid_min(p, domain).value);
}

}  // namespace

ConditionResult check_energy_noise_bound(const OscillatorModel& model, double c, double K1,
                                         const VerificationDomain& domain) {
    const std::size_t n = model.dimension();
    auto r = check_nonnegative(energy_noise_margin(model, c) + MultiPolynomial::constant(2 * n, K1), domain,
                               "noise_bound");
    r.witness["c"] = c;
    r.witness["K1"] = K1;
    return r;
}

ConditionResult check_dissipation_bound(const OscillatorModel& model, double alpha_max,
                                        const VerificationDomain& domain) {
    if (!model.has_constant_diffusion())
        throw std::invalid_argument("dissipation criterion requires constant diffusion");
    const std::size_t n = model.dimension();
    const MultiPolynomial by = velocity_dot(model.damping_polynomials(), n);
    const CompiledPolynomial f = by.compile();

    const SampleGrid grid(2 * n, domain);
    const ScanResult ratio = scan_min(grid, [&f, n](std::span<const double> z) {
        double y2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) y2 += z[n + i] * z[n + i];
        if (y2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return f(z) / y2;
    });
    double alpha = ratio.found() ? std::max(0.0, -ratio.value) : 0.0;
    // The grid value approximates an exact coefficient when the worst ratio is
    // attained on the y axis; snap to it so the margin cancels exactly.
    for (std::size_t i = 0; i < n; ++i) {
        MultiPolynomial::Exponents e(2 * n, 0);
        e[n + i] = 2;
        const double exact = -by.coeff(e);
        if (exact > 0.0 && std::abs(exact - alpha) <= 1e-9 * std::max(1.0, exact)) alpha = exact;
    }

    ConditionResult out;
    out.name = "dissipation";
    out.witness["alpha"] = alpha;
    if (alpha > alpha_max) {
        out.status = Status::Fail;
        out.point = ratio.point;
        out.detail = "<b, y> + alpha |y|^2 >= 0 needs alpha > alpha_max at " + format_point(ratio.point);
        return out;
    }
    const MultiPolynomial margin = by + half_velocity_square(n) * (2.0 * alpha);
    auto checked = check_nonnegative(margin, domain, out.name);
    checked.witness["alpha"] = alpha;
    return checked;
}

std::array<ConditionResult, 3> check_scalar_lienard(const OscillatorModel& model, const VerificationDomain& domain) {
    if (model.dimension() != 1 || !model.is_lienard())
        throw std::invalid_argument("scalar Liénard criterion needs a scalar model with Liénard damping");

    std::array<ConditionResult, 3> out;
    out[0].name = "01_regularity";
    out[0].status = Status::Pass;
    out[0].detail = "polynomial f, g are C^1 and polynomial sigma is locally Lipschitz";

    const Polynomial F = model.lienard().f[0].antiderivative();
    const Polynomial g = to_univariate(model.restoring()[0]);
    const Polynomial x = Polynomial::monomial(1);

    // x [F + g] >= c1 x^2 for |x| >= c2
    {
        auto& r = out[1];
        r.name = "02_coercivity";
        const Polynomial q = x * (F + g);
        const double c1 = (q.degree() == 2 && q.leading_coefficient() > 0.0) ? 0.5 * q.leading_coefficient() : 0.5;
        const Polynomial margin = q - Polynomial::monomial(2, c1);
        const MultiPolynomial margin1 = MultiPolynomial::from_univariate(margin, 1, 0);
        r.witness["c1"] = c1;

        const auto ray = check_asymptotics(margin1, Requirement::NonNegative, domain.seed);
        const Status asym = ray.status;
        if (asym == Status::Fail) r.point = ray.direction;
        if (asym != Status::Pass || margin.degree() < 2) {
            r.status = asym == Status::Indeterminate ? Status::Indeterminate : Status::Fail;
            r.detail = "x[F(x)+g(x)] - c1 x^2 is not eventually nonnegative (degree " +
                       std::to_string(q.degree()) + ")";
            return out;
        }

        // Beyond the Cauchy root bound the sign is that of the leading term.
        double cauchy = 0.0;
        for (int k = 0; k < margin.degree(); ++k)
            cauchy = std::max(cauchy, std::abs(margin.coeff(k) / margin.leading_coefficient()));
        cauchy += 1.0;

        const SampleGrid grid(1, domain);
        const double h = grid.spacing();
        const auto centre = static_cast<std::size_t>(grid.points_per_axis() / 2);
        std::size_t worst_offset = 0;
        bool violated = false;
        std::vector<double> p(1);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, p);
            const double v = margin(p[0]);
            if (v < -1e-12 * (1.0 + MultiPolynomial::from_univariate(margin, 1, 0).magnitude(p))) {
                const std::size_t off = i > centre ? i - centre : centre - i;
                worst_offset = std::max(worst_offset, off);
                violated = true;
            }
        }
        // Extend the scan out to the root bound when it lies past the box.
        for (double t = domain.radius + h; t <= cauchy + h; t += h)
            for (double s : {t, -t})
                if (margin(s) < 0.0) {
                    worst_offset = std::max(worst_offset, static_cast<std::size_t>(std::ceil(std::abs(s) / h)));
                    violated = true;
                }
        const double c2 = static_cast<double>(violated ? worst_offset + 1 : 1) * h;
        r.witness["c2"] = c2;
        r.witness["root_bound"] = cauchy;
        r.status = Status::Pass;
        r.detail = "x[F(x)+g(x)] has even degree " + std::to_string(q.degree()) + " with positive leading coefficient";
    }

    // 1/2 sigma^2(x, y - F) <= 1/2 (y - F)^2 + F (F/2 + g) + K1
    {
        auto& r = out[2];
        const MultiPolynomial Fm = MultiPolynomial::from_univariate(F, 2, 0);
        const MultiPolynomial gm = MultiPolynomial::from_univariate(g, 2, 0);
        const MultiPolynomial u = MultiPolynomial::variable(2, 1) - Fm;
        const auto sigma = pull_back_velocity(model.diffusion_polynomials(), {F});
        const MultiPolynomial margin0 =
            u * u * 0.5 + Fm * (Fm * 0.5 + gm) - trace_covariance(sigma, 2) * 0.5;
        const double K1 = lift_to_nonnegative(margin0, domain);
        r = check_nonnegative(margin0 + MultiPolynomial::constant(2, K1), domain, "03_noise_bound");
        r.witness["K1"] = K1;
    }
    return out;
}

std::array<ConditionResult, 3> check_vector_lienard(const OscillatorModel& model, const VerificationDomain& domain) {
    if (!model.is_lienard()) throw std::invalid_argument("vector Liénard criterion needs Liénard damping");
    const std::size_t n = model.dimension();
    const MultiPolynomial G = require_potential(model);
    const auto ts = build_transformed_system(model);

    std::array<ConditionResult, 3> out;
    out[0].name = "01_regularity";
    out[0].status = Status::Pass;
    out[0].detail = "polynomial f_i and dG/dx_i are C^1";

    out[1] = check_unbounded(ts.H + G, domain, "02_growth");

    const auto gradH = ts.H.gradient();
    const auto gradG = G.gradient();
    MultiPolynomial inner(n);
    for (std::size_t i = 0; i < n; ++i) inner += gradH[i] * (gradH[i] + gradG[i] * 2.0);
    const auto sigma = pull_back_velocity(model.diffusion_polynomials(), ts.F);
    const MultiPolynomial margin0 =
        half_velocity_square(n) * 2.0 + inner.embed(2 * n, 0) - trace_covariance(sigma, 2 * n);
    const double K2 = lift_to_nonnegative(margin0, domain);
    out[2] = check_nonnegative(margin0 + MultiPolynomial::constant(2 * n, K2), domain, "03_noise_bound");
    out[2].witness["K2"] = K2;
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void add_conditions(LyapunovCertificate& cert, Criterion c, const std::vector<ConditionResult>& conds) {
    for (auto r : conds) {
        r.name = to_string(c) + "." + r.name;
        cert.conditions.push_back(std::move(r));
    }
}

bool all_pass(const std::vector<ConditionResult>& conds) {
    return std::all_of(conds.begin(), conds.end(), [](const auto& r) { return r.passed(); });
}

ConditionResult not_applicable(const std::string& why) {
    ConditionResult r;
    r.name = "applicability";
    r.status = Status::Fail;
    r.detail = why;
    return r;
}

ConditionResult lipschitz_structural(const char* what) {
    ConditionResult r;
    r.name = "lipschitz";
    r.status = Status::Pass;
    r.detail = what;
    return r;
}

}  // namespace

LyapunovCertificate verify_nonexplosion(const OscillatorModel& model, const VerifyOptions& options) {
    const auto& domain = options.domain;
    const std::size_t n = model.dimension();
    LyapunovCertificate cert;
    cert.r_check = domain.radius;
    cert.grid = SampleGrid(2 * n, domain).describe();

    const auto G = model.potential_or_derived();
    std::optional<ConditionResult> growth;
    double K_energy = 0.0;
    if (G) {
        growth = check_unbounded(*G, domain, "potential_growth");
        K_energy = std::max(0.0, -growth->witness.at("grid_min"));
    }

    auto record = [&](Criterion c, std::vector<ConditionResult> conds, std::map<std::string, double> constants) {
        const bool ok = all_pass(conds);
        add_conditions(cert, c, conds);
        if (ok) {
            cert.passed.push_back(c);
            cert.constants_by_criterion[c] = std::move(constants);
        }
    };

    // Constant noise with damping bounded below by -alpha |y|^2.
    if (!model.has_constant_diffusion()) {
        record(Criterion::DissipativeConstantNoise, {not_applicable("diffusion is state dependent")}, {});
    } else if (!G) {
        record(Criterion::DissipativeConstantNoise, {not_applicable("no potential G available")}, {});
    } else {
        auto diss = check_dissipation_bound(model, options.alpha_max, domain);
        const double alpha = diss.witness.at("alpha");
        const double c = options.c > 2.0 * alpha ? options.c : 2.0 * alpha + options.c;
        const double half_trace = 0.5 * trace_covariance(model.diffusion_polynomials(), 2 * n).constant_term();
        const double K1 = std::max(0.0, half_trace + c * K_energy);
        const double K = std::max(K1 / c, K_energy);
        record(Criterion::DissipativeConstantNoise,
               {lipschitz_structural("polynomial damping is locally Lipschitz"), *growth, diss},
               {{"alpha", alpha}, {"c", c}, {"K1", K1}, {"K", K}});
    }

    // Energy function with a general noise bound.
    if (!G) {
        record(Criterion::EnergyBound, {not_applicable("no potential G available")}, {});
    } else {
        const double c = options.c;
        const double K1 = lift_to_nonnegative(energy_noise_margin(model, c), domain);
        auto bound = check_energy_noise_bound(model, c, K1, domain);
        const double K = std::max(K1 / c, K_energy);
        record(Criterion::EnergyBound, {lipschitz_structural("polynomial damping is locally Lipschitz"), *growth, bound},
               {{"c", c}, {"K1", K1}, {"K", K}});
    }

    // Scalar Liénard in transformed coordinates.
    if (n != 1 || !model.is_lienard()) {
        record(Criterion::ScalarLienard, {not_applicable("needs a scalar model with Liénard damping")}, {});
    } else {
        const auto conds = check_scalar_lienard(model, domain);
        const auto V = build_transformed_lyapunov_scalar(model);
        const double K_pos = std::max(0.0, -grid_min(V.V, domain).value);
        std::map<std::string, double> k;
        if (conds[1].witness.count("c2")) {
            k = {{"c1", conds[1].witness.at("c1")}, {"c2", conds[1].witness.at("c2")}, {"K1", conds[2].witness.at("K1")}};
            k["K"] = std::max(k["K1"], K_pos);
        }
        record(Criterion::ScalarLienard, {conds.begin(), conds.end()}, k);
        cert.notes.push_back(
            "Theorem3.03 is checked with the noise bounded above: 0.5*sigma^2(x, y-F) <= 0.5*(y-F)^2 + F*(F/2+g) + K1");
    }

    // Vector Liénard in transformed coordinates.
    if (!model.is_lienard() || !G) {
        record(Criterion::VectorLienard, {not_applicable("needs Liénard damping and a potential G")}, {});
    } else {
        const auto conds = check_vector_lienard(model, domain);
        const double K2 = conds[2].witness.at("K2");
        const double K_pos = std::max(0.0, -conds[1].witness.at("grid_min"));
        record(Criterion::VectorLienard, {conds.begin(), conds.end()}, {{"K2", K2}, {"K", std::max(K2, K_pos)}});
    }

    if (!cert.passed.empty()) {
        cert.theorem = cert.passed.front();
        cert.constants = cert.constants_by_criterion.at(cert.theorem);
    }

    std::ostringstream os;
    os << "model: " << model.name() << " (n=" << n << ", m=" << model.noise_dimension() << ")\n";
    os << "domain: [-" << domain.radius << ", " << domain.radius << "]^" << 2 * n << ", grid " << cert.grid << "\n";
    os << "result: " << (cert.non_explosive() ? "non-explosive by " + to_string(cert.theorem) : "no criterion applies")
       << "\n";
    for (const auto& c : cert.conditions)
        os << "  [" << to_string(c.status) << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    for (const auto& [k, v] : cert.constants) os << "  " << k << " = " << v << "\n";
    for (const auto& note : cert.notes) os << "note: " << note << "\n";
    cert.report_text = os.str();
    return cert;
}

}  // namespace stochosc
