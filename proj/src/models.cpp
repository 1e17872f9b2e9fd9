#include "stochosc/models.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "stochosc/rng.hpp"

namespace stochosc {

using nlohmann::json;

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

Diffusion make_diffusion(const DiffusionSpec& spec, std::size_t n) {
    if (const auto* s = std::get_if<double>(&spec)) return ConstantDiffusion{Matrix::identity(n, *s)};
    if (const auto* m = std::get_if<Matrix>(&spec)) {
        if (m->rows != n || m->cols == 0) throw std::invalid_argument("diffusion matrix must have n rows");
        return ConstantDiffusion{*m};
    }
    const auto& p = std::get<PolynomialDiffusion>(spec);
    if (p.rows != n) throw std::invalid_argument("polynomial diffusion must have n rows");
    return p;
}

// Potential-derived model: g is computed as the exact gradient of G.
OscillatorModel with_potential(std::string name, Damping damping, MultiPolynomial G, Diffusion diffusion) {
    auto g = G.gradient();
    return OscillatorModel(std::move(name), std::move(damping), std::move(g), std::move(G), std::move(diffusion));
}

MultiPolynomial scalar_potential(double quadratic, double quartic) {
    MultiPolynomial G(1);
    G.add_term({2}, quadratic);
    G.add_term({4}, quartic);
    return G;
}

}  // namespace

OscillatorModel build_duffing(double alpha, double omega0, double lambda, double sigma) {
    require_positive(alpha, "alpha");
    require_positive(omega0, "omega0");
    require_positive(lambda, "lambda");
    const double w2 = omega0 * omega0;
    GeneralDamping damping{{MultiPolynomial::variable(2, 1, 2.0 * alpha * omega0)}};
    return with_potential("duffing", std::move(damping), scalar_potential(w2 * 0.5, w2 * lambda * 0.25),
                          ConstantDiffusion{Matrix::identity(1, sigma)});
}

OscillatorModel build_van_der_pol(double xi, double omega0, double gamma, double sigma) {
    require_positive(xi, "xi");
    require_positive(omega0, "omega0");
    require_positive(gamma, "gamma");
    const double w2 = omega0 * omega0;
    const double k = 2.0 * xi * omega0;
    LienardDamping damping{{Polynomial({-k, 0.0, k})}};
    return with_potential("vanderpol", std::move(damping), scalar_potential(w2 * 0.5, w2 * gamma * 0.25),
                          ConstantDiffusion{Matrix::identity(1, sigma)});
}

OscillatorModel build_duffing_vdp_general(const std::vector<double>& xi, const std::vector<double>& a,
                                          const DiffusionSpec& sigma) {
    if (xi.empty() || xi.size() % 2 != 0)
        throw std::invalid_argument("damping coefficients xi_1..xi_2m must have even, nonzero length");
    if (a.empty() || a.size() % 2 != 0)
        throw std::invalid_argument("restoring coefficients a_1..a_2n must have even, nonzero length");
    const std::size_t m = xi.size() / 2;
    const std::size_t n = a.size() / 2;
    if (!(m > n)) throw std::invalid_argument("constraint m > n >= 1 violated (m = " + std::to_string(m) +
                                              ", n = " + std::to_string(n) + ")");
    if (!(xi.back() > 0.0)) throw std::invalid_argument("constraint xi_2m > 0 violated");
    if (!(a.back() < 0.0)) throw std::invalid_argument("constraint a_2n < 0 violated");

    std::vector<double> f(xi.size() + 1, 0.0);
    for (std::size_t j = 1; j <= xi.size(); ++j) f[j] = xi[j - 1];
    std::vector<double> g(a.size() + 2, 0.0);
    for (std::size_t j = 1; j <= a.size(); ++j) g[j + 1] = a[j - 1];

    return OscillatorModel("duffing_vdp_general", LienardDamping{{Polynomial(std::move(f))}},
                           {MultiPolynomial::from_univariate(Polynomial(std::move(g)), 1, 0)}, std::nullopt,
                           make_diffusion(sigma, 1));
}

bool is_positive_matrix(const Matrix& B) {
    if (B.rows != B.cols || B.rows == 0) return false;
    const std::size_t n = B.rows;
    Eigen::MatrixXd sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (B(i, j) + B(j, i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-12) return false;

    const CounterStream stream(0x5eed0b5eULL, 0);
    std::vector<double> y(n);
    std::uint64_t block = 0;
    for (int sample = 0; sample < 1000; ++sample) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; i += 2) {
            const auto [z0, z1] = stream.normal_pair(block++);
            y[i] = z0;
            if (i + 1 < n) y[i + 1] = z1;
        }
        for (double v : y) norm2 += v * v;
        const double inv = 1.0 / std::sqrt(norm2);
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q += y[i] * inv * B(i, j) * y[j] * inv;
        if (q < -1e-12) return false;
    }
    return true;
}

OscillatorModel build_vector_duffing(const Matrix& B, const Matrix& A, const std::vector<double>& k_diag,
                                     const DiffusionSpec& sigma) {
    const std::size_t n = k_diag.size();
    if (n == 0) throw std::invalid_argument("vector Duffing: K must have at least one entry");
    if (B.rows != n || B.cols != n) throw std::invalid_argument("vector Duffing: B must be n x n");
    if (A.rows != n || A.cols != n) throw std::invalid_argument("vector Duffing: A must be n x n");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (A(i, j) != A(j, i)) throw std::invalid_argument("vector Duffing: A must be symmetric");
    for (double k : k_diag)
        if (!(k > 0.0)) throw std::invalid_argument("vector Duffing: K_ii must be positive");
    if (!is_positive_matrix(B)) throw std::invalid_argument("vector Duffing: B fails <y, B y> >= 0");
    {
        Eigen::MatrixXd a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = A(i, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-12)
            throw std::invalid_argument("vector Duffing: A must be positive semidefinite");
    }

    GeneralDamping damping;
    for (std::size_t i = 0; i < n; ++i) {
        MultiPolynomial bi(2 * n);
        for (std::size_t j = 0; j < n; ++j) bi += MultiPolynomial::variable(2 * n, n + j, B(i, j));
        damping.b.push_back(std::move(bi));
    }

    MultiPolynomial G(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            MultiPolynomial::Exponents e(n, 0);
            e[i] += 1;
            e[j] += 1;
            G.add_term(e, 0.5 * A(i, j));
        }
        MultiPolynomial::Exponents e(n, 0);
        e[i] = 4;
        G.add_term(e, k_diag[i] * 0.25);
    }
    return with_potential("vector_duffing", std::move(damping), std::move(G), make_diffusion(sigma, n));
}

OscillatorModel build_coupled_lienard(const std::vector<double>& xi, const std::vector<double>& a, double nu,
                                      unsigned n1, unsigned n2, const DiffusionSpec& sigma) {
    const std::size_t n = xi.size();
    if (n == 0 || a.size() != n) throw std::invalid_argument("coupled Liénard: xi and a must have equal, nonzero length");
    if (!(n2 > 0)) throw std::invalid_argument("coupled Liénard: constraint n2 > 0 violated");
    if (!(n1 > n2)) throw std::invalid_argument("coupled Liénard: constraint n1 > n2 violated");
    for (double v : xi)
        if (!(v > 0.0)) throw std::invalid_argument("coupled Liénard: xi_i must be positive");
    for (double v : a)
        if (!(v > 0.0)) throw std::invalid_argument("coupled Liénard: a_i must be positive");

    LienardDamping damping;
    for (std::size_t i = 0; i < n; ++i) damping.f.push_back(Polynomial::monomial(2 * n1, xi[i]));

    MultiPolynomial G(n);
    for (std::size_t i = 0; i < n; ++i) {
        MultiPolynomial::Exponents e(n, 0);
        e[i] = 2 * n2 + 2;
        G.add_term(e, -a[i]);
        MultiPolynomial::Exponents c(n, 0);
        c[0] += 1;
        c[i] += 1;
        G.add_term(c, -nu);
    }
    return with_potential("coupled_lienard", std::move(damping), std::move(G), make_diffusion(sigma, n));
}

OscillatorModel build_linear_oscillator(double zeta, double omega0, double sigma) {
    require_positive(zeta, "zeta");
    require_positive(omega0, "omega0");
    MultiPolynomial G(1);
    G.add_term({2}, omega0 * omega0 * 0.5);
    return with_potential("linear_oscillator", LienardDamping{{Polynomial::constant(2.0 * zeta * omega0)}},
                          std::move(G), ConstantDiffusion{Matrix::identity(1, sigma)});
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

json merge_params(const ModelCatalogEntry& entry, const json& params) {
    if (!params.is_object()) throw std::invalid_argument("model parameters must be a key/value table");
    json merged = entry.default_params;
    for (const auto& [key, value] : params.items()) {
        if (!merged.contains(key))
            throw std::invalid_argument("unknown parameter '" + key + "' for model '" + entry.name + "'");
        merged[key] = value;
    }
    return merged;
}

double num(const json& p, const char* key) {
    const auto& v = p.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> vec(const json& p, const char* key) {
    const auto& v = p.at(key);
    if (!v.is_array()) throw std::invalid_argument(std::string("parameter '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw std::invalid_argument(std::string("parameter '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Matrix mat(const json& v, const std::string& key) {
    if (!v.is_array() || v.empty()) throw std::invalid_argument("parameter '" + key + "' must be a matrix");
    Matrix m(v.size(), v[0].is_array() ? v[0].size() : 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].size() != m.cols || m.cols == 0)
            throw std::invalid_argument("parameter '" + key + "' must be a rectangular matrix");
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = v[i][j].get<double>();
    }
    return m;
}

DiffusionSpec sigma_spec(const json& p) {
    const auto& v = p.at("sigma");
    if (v.is_number()) return v.get<double>();
    return mat(v, "sigma");
}

unsigned natural(const json& p, const char* key) {
    const auto& v = p.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw std::invalid_argument(std::string("parameter '") + key + "' must be a nonnegative integer");
    return v.get<unsigned>();
}

std::vector<ModelCatalogEntry> make_catalog() {
    std::vector<ModelCatalogEntry> c;
    c.push_back({"duffing", "Duffing oscillator: linear damping, cubic stiffness, additive noise",
                 {{"alpha", 0.5}, {"lambda", 3.0}, {"omega0", 1.0}, {"sigma", 2.0}}, [](const json& p) {
                     return build_duffing(num(p, "alpha"), num(p, "omega0"), num(p, "lambda"), num(p, "sigma"));
                 }});
    c.push_back({"vanderpol", "Van der Pol oscillator with cubic stiffness, additive noise",
                 {{"xi", 0.1}, {"gamma", 0.25}, {"omega0", 1.0}, {"sigma", 0.1}}, [](const json& p) {
                     return build_van_der_pol(num(p, "xi"), num(p, "omega0"), num(p, "gamma"), num(p, "sigma"));
                 }});
    c.push_back({"duffing_vdp_general",
                 "Scalar Duffing-Van der Pol family: polynomial damping sum xi_j x^j, restoring sum a_j x^(j+1)",
                 {{"xi", {0.0, 0.0, 0.0, 1.0}}, {"a", {0.0, -1.0}}, {"sigma", 0.5}}, [](const json& p) {
                     return build_duffing_vdp_general(vec(p, "xi"), vec(p, "a"), sigma_spec(p));
                 }});
    c.push_back({"vector_duffing", "n-dimensional Duffing oscillator with damping matrix B and coupling matrix A",
                 {{"B", {{0.5, 0.1}, {-0.1, 0.5}}},
                  {"A", {{2.0, -1.0}, {-1.0, 2.0}}},
                  {"K", {1.0, 1.0}},
                  {"sigma", 0.5}},
                 [](const json& p) {
                     return build_vector_duffing(mat(p.at("B"), "B"), mat(p.at("A"), "A"), vec(p, "K"), sigma_spec(p));
                 }});
    c.push_back({"coupled_lienard", "Coupled Liénard oscillators with damping xi_i x_i^(2 n1) and a softening potential",
                 {{"xi", {1.0, 1.0}}, {"a", {1.0, 1.0}}, {"nu", 0.5}, {"n1", 2}, {"n2", 1}, {"sigma", 0.5}},
                 [](const json& p) {
                     return build_coupled_lienard(vec(p, "xi"), vec(p, "a"), num(p, "nu"), natural(p, "n1"),
                                                  natural(p, "n2"), sigma_spec(p));
                 }});
    c.push_back({"linear_oscillator", "Damped linear oscillator (Ornstein-Uhlenbeck in phase space)",
                 {{"zeta", 0.25}, {"omega0", 1.0}, {"sigma", 0.5}}, [](const json& p) {
                     return build_linear_oscillator(num(p, "zeta"), num(p, "omega0"), num(p, "sigma"));
                 }});

    std::set<std::string> names;
    for (const auto& e : c)
        if (!names.insert(e.name).second) throw std::logic_error("duplicate catalog entry " + e.name);
    return c;
}

}  // namespace

OscillatorModel ModelCatalogEntry::build(const json& params) const { return builder(merge_params(*this, params)); }

const std::vector<ModelCatalogEntry>& model_catalog() {
    static const std::vector<ModelCatalogEntry> catalog = make_catalog();
    return catalog;
}

const ModelCatalogEntry& find_model(const std::string& name) {
    for (const auto& e : model_catalog())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown model '" + name + "'");
}

json preset_params(const std::string& name) {
    if (name == "duffing") return {{"alpha", 0.5}, {"lambda", 3.0}, {"omega0", 1.0}, {"sigma", 2.0}};
    if (name == "vanderpol") return {{"xi", 0.1}, {"gamma", 0.25}, {"omega0", 1.0}, {"sigma", 0.1}};
    return find_model(name).default_params;
}

}  // namespace stochosc
