#include "stochosc/serialize.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace stochosc {

using nlohmann::json;

json to_json(const Polynomial& p) { return p.coeffs(); }

Polynomial polynomial_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("polynomial must be an array of coefficients");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw std::invalid_argument("polynomial coefficients must be numbers");
        c.push_back(v.get<double>());
    }
    return Polynomial(std::move(c));
}

json to_json(const MultiPolynomial& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"exponents", e}, {"coeff", c}});
    return out;
}

MultiPolynomial multipoly_from_json(const json& j, std::size_t nvars) {
    if (!j.is_array()) throw std::invalid_argument("multivariate polynomial must be a list of terms");
    MultiPolynomial p(nvars);
    for (const auto& t : j) {
        if (!t.is_object()) throw std::invalid_argument("polynomial term must be {exponents, coeff}");
        for (const auto& [key, _] : t.items())
            if (key != "exponents" && key != "coeff") throw std::invalid_argument("unknown polynomial term key '" + key + "'");
        if (!t.contains("exponents") || !t.contains("coeff"))
            throw std::invalid_argument("polynomial term needs 'exponents' and 'coeff'");
        const auto& ex = t.at("exponents");
        if (!ex.is_array() || ex.size() != nvars)
            throw std::invalid_argument("term exponents must have " + std::to_string(nvars) + " entries");
        MultiPolynomial::Exponents e;
        for (const auto& v : ex) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw std::invalid_argument("exponents must be nonnegative integers");
            e.push_back(v.get<unsigned>());
        }
        if (!t.at("coeff").is_number()) throw std::invalid_argument("term coeff must be a number");
        p.add_term(e, t.at("coeff").get<double>());
    }
    return p;
}

namespace {

bool is_number_array(const json& j) {
    if (!j.is_array()) return false;
    for (const auto& v : j)
        if (!v.is_number()) return false;
    return true;
}

// A polynomial in x only; n = 1 also accepts a plain coefficient array.
MultiPolynomial position_poly(const json& j, std::size_t n) {
    if (n == 1 && is_number_array(j)) return MultiPolynomial::from_univariate(polynomial_from_json(j), 1, 0);
    return multipoly_from_json(j, n);
}

std::size_t infer_dimension(const json& p) {
    std::set<std::size_t> sizes;
    for (const char* key : {"damping_general", "damping_lienard", "restoring"})
        if (p.contains(key)) {
            const auto& v = p.at(key);
            if (!v.is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
            sizes.insert(std::string(key) == "restoring" && is_number_array(v) ? 1 : v.size());
        }
    if (p.contains("n")) {
        if (!p.at("n").is_number_integer() || p.at("n").get<long long>() < 1)
            throw std::invalid_argument("'n' must be a positive integer");
        sizes.insert(p.at("n").get<std::size_t>());
    }
    if (sizes.empty()) return 1;
    if (sizes.size() > 1) throw std::invalid_argument("custom model: inconsistent dimension across entries");
    return *sizes.begin();
}

}  // namespace

OscillatorModel build_custom_model(const json& p) {
    if (!p.is_object()) throw std::invalid_argument("custom model must be a key/value table");
    static const std::set<std::string> known{"name",      "n",         "damping_general", "damping_lienard",
                                             "restoring", "potential", "sigma"};
    for (const auto& [key, _] : p.items())
        if (!known.count(key)) throw std::invalid_argument("unknown custom model key '" + key + "'");

    const std::size_t n = infer_dimension(p);
    const std::string name = p.value("name", std::string("custom"));

    if (p.contains("damping_general") == p.contains("damping_lienard"))
        throw std::invalid_argument("custom model needs exactly one of 'damping_general' or 'damping_lienard'");
    Damping damping;
    if (p.contains("damping_general")) {
        GeneralDamping d;
        for (const auto& e : p.at("damping_general")) d.b.push_back(multipoly_from_json(e, 2 * n));
        damping = std::move(d);
    } else {
        LienardDamping d;
        for (const auto& e : p.at("damping_lienard")) d.f.push_back(polynomial_from_json(e));
        damping = std::move(d);
    }

    if (p.contains("restoring") == p.contains("potential"))
        throw std::invalid_argument("custom model needs exactly one of 'restoring' or 'potential'");
    std::vector<MultiPolynomial> g;
    std::optional<MultiPolynomial> G;
    if (p.contains("potential")) {
        G = position_poly(p.at("potential"), n);
        g = G->gradient();
    } else {
        const auto& r = p.at("restoring");
        if (n == 1 && is_number_array(r))
            g.push_back(position_poly(r, 1));
        else
            for (const auto& e : r) g.push_back(position_poly(e, n));
    }

    if (!p.contains("sigma")) throw std::invalid_argument("custom model needs 'sigma'");
    const auto& s = p.at("sigma");
    Diffusion diffusion;
    if (s.is_number()) {
        diffusion = ConstantDiffusion{Matrix::identity(n, s.get<double>())};
    } else if (s.is_object()) {
        if (s.size() != 1 || !s.contains("polynomial"))
            throw std::invalid_argument("polynomial sigma must be {\"polynomial\": [[...]]}");
        const auto& rows = s.at("polynomial");
        if (!rows.is_array() || rows.size() != n) throw std::invalid_argument("polynomial sigma must have n rows");
        PolynomialDiffusion pd;
        pd.rows = n;
        pd.cols = rows[0].is_array() ? rows[0].size() : 0;
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != pd.cols || pd.cols == 0)
                throw std::invalid_argument("polynomial sigma must be a rectangular matrix");
            for (const auto& e : row) pd.entries.push_back(multipoly_from_json(e, 2 * n));
        }
        diffusion = std::move(pd);
    } else if (s.is_array()) {
        if (s.size() != n || !s[0].is_array() || s[0].empty())
            throw std::invalid_argument("sigma matrix must have n rows");
        Matrix m(n, s[0].size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_number_array(s[i]) || s[i].size() != m.cols)
                throw std::invalid_argument("sigma matrix must be rectangular and numeric");
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = s[i][j].get<double>();
        }
        diffusion = ConstantDiffusion{std::move(m)};
    } else {
        throw std::invalid_argument("'sigma' must be a number, a matrix or {\"polynomial\": ...}");
    }

    return OscillatorModel(name, std::move(damping), std::move(g), std::move(G), std::move(diffusion));
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const LyapunovCertificate& cert) {
    json conditions = json::array();
    for (const auto& c : cert.conditions) {
        json witness = json::object();
        for (const auto& [k, v] : c.witness) witness[k] = finite_or_null(v);
        json entry{{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}, {"witness", witness}};
        if (!c.point.empty()) entry["point"] = c.point;
        conditions.push_back(std::move(entry));
    }
    json constants = json::object();
    for (const auto& [k, v] : cert.constants) constants[k] = finite_or_null(v);
    json passed = json::array();
    for (auto c : cert.passed) passed.push_back(to_string(c));
    return {{"theorem", to_string(cert.theorem)},
            {"passed", passed},
            {"conditions", conditions},
            {"constants", constants},
            {"domain", {{"R_check", cert.r_check}, {"grid", cert.grid}}},
            {"notes", cert.notes}};
}

json to_json(const StrongOrderResult& r) {
    json errors = json::array();
    for (double e : r.errors_per_level) errors.push_back(finite_or_null(e));
    return {{"order_estimate", finite_or_null(r.order_estimate)},
            {"errors_per_level", errors},
            {"step_sizes", r.step_sizes},
            {"paths_used", r.paths_used},
            {"paths_escaped", r.paths_escaped},
            {"unreliable", r.unreliable}};
}

}  // namespace stochosc
