#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stochosc/grid.hpp"
#include "stochosc/phase.hpp"

namespace stochosc {

// ---------------------------------------------------------------------------
// Lyapunov functions and the generator

enum class Construction { EnergyForm, ScalarTransformed, VectorTransformed };

/// V(x, y) + K with V polynomial in the 2n phase variables.
struct LyapunovFunction {
    MultiPolynomial V;
    double K = 0.0;
    Construction construction = Construction::EnergyForm;

    double operator()(std::span<const double> z) const { return V(z) + K; }
};

/// V = G(x) + |y|^2 / 2. Uses the stored potential, or the antiderivative of g
/// for scalar models; throws if neither is available.
LyapunovFunction build_energy_lyapunov(const OscillatorModel& model, double K = 0.0);

/// V = int_0^x [F(s) + g(s)] ds + y^2 / 2 for scalar Liénard models.
LyapunovFunction build_transformed_lyapunov_scalar(const OscillatorModel& model, double K = 0.0);

/// V = H(x) + G(x) + |y|^2 / 2 for Liénard models with a potential.
LyapunovFunction build_transformed_lyapunov_vector(const OscillatorModel& model, double K = 0.0);

/// Exact generator  L = sum_k drift_k d/dz_k + 1/2 sum_{k,l} (sigma sigma^T)_kl d^2/dz_k dz_l
/// of a polynomial system.
class GeneratorOperator {
public:
    explicit GeneratorOperator(const PhaseSystem& system);

    MultiPolynomial apply(const MultiPolynomial& V) const;
    /// The additive constant K is annihilated.
    MultiPolynomial apply(const LyapunovFunction& V) const { return apply(V.V); }

    /// (sigma sigma^T)_kl, 2n x 2n row-major.
    const std::vector<MultiPolynomial>& covariance() const noexcept { return covariance_; }

private:
    const PhaseSystem* system_;
    std::vector<MultiPolynomial> covariance_;
};

MultiPolynomial apply_generator(const PhaseSystem& system, const LyapunovFunction& V);

/// LV(z) from central finite differences of V with step h, combined with the
/// system's drift and diffusion evaluated at z.
double finite_difference_generator(const PhaseSystem& system, const std::function<double(std::span<const double>)>& V,
                                   const PhasePoint& z, double h);

// ---------------------------------------------------------------------------
// Condition checking

enum class Status { Pass, Fail, Indeterminate };
std::string to_string(Status s);

struct ConditionResult {
    std::string name;
    Status status = Status::Indeterminate;
    std::string detail;
    std::map<std::string, double> witness;
    /// Violating grid point or failing ray direction, when there is one.
    std::vector<double> point;

    bool passed() const noexcept { return status == Status::Pass; }
};

/// Which asymptotic behaviour a polynomial must show along every ray.
enum class Requirement {
    NonNegative,  ///< eventually >= 0
    Unbounded,    ///< -> +infinity
};

/// Decides the behaviour of t -> p(t d) as t -> infinity from its coefficients.
/// A coefficient within 1e-12 of the magnitude of its contributing terms is a
/// cancellation along d and is skipped. `degree` receives the deciding degree,
/// or -1 when no coefficient decides.
Status ray_verdict(const MultiPolynomial::RayRestriction& ray, Requirement req, int* degree = nullptr);

/// Coordinate axes, all sign diagonals (up to 6 dimensions) and 64 seeded
/// random unit vectors.
std::vector<std::vector<double>> probe_directions(std::size_t dims, std::uint64_t seed);

struct AsymptoticResult {
    Status status = Status::Pass;
    std::vector<double> direction;  // first failing/undecided direction
};

/// Ray analysis over probe_directions. Terms with |coefficient| below
/// 1e-12 * max |coefficient| are treated as arithmetic residue and dropped; the
/// verdict is Indeterminate when a dropped term could reach the deciding degree.
AsymptoticResult check_asymptotics(const MultiPolynomial& p, Requirement req, std::uint64_t seed);

/// p >= 0 on the sample grid (up to rounding) and eventually along all probe rays.
ConditionResult check_nonnegative(const MultiPolynomial& p, const VerificationDomain& domain, std::string name);

/// p -> +infinity: asymptotic growth on all probe rays and strictly increasing
/// ring minima at radii R/2, R, 2R.
ConditionResult check_unbounded(const MultiPolynomial& p, const VerificationDomain& domain, std::string name);

/// <y, b> + c [G + |y|^2/2] + K1 - 1/2 Tr[sigma sigma^T] >= 0.
ConditionResult check_energy_noise_bound(const OscillatorModel& model, double c, double K1,
                                         const VerificationDomain& domain);

/// Smallest alpha in [0, alpha_max] with <b, y> + alpha |y|^2 >= 0, read off the
/// grid and then confirmed on the grid and asymptotically. Witness "alpha".
/// Throws std::invalid_argument for state-dependent diffusion.
ConditionResult check_dissipation_bound(const OscillatorModel& model, double alpha_max,
                                        const VerificationDomain& domain);

/// Scalar Liénard criterion in transformed coordinates:
///   [0] regularity (structural for polynomial models)
///   [1] x [F(x) + g(x)] >= c1 x^2 for |x| >= c2
///   [2] 1/2 sigma^2(x, y - F) <= 1/2 (y - F)^2 + F (F/2 + g) + K1
/// Throws std::invalid_argument unless the model is scalar with Liénard damping.
std::array<ConditionResult, 3> check_scalar_lienard(const OscillatorModel& model, const VerificationDomain& domain);

/// Vector Liénard criterion in transformed coordinates:
///   [0] regularity (structural)
///   [1] H(x) + G(x) -> +infinity
///   [2] Tr[sigma sigma^T](x, y - F) <= |y|^2 + <grad H, grad H + 2 grad G> + K2
/// Throws std::invalid_argument unless the model is Liénard with a potential.
std::array<ConditionResult, 3> check_vector_lienard(const OscillatorModel& model, const VerificationDomain& domain);

// ---------------------------------------------------------------------------
// Certificates

enum class Criterion {
    DissipativeConstantNoise,  ///< wire name "Corollary1"
    EnergyBound,               ///< "Theorem2"
    ScalarLienard,             ///< "Theorem3"
    VectorLienard,             ///< "Theorem4"
    None,
};

std::string to_string(Criterion c);

struct VerifyOptions {
    VerificationDomain domain;
    double c = 1.0;
    double alpha_max = 10.0;
};

struct LyapunovCertificate {
    Criterion theorem = Criterion::None;
    std::vector<Criterion> passed;
    std::vector<ConditionResult> conditions;
    /// Constants of the applied criterion (subset of c, K, K1, K2, c1, c2, alpha).
    std::map<std::string, double> constants;
    std::map<Criterion, std::map<std::string, double>> constants_by_criterion;
    double r_check = 0.0;
    std::string grid;
    std::vector<std::string> notes;
    std::string report_text;

    bool non_explosive() const noexcept { return theorem != Criterion::None; }
};

/// Tries every criterion and applies the first that passes, in the order
/// Corollary1, Theorem2, Theorem3, Theorem4.
LyapunovCertificate verify_nonexplosion(const OscillatorModel& model, const VerifyOptions& options = {});

}  // namespace stochosc
