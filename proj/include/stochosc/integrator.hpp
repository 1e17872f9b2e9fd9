#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stochosc/phase.hpp"

namespace stochosc {

struct IntegrationConfig {
    double dt = 1e-3;
    double T = 50.0;
    PhasePoint initial;
    std::uint64_t seed = 42;
    /// Escape threshold on the Euclidean norm of the phase point.
    double r_max = 1e6;
    std::size_t record_stride = 1;

    /// floor(T / dt), guarded against representation error in T / dt.
    std::size_t n_steps() const;
    /// Throws std::invalid_argument naming the offending field.
    void validate(std::size_t dimension) const;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    bool escaped = false;
    std::optional<double> escape_time;
    std::uint64_t seed_used = 0;
};

/// Per-time statistics of |z| over the paths still alive at that time.
struct EnsembleSummary {
    std::vector<double> times;
    std::vector<std::size_t> count;
    std::vector<double> mean;
    /// Population variance (divides by count).
    std::vector<double> variance;
};

struct EnsembleResult {
    std::size_t n_paths = 0;
    std::size_t escape_count = 0;
    /// Ordered by path index, as are escape_paths and terminal_states.
    std::vector<double> escape_times;
    std::vector<std::size_t> escape_paths;
    std::vector<PhasePoint> terminal_states;
    EnsembleSummary summary;
};

/// Scratch buffers for em_step; reusable across steps of one path.
struct StepWorkspace {
    std::vector<double> drift;
    std::vector<double> diffusion;

    explicit StepWorkspace(const PhaseSystem& system)
        : drift(system.dimension()), diffusion(system.dimension() * system.noise_dimension()) {}
};

/// z <- z + drift(z) dt + diffusion(z) dW, in place.
void em_step(const PhaseSystem& system, std::span<double> z, double dt, std::span<const double> dW, StepWorkspace& ws);

PhasePoint em_step(const PhaseSystem& system, const PhasePoint& z, double dt, std::span<const double> dW);

/// One path driven by the Wiener stream (config.seed, path_index). Stops at
/// the first step with |z| >= r_max or a non-finite entry; that state is
/// appended to the record.
Trajectory simulate_path(const PhaseSystem& system, const IntegrationConfig& config, std::uint64_t path_index = 0);

/// Paths 0 .. n_paths-1 in parallel. Bit-identical for any thread count.
EnsembleResult simulate_ensemble(const PhaseSystem& system, const IntegrationConfig& config, std::size_t n_paths);

/// Straightforward sequential reference for simulate_ensemble. Agrees with it
/// to rounding in the summary statistics and exactly elsewhere.
EnsembleResult simulate_ensemble_serial(const PhaseSystem& system, const IntegrationConfig& config,
                                        std::size_t n_paths);

struct StrongOrderResult {
    double order_estimate = 0.0;
    /// errors_per_level[l] = E|z_{dt_l}(T) - z_{dt_{l+1}}(T)| with dt_{l+1} = dt_l / 2.
    std::vector<double> errors_per_level;
    /// Coarser step of each compared pair.
    std::vector<double> step_sizes;
    std::size_t paths_used = 0;
    std::size_t paths_escaped = 0;
    /// More than 10% of the paths escaped at some level.
    bool unreliable = false;
};

/// Couples each path across `levels` dyadic step sizes config.dt * 2^k,
/// k = 0 .. levels-1, by summing fine increments into coarse ones. The order is
/// the least-squares slope of log2 error against log2 step size.
StrongOrderResult estimate_strong_order(const PhaseSystem& system, const IntegrationConfig& config,
                                        std::size_t n_paths, std::size_t levels);

}  // namespace stochosc
