#include "stochosc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stochosc/rng.hpp"

namespace stochosc {

std::size_t IntegrationConfig::n_steps() const {
    return static_cast<std::size_t>(std::floor(T / dt + 1e-9));
}

void IntegrationConfig::validate(std::size_t dimension) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("integration: dt must be positive and finite");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("integration: T must be positive and finite");
    if (dt > T) throw std::invalid_argument("integration: dt must not exceed T");
    if (n_steps() < 1) throw std::invalid_argument("integration: T / dt must be at least 1");
    if (record_stride < 1) throw std::invalid_argument("integration: record_stride must be at least 1");
    if (initial.dimension() != dimension || initial.y.size() != dimension)
        throw std::invalid_argument("integration: initial state has dimension " +
                                    std::to_string(initial.dimension()) + ", system needs " +
                                    std::to_string(dimension));
    if (!initial.is_finite()) throw std::invalid_argument("integration: initial state must be finite");
    if (!(r_max > initial.norm())) throw std::invalid_argument("integration: r_max must exceed |initial|");
}

void em_step(const PhaseSystem& system, std::span<double> z, double dt, std::span<const double> dW,
             StepWorkspace& ws) {
    const std::size_t d = system.dimension();
    const std::size_t m = system.noise_dimension();
    system.drift(z, ws.drift);
    system.diffusion(z, ws.diffusion);
    for (std::size_t k = 0; k < d; ++k) {
        double noise = 0.0;
        const double* row = ws.diffusion.data() + k * m;
        for (std::size_t j = 0; j < m; ++j) noise += row[j] * dW[j];
        z[k] += ws.drift[k] * dt + noise;
    }
}

PhasePoint em_step(const PhaseSystem& system, const PhasePoint& z, double dt, std::span<const double> dW) {
    if (dW.size() != system.noise_dimension()) throw std::invalid_argument("em_step: dW has wrong length");
    auto flat = z.flat();
    if (flat.size() != system.dimension()) throw std::invalid_argument("em_step: state has wrong dimension");
    StepWorkspace ws(system);
    em_step(system, flat, dt, dW, ws);
    return PhasePoint::from_flat(flat);
}

namespace {

bool escaped_state(std::span<const double> z, double r_max) {
    double s = 0.0;
    for (double v : z) {
        if (!std::isfinite(v)) return true;
        s += v * v;
    }
    return !(std::sqrt(s) < r_max);
}

double norm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

// Increments are generated in blocks of this many steps to bound memory.
constexpr std::size_t kIncrementBlock = 1024;

/// Integrates one path, calling record(step, z) at every multiple of the
/// stride. Returns the escape step, if any; z then holds the escaping state.
template <class Record>
std::optional<std::size_t> integrate(const PhaseSystem& system, const IntegrationConfig& config,
                                     std::uint64_t path_index, std::vector<double>& z, Record&& record) {
    const std::size_t m = system.noise_dimension();
    const std::size_t n_steps = config.n_steps();
    StepWorkspace ws(system);
    std::vector<double> dW(kIncrementBlock * m);
    z = config.initial.flat();
    record(std::size_t{0}, std::span<const double>(z));
    for (std::size_t first = 0; first < n_steps; first += kIncrementBlock) {
        const std::size_t count = std::min(kIncrementBlock, n_steps - first);
        fill_wiener_increments(config.seed, path_index, m, first, count, config.dt, dW);
        for (std::size_t s = 0; s < count; ++s) {
            em_step(system, z, config.dt, std::span<const double>(dW.data() + s * m, m), ws);
            const std::size_t step = first + s + 1;
            if (escaped_state(z, config.r_max)) return step;
            if (step % config.record_stride == 0) record(step, std::span<const double>(z));
        }
    }
    return std::nullopt;
}

std::size_t record_count(const IntegrationConfig& config) { return config.n_steps() / config.record_stride + 1; }

}  // namespace

Trajectory simulate_path(const PhaseSystem& system, const IntegrationConfig& config, std::uint64_t path_index) {
    config.validate(system.half_dimension());
    Trajectory traj;
    traj.seed_used = config.seed;
    traj.times.reserve(record_count(config));
    traj.states.reserve(record_count(config));
    std::vector<double> z;
    const auto escape = integrate(system, config, path_index, z, [&](std::size_t step, std::span<const double> s) {
        traj.times.push_back(static_cast<double>(step) * config.dt);
        traj.states.push_back(PhasePoint::from_flat(s));
    });
    if (escape) {
        traj.escaped = true;
        traj.escape_time = static_cast<double>(*escape) * config.dt;
        traj.times.push_back(*traj.escape_time);
        traj.states.push_back(PhasePoint::from_flat(z));
    }
    return traj;
}

namespace {

/// Running (count, mean, M2) per record time.
struct Moments {
    std::vector<std::size_t> count;
    std::vector<double> mean;
    std::vector<double> m2;

    explicit Moments(std::size_t n) : count(n, 0), mean(n, 0.0), m2(n, 0.0) {}

    void add(std::size_t i, double v) {
        ++count[i];
        const double delta = v - mean[i];
        mean[i] += delta / static_cast<double>(count[i]);
        m2[i] += delta * (v - mean[i]);
    }

    void merge(const Moments& o) {
        for (std::size_t i = 0; i < count.size(); ++i) {
            if (o.count[i] == 0) continue;
            if (count[i] == 0) {
                count[i] = o.count[i];
                mean[i] = o.mean[i];
                m2[i] = o.m2[i];
                continue;
            }
            const auto na = static_cast<double>(count[i]);
            const auto nb = static_cast<double>(o.count[i]);
            const double n = na + nb;
            const double delta = o.mean[i] - mean[i];
            mean[i] += delta * nb / n;
            m2[i] += o.m2[i] + delta * delta * na * nb / n;
            count[i] += o.count[i];
        }
    }
};

struct PathOutcome {
    std::optional<double> escape_time;
    PhasePoint terminal;
};

/// Simulates a path, folding |z| at each recorded time into moments.
PathOutcome run_path(const PhaseSystem& system, const IntegrationConfig& config, std::uint64_t path,
                     Moments& moments) {
    std::vector<double> z;
    const auto escape = integrate(system, config, path, z, [&](std::size_t step, std::span<const double> s) {
        moments.add(step / config.record_stride, norm(s));
    });
    PathOutcome out;
    if (escape)
        out.escape_time = static_cast<double>(*escape) * config.dt;
    else
        out.terminal = PhasePoint::from_flat(z);
    return out;
}

EnsembleResult assemble(const IntegrationConfig& config, std::size_t n_paths, const std::vector<PathOutcome>& paths,
                        const Moments& moments) {
    EnsembleResult r;
    r.n_paths = n_paths;
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (paths[p].escape_time) {
            r.escape_times.push_back(*paths[p].escape_time);
            r.escape_paths.push_back(p);
        } else {
            r.terminal_states.push_back(paths[p].terminal);
        }
    }
    r.escape_count = r.escape_times.size();
    const std::size_t n_rec = record_count(config);
    auto& s = r.summary;
    s.times.resize(n_rec);
    s.count = moments.count;
    s.mean = moments.mean;
    s.variance.resize(n_rec);
    for (std::size_t i = 0; i < n_rec; ++i) {
        s.times[i] = static_cast<double>(i * config.record_stride) * config.dt;
        s.variance[i] = moments.count[i] > 0 ? moments.m2[i] / static_cast<double>(moments.count[i]) : 0.0;
        if (moments.count[i] == 0) s.mean[i] = std::nan("");
    }
    return r;
}

constexpr std::size_t kChunk = 64;

}  // namespace

EnsembleResult simulate_ensemble(const PhaseSystem& system, const IntegrationConfig& config, std::size_t n_paths) {
    config.validate(system.half_dimension());
    if (n_paths < 1) throw std::invalid_argument("ensemble: n_paths must be at least 1");
    const std::size_t n_rec = record_count(config);
    const std::size_t n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<PathOutcome> paths(n_paths);
    std::vector<Moments> chunk_moments(n_chunks, Moments(n_rec));

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        const auto chunk = static_cast<std::size_t>(c);
        const std::size_t end = std::min(n_paths, (chunk + 1) * kChunk);
        for (std::size_t p = chunk * kChunk; p < end; ++p)
            paths[p] = run_path(system, config, p, chunk_moments[chunk]);
    }

    Moments total(n_rec);
    for (const auto& cm : chunk_moments) total.merge(cm);
    return assemble(config, n_paths, paths, total);
}

EnsembleResult simulate_ensemble_serial(const PhaseSystem& system, const IntegrationConfig& config,
                                        std::size_t n_paths) {
    config.validate(system.half_dimension());
    if (n_paths < 1) throw std::invalid_argument("ensemble: n_paths must be at least 1");
    Moments moments(record_count(config));
    std::vector<PathOutcome> paths(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) paths[p] = run_path(system, config, p, moments);
    return assemble(config, n_paths, paths, moments);
}

// ---------------------------------------------------------------------------

StrongOrderResult estimate_strong_order(const PhaseSystem& system, const IntegrationConfig& config,
                                        std::size_t n_paths, std::size_t levels) {
    config.validate(system.half_dimension());
    if (levels < 3) throw std::invalid_argument("strong order: need at least 3 levels");
    if (n_paths < 1) throw std::invalid_argument("strong order: n_paths must be at least 1");
    const std::size_t n_fine = config.n_steps();
    const std::size_t coarsest_factor = std::size_t{1} << (levels - 1);
    if (n_fine % coarsest_factor != 0)
        throw std::invalid_argument("strong order: T / dt must be divisible by 2^(levels-1)");

    const std::size_t m = system.noise_dimension();
    const std::size_t d = system.dimension();

    // terminal[p][l] holds z(T) at step dt * 2^l; escaped[p] marks excluded paths.
    std::vector<std::vector<double>> terminal(n_paths, std::vector<double>(levels * d));
    std::vector<char> escaped(n_paths, 0);

#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t pi = 0; pi < static_cast<std::int64_t>(n_paths); ++pi) {
        const auto p = static_cast<std::size_t>(pi);
        const Matrix fine = wiener_increments(config.seed, p, m, n_fine, config.dt);
        StepWorkspace ws(system);
        std::vector<double> dW(m);
        for (std::size_t l = 0; l < levels && !escaped[p]; ++l) {
            const std::size_t factor = std::size_t{1} << l;
            const double h = config.dt * static_cast<double>(factor);
            std::vector<double> z = config.initial.flat();
            for (std::size_t s = 0; s < n_fine / factor; ++s) {
                std::fill(dW.begin(), dW.end(), 0.0);
                for (std::size_t k = 0; k < factor; ++k)
                    for (std::size_t j = 0; j < m; ++j) dW[j] += fine(s * factor + k, j);
                em_step(system, z, h, dW, ws);
                if (escaped_state(z, config.r_max)) {
                    escaped[p] = 1;
                    break;
                }
            }
            std::copy(z.begin(), z.end(), terminal[p].begin() + static_cast<std::ptrdiff_t>(l * d));
        }
    }

    StrongOrderResult r;
    r.errors_per_level.assign(levels - 1, 0.0);
    for (std::size_t p = 0; p < n_paths; ++p) {
        if (escaped[p]) {
            ++r.paths_escaped;
            continue;
        }
        ++r.paths_used;
        for (std::size_t l = 0; l + 1 < levels; ++l) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = terminal[p][(l + 1) * d + k] - terminal[p][l * d + k];
                s += diff * diff;
            }
            r.errors_per_level[l] += std::sqrt(s);
        }
    }
    r.unreliable = 10 * r.paths_escaped > n_paths;
    if (r.paths_used == 0) {
        r.unreliable = true;
        r.order_estimate = std::nan("");
        return r;
    }
    for (auto& e : r.errors_per_level) e /= static_cast<double>(r.paths_used);

    // Pair l compares steps dt*2^l and dt*2^(l+1); index it by the coarser one.
    std::vector<double> lx, ly;
    for (std::size_t l = 0; l + 1 < levels; ++l) {
        const double h = config.dt * static_cast<double>(std::size_t{2} << l);
        r.step_sizes.push_back(h);
        if (r.errors_per_level[l] > 0.0) {
            lx.push_back(std::log2(h));
            ly.push_back(std::log2(r.errors_per_level[l]));
        }
    }
    if (lx.size() < 2) {
        r.order_estimate = std::nan("");
        return r;
    }
    const double k = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    r.order_estimate = sxy / sxx;
    return r;
}

}  // namespace stochosc
