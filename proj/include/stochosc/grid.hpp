#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stochosc {

/// Box [-radius, radius]^d on which inequality conditions are sampled.
struct VerificationDomain {
    double radius = 10.0;
    /// 0 selects the default: 201 per axis for d <= 2, 41 for d <= 4,
    /// Monte Carlo sampling above that.
    int points_per_axis = 0;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Deterministic enumeration of sample points: a full lattice or a fixed
/// Monte Carlo cloud. Point i is a pure function of i.
class SampleGrid {
public:
    SampleGrid(std::size_t dims, const VerificationDomain& domain);

    std::size_t dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return size_; }
    bool is_lattice() const noexcept { return lattice_; }
    int points_per_axis() const noexcept { return per_axis_; }
    double radius() const noexcept { return radius_; }
    /// Lattice spacing (0 for Monte Carlo).
    double spacing() const noexcept;
    /// e.g. "201^2" or "mc:100000".
    std::string describe() const;

    void point(std::size_t index, std::span<double> out) const;
    /// Lattice index of coordinate `axis` of point `index`.
    std::size_t axis_index(std::size_t index, std::size_t axis) const noexcept;

private:
    std::size_t dims_;
    double radius_;
    bool lattice_;
    int per_axis_ = 0;
    std::size_t size_ = 0;
    std::uint64_t seed_;
};

struct ScanResult {
    double value = std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
    std::vector<double> point;
    std::size_t evaluated = 0;

    bool found() const noexcept { return index != std::numeric_limits<std::size_t>::max(); }
};

namespace detail {

inline bool better(double v, std::size_t i, double best_v, std::size_t best_i) noexcept {
    return v < best_v || (v == best_v && i < best_i);
}

}  // namespace detail

/// Minimum of fn over the grid, ties resolved to the smallest index. fn
/// returning NaN excludes the point. Reference implementation.
template <class Fn>
ScanResult scan_min_serial(const SampleGrid& grid, Fn&& fn) {
    ScanResult best;
    std::vector<double> z(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, z);
        const double v = fn(std::span<const double>(z));
        if (std::isnan(v)) continue;
        ++best.evaluated;
        if (detail::better(v, i, best.value, best.index)) {
            best.value = v;
            best.index = i;
        }
    }
    if (best.found()) {
        best.point.resize(grid.dims());
        grid.point(best.index, best.point);
    }
    return best;
}

/// OpenMP version of scan_min_serial; bit-identical result for any thread
/// count since the (value, index) order is total.
template <class Fn>
ScanResult scan_min(const SampleGrid& grid, Fn&& fn) {
    ScanResult best;
    const auto total = static_cast<std::int64_t>(grid.size());
#pragma omp parallel
    {
        double local_v = std::numeric_limits<double>::infinity();
        std::size_t local_i = std::numeric_limits<std::size_t>::max();
        std::size_t local_count = 0;
        std::vector<double> z(grid.dims());
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < total; ++k) {
            const auto i = static_cast<std::size_t>(k);
            grid.point(i, z);
            const double v = fn(std::span<const double>(z));
            if (std::isnan(v)) continue;
            ++local_count;
            if (detail::better(v, i, local_v, local_i)) {
                local_v = v;
                local_i = i;
            }
        }
#pragma omp critical(stochosc_scan_min)
        {
            best.evaluated += local_count;
            if (local_i != std::numeric_limits<std::size_t>::max() &&
                detail::better(local_v, local_i, best.value, best.index)) {
                best.value = local_v;
                best.index = local_i;
            }
        }
    }
    if (best.found()) {
        best.point.resize(grid.dims());
        grid.point(best.index, best.point);
    }
    return best;
}

}  // namespace stochosc
