#include "stochosc/grid.hpp"

#include <stdexcept>

#include "stochosc/rng.hpp"

namespace stochosc {

SampleGrid::SampleGrid(std::size_t dims, const VerificationDomain& domain)
    : dims_(dims), radius_(domain.radius), lattice_(dims <= 4), seed_(domain.seed) {
    if (dims == 0) throw std::invalid_argument("SampleGrid: dimension must be positive");
    if (!(domain.radius > 0.0)) throw std::invalid_argument("SampleGrid: radius must be positive");
    if (lattice_) {
        per_axis_ = domain.points_per_axis > 0 ? domain.points_per_axis : (dims <= 2 ? 201 : 41);
        if (per_axis_ < 2) throw std::invalid_argument("SampleGrid: need at least 2 points per axis");
        size_ = 1;
        for (std::size_t d = 0; d < dims; ++d) size_ *= static_cast<std::size_t>(per_axis_);
    } else {
        if (domain.mc_samples == 0) throw std::invalid_argument("SampleGrid: Monte Carlo sample count must be positive");
        size_ = domain.mc_samples;
    }
}

double SampleGrid::spacing() const noexcept { return lattice_ ? 2.0 * radius_ / (per_axis_ - 1) : 0.0; }

std::string SampleGrid::describe() const {
    if (lattice_) return std::to_string(per_axis_) + "^" + std::to_string(dims_);
    return "mc:" + std::to_string(size_);
}

std::size_t SampleGrid::axis_index(std::size_t index, std::size_t axis) const noexcept {
    const auto p = static_cast<std::size_t>(per_axis_);
    for (std::size_t d = 0; d < axis; ++d) index /= p;
    return index % p;
}

void SampleGrid::point(std::size_t index, std::span<double> out) const {
    if (lattice_) {
        const auto p = static_cast<std::size_t>(per_axis_);
        const double denom = static_cast<double>(per_axis_ - 1);
        for (std::size_t d = 0; d < dims_; ++d) {
            const auto k = static_cast<double>(index % p);
            index /= p;
            out[d] = -radius_ + (2.0 * radius_ * k) / denom;
        }
        return;
    }
    const CounterStream stream(seed_, dims_);
    const std::uint64_t blocks = (dims_ + 1) / 2;
    for (std::size_t d = 0; d < dims_; d += 2) {
        const auto [u0, u1] = stream.uniform_pair(index * blocks + d / 2);
        out[d] = -radius_ + 2.0 * radius_ * u0;
        if (d + 1 < dims_) out[d + 1] = -radius_ + 2.0 * radius_ * u1;
    }
}

}  // namespace stochosc
