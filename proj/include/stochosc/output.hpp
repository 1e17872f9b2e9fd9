#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stochosc/integrator.hpp"

namespace stochosc {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Header t,x_1..x_n,v_1..v_n,escaped,representation. `escaped` is 1 on the
/// row holding the escaping state and 0 elsewhere. LF line endings.
std::string trajectory_csv(const Trajectory& traj, std::string_view representation);

struct CsvTrajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
    std::vector<bool> escaped;
    std::vector<std::string> representation;
};

/// Inverse of trajectory_csv. Throws std::invalid_argument on malformed input.
CsvTrajectory parse_trajectory_csv(std::string_view text);

/// t,count,mean_norm,var_norm
std::string ensemble_summary_csv(const EnsembleSummary& summary);

/// Two stacked panels, positions and velocities against time. Non-finite
/// samples are skipped. Throws std::invalid_argument for an empty trajectory.
std::string render_svg(const Trajectory& traj, const std::string& title);

}  // namespace stochosc
