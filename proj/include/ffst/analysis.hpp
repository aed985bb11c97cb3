#pragma once

#include <span>
#include <string>
#include <vector>

#include "ffst/dynamics.hpp"
#include "ffst/ffst.hpp"

namespace ffst {

struct FidelityReport {
    double fidelity = 0.0;
    TwoLevelState final_state;
    TwoLevelState target_state;
    std::string control_label;
    std::vector<double> population1, population2;
    ReferenceTrajectory run;
};

FidelityReport verify_control(const ControlSchedule& control, const TwoLevelState& initial,
                              const TwoLevelState& target);

struct TrajectoryShiftSeries {
    TimeGrid grid;
    std::vector<double> overlap_x, overlap_y;  // NaN where a branch is absent
    std::vector<char> dominant;                // 'X', 'Y' or '-' while undecided
    std::vector<double> shift_times;

    std::size_t shift_count() const { return shift_times.size(); }
};

inline constexpr double shift_hysteresis = 1e-6;

TrajectoryShiftSeries trajectory_shift_analysis(const ReferenceTrajectory& itt_run,
                                                const SpeedControlledTrajectory& x,
                                                const SpeedControlledTrajectory& y, const ScaledReference& sref,
                                                double hysteresis = shift_hysteresis);

struct GapDirectionProfile {
    enum class Opening { none, horizontal, vertical };
    double T_F = 1.0;
    std::vector<int> root_counts;
    std::vector<double> degenerate_times;    // Re[phi1* phi2] = 0 away from t = 0
    std::vector<int> counts_at_degenerate;
    std::vector<std::pair<double, double>> zero_root_intervals;
    bool zero_root_everywhere = false;       // f2 = 0 solves at every sample
    Opening opening = Opening::none;
};

std::vector<GapDirectionProfile> gap_direction_scan(std::span<const double> T_F_values,
                                                    const ReferenceTrajectory& ref, std::size_t n_steps = 0);

// | |<target|psi>| - |<target|psi'>| | with delta added to both level energies in the second run
double global_phase_check(const ControlSchedule& control, std::span<const double> shift,
                          const TwoLevelState& initial, const TwoLevelState& target);

}  // namespace ffst
