#pragma once

#include <cstddef>

#include "ffst/dynamics.hpp"

namespace ffst {

struct CosineSweepSpec {
    double delta_omega0 = 30.0;
    double duration = 1.0;
};

// 20000 steps, refined so h <= 3e-4 for long runs, capped at 1e5
std::size_t default_n_steps(double duration);

// dw(t) = dw0 cos(pi t / T), g = 1
DriveSchedule build_cosine_sweep(const CosineSweepSpec& spec, const TimeGrid& grid);

ReferenceTrajectory solve_reference(const CosineSweepSpec& spec, const TwoLevelState& initial,
                                    std::size_t n_steps = 0);

}  // namespace ffst
