#include "ffst/drives.hpp"

#include <algorithm>
#include <cmath>

#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

std::size_t default_n_steps(double duration) {
    auto n = static_cast<std::size_t>(std::ceil(duration / 3e-4));
    return std::clamp<std::size_t>(n, 20000, 100000);
}

DriveSchedule build_cosine_sweep(const CosineSweepSpec& spec, const TimeGrid& grid) {
    if (!(spec.duration > 0)) throw DomainError("sweep duration must be positive");
    if (grid.t0() != 0.0 || std::abs(grid.t_end() - spec.duration) > 1e-12 * spec.duration)
        throw DomainError("sweep grid must span [0, T]");
    std::vector<double> dw(grid.size());
    const std::size_t n = grid.n_steps();
    for (std::size_t k = 0; k <= n; ++k) {
        // antisymmetric about T/2 bit for bit
        if (2 * k == n) {
            dw[k] = 0.0;
        } else if (2 * k > n) {
            dw[k] = -dw[n - k];
        } else {
            dw[k] = spec.delta_omega0 * std::cos(pi * static_cast<double>(k) / static_cast<double>(n));
        }
    }
    return DriveSchedule::make(grid, std::move(dw));
}

ReferenceTrajectory solve_reference(const CosineSweepSpec& spec, const TwoLevelState& initial, std::size_t n_steps) {
    if (n_steps == 0) n_steps = default_n_steps(spec.duration);
    TimeGrid grid(0.0, spec.duration, n_steps);
    return integrate_schrodinger(build_cosine_sweep(spec, grid), initial);
}

}  // namespace ffst
