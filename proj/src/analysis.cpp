#include "ffst/analysis.hpp"

#include <cmath>
#include <limits>

#include "ffst/drives.hpp"
#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

FidelityReport verify_control(const ControlSchedule& control, const TwoLevelState& initial,
                              const TwoLevelState& target) {
    if (control.grid.t0() != 0.0) throw DomainError("control grid must start at 0");
    FidelityReport r;
    r.run = integrate_schrodinger(control.drive(), initial);
    r.final_state = r.run.final_state();
    r.target_state = target;
    r.fidelity = fidelity(target, r.final_state);
    r.control_label = control.label;
    r.population1.reserve(r.run.states.size());
    r.population2.reserve(r.run.states.size());
    for (const auto& s : r.run.states) {
        r.population1.push_back(s.population1());
        r.population2.push_back(s.population2());
    }
    return r;
}

TrajectoryShiftSeries trajectory_shift_analysis(const ReferenceTrajectory& itt_run,
                                                const SpeedControlledTrajectory& x,
                                                const SpeedControlledTrajectory& y, const ScaledReference& sref,
                                                double hysteresis) {
    if (!(itt_run.grid == sref.grid) || !(x.grid == sref.grid) || !(y.grid == sref.grid))
        throw DomainError("shift analysis needs one common grid");
    const std::size_t n = sref.grid.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    TrajectoryShiftSeries s;
    s.grid = sref.grid;
    s.overlap_x.assign(n, nan);
    s.overlap_y.assign(n, nan);
    s.dominant.assign(n, '-');
    char current = '-';
    auto ov = [&](const SpeedControlledTrajectory& b, std::size_t k) {
        TwoLevelState ff{sref.phi1[k], sref.phi2[k] * std::exp(cplx(0.0, b.f2[k]))};
        return fidelity(ff, itt_run.states[k]);
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (x.valid_at(k)) s.overlap_x[k] = ov(x, k);
        if (y.valid_at(k)) s.overlap_y[k] = ov(y, k);
        if (x.valid_at(k) && y.valid_at(k)) {
            double d = s.overlap_x[k] - s.overlap_y[k];
            char next = current;
            if (d > hysteresis) next = 'X';
            if (d < -hysteresis) next = 'Y';
            if (current != '-' && next != current) s.shift_times.push_back(s.grid.time(k));
            current = next;
        }
        s.dominant[k] = current;
    }
    return s;
}

std::vector<GapDirectionProfile> gap_direction_scan(std::span<const double> T_F_values,
                                                    const ReferenceTrajectory& ref, std::size_t n_steps) {
    std::vector<GapDirectionProfile> out;
    const double T = ref.grid.t_end();
    for (double TF : T_F_values) {
        std::size_t n = n_steps ? n_steps : ref.grid.n_steps();
        TimeGrid grid(0.0, TF, n);
        auto prof = build_magnification(T, TF, grid);
        auto field = ffst_residual(scale_reference(ref, prof));
        auto scan = build_root_scan(field);
        GapDirectionProfile p;
        p.T_F = TF;
        p.root_counts.resize(grid.size());
        p.zero_root_everywhere = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& r = scan.roots[k];
            p.root_counts[k] = r.status == RootStatus::degenerate ? -1 : r.count();
            bool zero = r.status == RootStatus::degenerate;
            for (int i = 0; i < r.count(); ++i) zero = zero || std::abs(wrap_phase(r.roots[i])) < 1e-8;
            p.zero_root_everywhere = p.zero_root_everywhere && zero;
        }
        for (std::size_t k = 0; k < grid.size();) {
            if (p.root_counts[k] != 0) {
                ++k;
                continue;
            }
            std::size_t a = k;
            while (k < grid.size() && p.root_counts[k] == 0) ++k;
            p.zero_root_intervals.emplace_back(grid.time(a), grid.time(k - 1));
        }
        for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
            double a = field.c2[k], b = field.c2[k + 1];
            if (!(a * b < 0.0)) continue;
            std::size_t ks = std::abs(a) <= std::abs(b) ? k : k + 1;
            p.degenerate_times.push_back(grid.time(ks));
            p.counts_at_degenerate.push_back(p.root_counts[ks]);
        }
        bool any_zero = false, any_split = false;
        for (std::size_t i = 0; i < p.counts_at_degenerate.size(); ++i) {
            double t = p.degenerate_times[i];
            double alpha = prof.alpha_at(t);
            if (p.counts_at_degenerate[i] == 0) any_zero = true;
            if (p.counts_at_degenerate[i] == 2 && std::abs(alpha - 1.0) > 1e-9) any_split = true;
        }
        p.opening = any_zero ? GapDirectionProfile::Opening::vertical
                             : (any_split ? GapDirectionProfile::Opening::horizontal : GapDirectionProfile::Opening::none);
        out.push_back(std::move(p));
    }
    return out;
}

double global_phase_check(const ControlSchedule& control, std::span<const double> shift,
                          const TwoLevelState& initial, const TwoLevelState& target) {
    const std::size_t n = control.grid.size();
    if (shift.size() != n) throw DomainError("shift sample count must equal n_steps + 1");
    std::vector<double> zero(n, 0.0), d1(n), d2(n);
    for (std::size_t k = 0; k < n; ++k) {
        d1[k] = control.delta_omega_ff[k] + shift[k];
        d2[k] = shift[k];
    }
    auto a = integrate_hamiltonian(control.grid, control.delta_omega_ff, zero, control.coupling_ff, initial);
    auto b = integrate_hamiltonian(control.grid, d1, d2, control.coupling_ff, initial);
    return std::abs(fidelity(target, a.back()) - fidelity(target, b.back()));
}

}  // namespace ffst
