#include "ffst/sta.hpp"

#include <cmath>

#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

namespace {

struct Local {
    double phi1, phi2, dphi1, energy;
};

Local local(double dw, double ddw, Branch b, double g) {
    double th = mixing_angle(dw, g);
    double dth = -g * ddw / (dw * dw + 4 * g * g);
    auto e = eigenpair(dw, b, g);
    double d = b == Branch::upper ? -std::sin(th) * dth : std::cos(th) * dth;
    return {e.phi1, e.phi2, d, e.energy};
}

std::pair<double, double> sweep_at(const AdiabaticSweep& s, double t) {
    if (!s.grid.contains(t)) throw DomainError("sweep time outside grid");
    if (s.spec) {
        double w = pi / s.spec->duration;
        return {s.spec->delta_omega0 * std::cos(w * t), -s.spec->delta_omega0 * w * std::sin(w * t)};
    }
    return {interpolate_uniform(s.delta_omega, s.grid.t0(), s.grid.h(), t),
            interpolate_uniform(s.d_delta_omega, s.grid.t0(), s.grid.h(), t)};
}

void fill(AdiabaticSweep& s) {
    const std::size_t n = s.grid.size();
    s.phi1.resize(n);
    s.phi2.resize(n);
    s.dphi1.resize(n);
    s.energy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto l = local(s.delta_omega[k], s.d_delta_omega[k], s.branch, s.g);
        s.phi1[k] = l.phi1;
        s.phi2[k] = l.phi2;
        s.dphi1[k] = l.dphi1;
        s.energy[k] = l.energy;
    }
}

}  // namespace

double mixing_angle(double delta_omega, double g) { return 0.5 * std::atan2(2 * g, delta_omega); }

EigenPair eigenpair(double delta_omega, Branch branch, double g) {
    double th = mixing_angle(delta_omega, g);
    double mid = 0.5 * delta_omega, split = std::hypot(0.5 * delta_omega, g);
    if (branch == Branch::upper) return {mid + split, std::cos(th), std::sin(th)};
    return {mid - split, std::sin(th), -std::cos(th)};
}

AdiabaticSweep AdiabaticSweep::cosine(const CosineSweepSpec& spec, const TimeGrid& grid, Branch branch) {
    AdiabaticSweep s;
    s.grid = grid;
    s.branch = branch;
    s.spec = spec;
    s.delta_omega = build_cosine_sweep(spec, grid).delta_omega;
    s.d_delta_omega.resize(grid.size());
    double w = pi / spec.duration;
    for (std::size_t k = 0; k < grid.size(); ++k)
        s.d_delta_omega[k] = -spec.delta_omega0 * w * std::sin(w * grid.time(k));
    fill(s);
    return s;
}

AdiabaticSweep AdiabaticSweep::from_samples(const TimeGrid& grid, std::vector<double> delta_omega,
                                            std::vector<double> d_delta_omega, Branch branch) {
    if (delta_omega.size() != grid.size() || d_delta_omega.size() != grid.size())
        throw DomainError("sweep sample count must equal n_steps + 1");
    AdiabaticSweep s;
    s.grid = grid;
    s.branch = branch;
    s.delta_omega = std::move(delta_omega);
    s.d_delta_omega = std::move(d_delta_omega);
    fill(s);
    return s;
}

AdiabaticTarget adiabatic_target(const AdiabaticSweep& sweep) {
    AdiabaticTarget t;
    t.phase_integral = trapezoid(sweep.energy, sweep.grid.h());
    cplx ph = std::exp(cplx(0.0, -t.phase_integral));
    t.state = {sweep.phi1.back() * ph, sweep.phi2.back() * ph};
    return t;
}

double beta_sta(double t, double f2, const AdiabaticSweep& sweep) {
    auto [dw, ddw] = sweep_at(sweep, t);
    auto l = local(dw, ddw, sweep.branch, sweep.g);
    return l.dphi1 - sweep.g * l.phi2 * std::sin(f2);
}

PhaseRoots solve_sta_phase(double t, const AdiabaticSweep& sweep) {
    auto [dw, ddw] = sweep_at(sweep, t);
    auto l = local(dw, ddw, sweep.branch, sweep.g);
    PhaseRoots p;
    if (std::abs(l.phi2) < 1e-12) {
        p.status = std::abs(l.dphi1) > 1e-12 ? RootStatus::singular : RootStatus::degenerate;
        return p;
    }
    double s = l.dphi1 / (sweep.g * l.phi2);
    if (std::abs(s) > 1.0 + 1e-12) return p;
    if (std::abs(s) >= 1.0 - 1e-12) {
        p.status = RootStatus::one;
        double f = wrap_phase(std::copysign(pi / 2, s));
        p.roots = {f, f};
        return p;
    }
    p.status = RootStatus::two;
    double a = std::asin(s);
    p.roots = {wrap_phase(a), wrap_phase(pi - a)};
    return p;
}

ResidualField sta_residual(const AdiabaticSweep& sweep) {
    ResidualField r;
    r.kind = ResidualField::Kind::sta;
    r.grid = sweep.grid;
    r.c0 = sweep.dphi1;
    r.c1.assign(sweep.grid.size(), 0.0);
    r.c2.resize(sweep.grid.size());
    for (std::size_t k = 0; k < r.c2.size(); ++k) r.c2[k] = -sweep.g * sweep.phi2[k];
    return r;
}

ControlSchedule synthesize_sta_control(const PhasePath& path, const AdiabaticSweep& sweep) {
    const auto& grid = sweep.grid;
    const std::size_t n = grid.size();
    auto f = path_on_grid(path, grid);
    auto df = derivative(f, grid.h());
    std::vector<double> dw(n);
    std::vector<char> singular(n, 0);
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
        double p1 = sweep.phi1[k], p2 = sweep.phi2[k];
        double br = 1.0 - std::cos(f[k]);
        if (std::abs(p1) < singular_amplitude || std::abs(p2) < singular_amplitude) {
            if (std::abs(br) > 1e-4) throw SynthesisError("non-removable singularity in control synthesis", grid.time(k));
            singular[k] = 1;
            any = true;
            continue;
        }
        dw[k] = sweep.delta_omega[k] + sweep.g * br * (p2 / p1 - p1 / p2) + df[k];
    }
    if (any) fill_singular(dw, singular, grid);
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(dw[k])) throw SynthesisError("non-finite control sample", grid.time(k));
    ControlSchedule c;
    c.grid = grid;
    c.derivative = derivative(dw, grid.h());
    c.delta_omega_ff = std::move(dw);
    c.coupling_ff.assign(n, sweep.g);
    c.label = "sta";
    return c;
}

}  // namespace ffst
