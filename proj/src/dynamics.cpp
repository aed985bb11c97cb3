#include "ffst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

namespace {

constexpr cplx I{0.0, 1.0};

struct Ham {
    double d1, d2, c;
};

inline void rhs(const Ham& H, cplx a, cplx b, cplx& da, cplx& db) {
    da = -I * (H.d1 * a + H.c * b);
    db = -I * (H.c * a + H.d2 * b);
}

inline void rk4_step(const Ham& h0, const Ham& hm, const Ham& h1, double h, cplx& a, cplx& b) {
    cplx ka1, kb1, ka2, kb2, ka3, kb3, ka4, kb4;
    rhs(h0, a, b, ka1, kb1);
    rhs(hm, a + 0.5 * h * ka1, b + 0.5 * h * kb1, ka2, kb2);
    rhs(hm, a + 0.5 * h * ka2, b + 0.5 * h * kb2, ka3, kb3);
    rhs(h1, a + h * ka3, b + h * kb3, ka4, kb4);
    a += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
    b += h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
}

void check_finite(std::span<const double> v, const char* what) {
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(v[k])) throw IntegrationError(std::string("non-finite ") + what + " sample", k);
}

void check_normalized(const TwoLevelState& s) {
    if (!std::isfinite(s.norm_squared()) || std::abs(s.norm_squared() - 1.0) > 1e-9)
        throw DomainError("state not normalized");
}

}  // namespace

TwoLevelState TwoLevelState::normalized() const {
    double n = std::sqrt(norm_squared());
    return {phi1 / n, phi2 / n};
}

TwoLevelState make_state(cplx phi1, cplx phi2) {
    TwoLevelState s{phi1, phi2};
    check_normalized(s);
    return s;
}

TimeGrid::TimeGrid(double t0, double t_end, std::size_t n_steps) : t0_(t0), t_end_(t_end), n_(n_steps) {
    if (n_steps == 0) throw DomainError("time grid needs at least one step");
    if (!std::isfinite(t0) || !std::isfinite(t_end) || !(t_end > t0))
        throw DomainError("time grid needs t_end > t0");
}

double TimeGrid::time(std::size_t k) const {
    if (k >= n_) return k == n_ ? t_end_ : t0_ + h() * static_cast<double>(k);
    return t0_ + h() * static_cast<double>(k);
}

DriveSchedule DriveSchedule::make(TimeGrid grid, std::vector<double> delta_omega, std::vector<double> coupling) {
    if (coupling.empty()) coupling.assign(grid.size(), 1.0);
    DriveSchedule d{grid, std::move(delta_omega), std::move(coupling)};
    d.validate();
    return d;
}

void DriveSchedule::validate() const {
    if (delta_omega.size() != grid.size() || coupling.size() != grid.size())
        throw DomainError("drive sample count must equal n_steps + 1");
    check_finite(delta_omega, "detuning");
    check_finite(coupling, "coupling");
}

double DriveSchedule::delta_omega_at(double t) const {
    return interpolate_uniform(delta_omega, grid.t0(), grid.h(), t);
}

double DriveSchedule::coupling_at(double t) const {
    return interpolate_uniform(coupling, grid.t0(), grid.h(), t);
}

std::vector<TwoLevelState> integrate_hamiltonian(const TimeGrid& grid, std::span<const double> d1,
                                                 std::span<const double> d2, std::span<const double> c,
                                                 const TwoLevelState& initial) {
    const std::size_t n = grid.size();
    if (d1.size() != n || d2.size() != n || c.size() != n)
        throw DomainError("hamiltonian sample count must equal n_steps + 1");
    check_finite(d1, "diagonal");
    check_finite(d2, "diagonal");
    check_finite(c, "coupling");
    check_normalized(initial);

    const double h = grid.h();
    std::vector<TwoLevelState> out(n);
    out[0] = initial;
    cplx a = initial.phi1, b = initial.phi2;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Ham h0{d1[k], d2[k], c[k]};
        Ham hm{midpoint_value(d1, k), midpoint_value(d2, k), midpoint_value(c, k)};
        Ham h1{d1[k + 1], d2[k + 1], c[k + 1]};
        rk4_step(h0, hm, h1, h, a, b);
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) ||
            !std::isfinite(b.imag()))
            throw IntegrationError("non-finite state", k + 1);
        out[k + 1] = {a, b};
    }
    return out;
}

ReferenceTrajectory integrate_schrodinger(const DriveSchedule& drive, const TwoLevelState& initial) {
    drive.validate();
    std::vector<double> zero(drive.grid.size(), 0.0);
    ReferenceTrajectory tr{drive.grid, {}, drive, 0.0};
    tr.states = integrate_hamiltonian(drive.grid, drive.delta_omega, zero, drive.coupling, initial);
    for (const auto& s : tr.states) tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(s.norm_squared() - 1.0));
    return tr;
}

TwoLevelState evolve_backward(const DriveSchedule& drive, const TwoLevelState& at_end) {
    drive.validate();
    check_normalized(at_end);
    const auto& dw = drive.delta_omega;
    const auto& g = drive.coupling;
    const double h = drive.grid.h();
    cplx a = at_end.phi1, b = at_end.phi2;
    for (std::size_t k = drive.grid.n_steps(); k > 0; --k) {
        Ham h0{dw[k], 0.0, g[k]};
        Ham hm{midpoint_value(dw, k - 1), 0.0, midpoint_value(g, k - 1)};
        Ham h1{dw[k - 1], 0.0, g[k - 1]};
        rk4_step(h0, hm, h1, -h, a, b);
    }
    return {a, b};
}

cplx overlap(const TwoLevelState& a, const TwoLevelState& b) {
    return std::conj(a.phi1) * b.phi1 + std::conj(a.phi2) * b.phi2;
}

double fidelity(const TwoLevelState& a, const TwoLevelState& b) { return std::abs(overlap(a, b)); }

TwoLevelState state_at(const ReferenceTrajectory& traj, double t) {
    const auto& grid = traj.grid;
    if (!grid.contains(t)) throw DomainError("state_at: t outside grid");
    const double h = grid.h();
    double u = (t - grid.t0()) / h;
    auto k = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(grid.n_steps() - 1)));
    double s = u - static_cast<double>(k);
    if (s <= 0.0) return traj.states[k];
    if (s >= 1.0) return traj.states[k + 1];

    auto slope = [&](std::size_t j, cplx& da, cplx& db) {
        Ham H{traj.drive.delta_omega[j], 0.0, traj.drive.coupling[j]};
        rhs(H, traj.states[j].phi1, traj.states[j].phi2, da, db);
    };
    cplx da0, db0, da1, db1;
    slope(k, da0, db0);
    slope(k + 1, da1, db1);
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const auto& y0 = traj.states[k];
    const auto& y1 = traj.states[k + 1];
    TwoLevelState r{h00 * y0.phi1 + h10 * h * da0 + h01 * y1.phi1 + h11 * h * da1,
                    h00 * y0.phi2 + h10 * h * db0 + h01 * y1.phi2 + h11 * h * db1};
    return r.normalized();
}

}  // namespace ffst
