#include "ffst/device.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst::device {

void TransmonSpec::validate() const {
    if (!(ej_max > 0) || !(ej_fixed > 0) || !(ec > 0)) throw DomainError("transmon energies must be positive");
    if (!(d > 0) || d > 1) throw DomainError("junction asymmetry must lie in (0, 1]");
}

double transmon_frequency(double ej, double ec) {
    if (!(ej > 0) || !(ec > 0)) throw DomainError("transmon_frequency needs positive energies");
    return std::sqrt(8.0 * ej * ec) - ec;
}

double coupling_strength(const TransmonSpec& s) {
    return s.ecc / std::sqrt(2.0) * std::pow(s.ej_max * s.ej_fixed / (s.ec * s.ec), 0.25);
}

double coupling_capacitance_for(double g, const TransmonSpec& s) {
    return g * std::sqrt(2.0) / std::pow(s.ej_max * s.ej_fixed / (s.ec * s.ec), 0.25);
}

double squid_ej(double flux_ratio, double ej_max, double d) {
    double x = pi * flux_ratio;
    double c = std::cos(x), s = std::sin(x);
    return ej_max * std::sqrt(c * c + d * d * s * s);
}

double frequency_at_flux(double flux_ratio, const TransmonSpec& spec) {
    return transmon_frequency(squid_ej(flux_ratio, spec.ej_max, spec.d), spec.ec);
}

Band achievable_band(const TransmonSpec& spec) {
    return {transmon_frequency(spec.ej_max * spec.d, spec.ec), transmon_frequency(spec.ej_max, spec.ec)};
}

double flux_for_frequency(double target, const TransmonSpec& spec) {
    auto band = achievable_band(spec);
    if (target < band.lo - 1e-12 || target > band.hi + 1e-12) {
        std::ostringstream os;
        os.precision(10);
        os << "target " << target << " GHz outside band [" << band.lo << ", " << band.hi << "] GHz";
        throw InfeasibleError(os.str());
    }
    double lo = 0.0, hi = 0.5;
    // frequency falls with flux on [0, 1/2]
    while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        if (frequency_at_flux(mid, spec) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double a = frequency_at_flux(lo, spec), b = frequency_at_flux(hi, spec);
    return std::abs(a - target) <= std::abs(b - target) ? lo : hi;
}

double time_unit_ns(double g_ghz) { return 1.0 / (two_pi * g_ghz); }

FluxWaveform flux_schedule_for(const ControlSchedule& control, const TransmonSpec& spec, double omega2,
                               double g_ghz) {
    spec.validate();
    auto band = achievable_band(spec);
    const std::size_t n = control.grid.size();
    std::vector<double> target(n);
    double worst = 0.0;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < n; ++k) {
        target[k] = omega2 + control.delta_omega_ff[k] * g_ghz;
        double excess = std::max(band.lo - target[k], target[k] - band.hi);
        if (excess > worst) {
            worst = excess;
            worst_k = k;
        }
    }
    if (worst > 1e-12) {
        std::ostringstream os;
        os.precision(10);
        os << "flux mapping infeasible: worst sample " << worst_k << " (t = " << control.grid.time(worst_k)
           << ") needs " << target[worst_k] << " GHz, band [" << band.lo << ", " << band.hi << "] GHz";
        throw InfeasibleError(os.str());
    }
    double unit = time_unit_ns(g_ghz);
    FluxWaveform w;
    w.grid = TimeGrid(control.grid.t0() * unit, control.grid.t_end() * unit, control.grid.n_steps());
    w.flux.resize(n);
    w.omega1_ghz = target;
    for (std::size_t k = 0; k < n; ++k) {
        w.flux[k] = flux_for_frequency(std::clamp(target[k], band.lo, band.hi), spec);
        w.max_roundtrip_error = std::max(w.max_roundtrip_error, std::abs(frequency_at_flux(w.flux[k], spec) - target[k]));
    }
    return w;
}

PhysicalSchedule to_physical(const ControlSchedule& c, double g_ghz) {
    double unit = time_unit_ns(g_ghz);
    PhysicalSchedule p;
    p.grid = TimeGrid(c.grid.t0() * unit, c.grid.t_end() * unit, c.grid.n_steps());
    p.detuning.resize(c.delta_omega_ff.size());
    p.coupling.resize(c.coupling_ff.size());
    for (std::size_t k = 0; k < p.detuning.size(); ++k) p.detuning[k] = c.delta_omega_ff[k] * g_ghz;
    for (std::size_t k = 0; k < p.coupling.size(); ++k) p.coupling[k] = c.coupling_ff[k] * g_ghz;
    return p;
}

ControlSchedule from_physical(const PhysicalSchedule& p, double g_ghz) {
    double unit = time_unit_ns(g_ghz);
    ControlSchedule c;
    c.grid = TimeGrid(p.grid.t0() / unit, p.grid.t_end() / unit, p.grid.n_steps());
    c.delta_omega_ff.resize(p.detuning.size());
    c.coupling_ff.resize(p.coupling.size());
    for (std::size_t k = 0; k < p.detuning.size(); ++k) c.delta_omega_ff[k] = p.detuning[k] / g_ghz;
    for (std::size_t k = 0; k < p.coupling.size(); ++k) c.coupling_ff[k] = p.coupling[k] / g_ghz;
    c.derivative = derivative(c.delta_omega_ff, c.grid.h());
    c.label = "physical";
    return c;
}

RwaSchedule rwa_emulation_map(const ControlSchedule& control, double rabi, double anharmonicity) {
    RwaSchedule s;
    s.grid = control.grid;
    s.detuning = control.delta_omega_ff;
    s.rabi.assign(control.grid.size(), rabi);
    for (double d : s.detuning) s.max_abs_detuning = std::max(s.max_abs_detuning, std::abs(d));
    s.anharmonicity = anharmonicity;
    s.validity_ratio = std::max(s.max_abs_detuning, std::abs(rabi)) / std::abs(anharmonicity);
    s.valid = s.validity_ratio < 0.1;
    return s;
}

TwoLevelState integrate_rwa(const RwaSchedule& s, const TwoLevelState& initial) {
    std::vector<double> up(s.detuning.size()), down(s.detuning.size());
    for (std::size_t k = 0; k < up.size(); ++k) {
        up[k] = 0.5 * s.detuning[k];
        down[k] = -0.5 * s.detuning[k];
    }
    return integrate_hamiltonian(s.grid, up, down, s.rabi, initial).back();
}

}  // namespace ffst::device
