#pragma once

#include <string>
#include <vector>

#include "ffst/dynamics.hpp"
#include "ffst/ffst.hpp"

namespace ffst::device {

// energies in GHz (E / h)
struct TransmonSpec {
    double ej_max = 30.0;
    double ej_fixed = 27.7;
    double ec = 0.203;
    double ecc = 0.0;
    double d = 0.85;

    bool outside_transmon_regime() const { return ej_max / ec < 20.0 || ej_fixed / ec < 20.0; }
    void validate() const;
};

double transmon_frequency(double ej, double ec);
double coupling_strength(const TransmonSpec& spec);
// E_Cc giving coupling g
double coupling_capacitance_for(double g, const TransmonSpec& spec);

// E_J^max sqrt(cos^2 + d^2 sin^2); same as the tan form, no singularity at 1/2
double squid_ej(double flux_ratio, double ej_max, double d);
double frequency_at_flux(double flux_ratio, const TransmonSpec& spec);

struct Band {
    double lo, hi;
};
Band achievable_band(const TransmonSpec& spec);

// bisection over [0, 1/2]
double flux_for_frequency(double target_ghz, const TransmonSpec& spec);

// one dimensionless time unit 1/g in ns, with g = 2 pi g_ghz rad/ns
double time_unit_ns(double g_ghz);

struct FluxWaveform {
    TimeGrid grid;  // ns
    std::vector<double> flux;
    std::vector<double> omega1_ghz;
    double max_roundtrip_error = 0.0;
};

FluxWaveform flux_schedule_for(const ControlSchedule& control, const TransmonSpec& spec, double omega2_ghz,
                               double g_ghz);

struct PhysicalSchedule {
    TimeGrid grid;                   // ns
    std::vector<double> detuning;    // GHz
    std::vector<double> coupling;    // GHz
};

PhysicalSchedule to_physical(const ControlSchedule& control, double g_ghz);
ControlSchedule from_physical(const PhysicalSchedule& phys, double g_ghz);

struct RwaSchedule {
    TimeGrid grid;
    std::vector<double> detuning;   // Delta(t), units of g
    std::vector<double> rabi;       // Omega, units of g
    double max_abs_detuning = 0.0;
    double anharmonicity = 0.0;     // units of g
    double validity_ratio = 0.0;    // max(|Delta|, Omega) / |anharmonicity|
    bool valid = false;             // ratio below 0.1
};

RwaSchedule rwa_emulation_map(const ControlSchedule& control, double rabi, double anharmonicity);

// H = (Delta/2) sigma_z + Omega sigma_x
TwoLevelState integrate_rwa(const RwaSchedule& s, const TwoLevelState& initial);

}  // namespace ffst::device
