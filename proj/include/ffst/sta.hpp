#pragma once

#include <optional>
#include <vector>

#include "ffst/drives.hpp"
#include "ffst/dynamics.hpp"
#include "ffst/ffst.hpp"

namespace ffst {

// upper is adiabatically connected to (1, 0) at large positive detuning
enum class Branch { upper, lower };

struct EigenPair {
    double energy = 0.0;
    double phi1 = 1.0;
    double phi2 = 0.0;
};

// theta = atan2(2g, dw) / 2; upper = (cos, sin), lower = (sin, -cos)
double mixing_angle(double delta_omega, double g = 1.0);
EigenPair eigenpair(double delta_omega, Branch branch, double g = 1.0);

struct AdiabaticSweep {
    TimeGrid grid;
    Branch branch = Branch::upper;
    double g = 1.0;
    std::optional<CosineSweepSpec> spec;
    std::vector<double> delta_omega;
    std::vector<double> d_delta_omega;
    std::vector<double> phi1, phi2, dphi1, energy;

    static AdiabaticSweep cosine(const CosineSweepSpec& spec, const TimeGrid& grid, Branch branch = Branch::upper);
    static AdiabaticSweep from_samples(const TimeGrid& grid, std::vector<double> delta_omega,
                                       std::vector<double> d_delta_omega, Branch branch = Branch::upper);

    TwoLevelState initial_state() const { return {phi1.front(), phi2.front()}; }
    DriveSchedule drive() const { return DriveSchedule::make(grid, delta_omega); }
};

struct AdiabaticTarget {
    TwoLevelState state;
    double phase_integral = 0.0;
};

AdiabaticTarget adiabatic_target(const AdiabaticSweep& sweep);

double beta_sta(double t, double f2, const AdiabaticSweep& sweep);
PhaseRoots solve_sta_phase(double t, const AdiabaticSweep& sweep);
ResidualField sta_residual(const AdiabaticSweep& sweep);

ControlSchedule synthesize_sta_control(const PhasePath& path, const AdiabaticSweep& sweep);

}  // namespace ffst
