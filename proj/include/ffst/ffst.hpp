#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ffst/dynamics.hpp"

namespace ffst {

struct MagnificationProfile {
    TimeGrid grid;
    std::vector<double> alpha;
    std::vector<double> lambda;
    double T = 1.0;
    double T_F = 1.0;

    // lambda by cumulative trapezoid; checks lambda(T_F) = T within 1e-6
    static MagnificationProfile from_alpha(const TimeGrid& grid, std::vector<double> alpha, double T);
    double alpha_at(double t) const;
    double lambda_at(double t) const;
};

// alpha(t) = 1 - (T_F - T)/T_F (1 - cos(2 pi t / T_F))
MagnificationProfile build_magnification(double T, double T_F, const TimeGrid& grid);

// reference quantities pulled back to the control grid through Lambda
struct ScaledReference {
    TimeGrid grid;
    std::vector<double> alpha;
    std::vector<double> lambda;
    std::vector<cplx> phi1;
    std::vector<cplx> phi2;
    std::vector<double> delta_omega;  // reference detuning at Lambda(t)
    std::vector<double> coupling;     // reference coupling at Lambda(t)
};

ScaledReference scale_reference(const ReferenceTrajectory& ref, const MagnificationProfile& prof);

// beta(k, f) = c0[k] + c1[k] cos f + c2[k] sin f on a time grid
struct ResidualField {
    enum class Kind { ffst, sta };
    Kind kind = Kind::ffst;
    TimeGrid grid;
    std::vector<double> c0, c1, c2;

    double value(std::size_t k, double f) const;
};

ResidualField ffst_residual(const ScaledReference& sref);

double beta_ff(double t, double f2, const ReferenceTrajectory& ref, const MagnificationProfile& prof);

enum class RootStatus { none, one, two, degenerate, singular };

// roots in family order: asin branch first, (pi - asin) branch second
struct PhaseRoots {
    RootStatus status = RootStatus::none;
    std::array<double, 2> roots{0.0, 0.0};
    int count() const;
};

// c1 cos f + c2 sin f = -c0, canonical roots in [-pi, pi)
PhaseRoots solve_residual_roots(double c0, double c1, double c2);

PhaseRoots solve_phase_roots(double t, const ReferenceTrajectory& ref, const MagnificationProfile& prof);

struct RootScan {
    ResidualField field;
    std::vector<PhaseRoots> roots;
};

RootScan build_root_scan(const ResidualField& field);

struct BetaMap {
    TimeGrid grid;
    std::vector<double> phases;
    std::vector<double> values;  // row-major, one row per time sample

    double at(std::size_t k, std::size_t j) const { return values[k * phases.size() + j]; }
    // floor 1e-14 before the log
    double ln_abs(std::size_t k, std::size_t j) const;
};

inline constexpr double ln_beta_floor = 1e-14;

BetaMap build_beta_map(const ResidualField& field, std::size_t n_phase, unsigned threads = 1);
BetaMap build_beta_map(const ReferenceTrajectory& ref, const MagnificationProfile& prof, std::size_t n_phase,
                       unsigned threads = 1);

struct SpeedControlledTrajectory {
    TimeGrid grid;
    std::vector<double> f2;  // lifted, NaN where invalid
    std::vector<char> valid;
    std::string branch_id;   // X or Y
    int family = 0;
    std::size_t first = 0, last = 0;

    bool valid_at(std::size_t k) const { return k < valid.size() && valid[k]; }
};

inline constexpr double default_link_threshold = 0.2;

std::vector<SpeedControlledTrajectory> extract_scts(const RootScan& scan,
                                                    double link_threshold = default_link_threshold);

struct ControlSchedule {
    TimeGrid grid;
    std::vector<double> delta_omega_ff;
    std::vector<double> derivative;
    std::vector<double> coupling_ff;
    std::string label;

    DriveSchedule drive() const;
    static ControlSchedule from_drive(const DriveSchedule& d, std::string label);
};

// phase path sampled on some uniform grid; lifted values
struct PhasePath {
    TimeGrid grid;
    std::vector<double> f2;
};

inline constexpr double singular_amplitude = 1e-6;

ControlSchedule synthesize_control(const PhasePath& path, const ScaledReference& sref);
ControlSchedule synthesize_control_tunable(const PhasePath& path, const ScaledReference& sref,
                                           std::span<const double> g_ff);

// comparison arms
ControlSchedule naive_scaled_control(const ScaledReference& sref);
ControlSchedule alpha_scaled_control(const ScaledReference& sref);

// samples with |amplitude| below threshold replaced by a cubic through the four nearest regular ones
void fill_singular(std::vector<double>& v, const std::vector<char>& singular, const TimeGrid& grid);

// resample a path to the control grid (monotone cubic) when grids differ
std::vector<double> path_on_grid(const PhasePath& path, const TimeGrid& grid);

}  // namespace ffst
