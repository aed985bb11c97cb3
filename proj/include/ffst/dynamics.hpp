#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ffst {

using cplx = std::complex<double>;

// amplitudes on |1> = |10>, |2> = |01>
struct TwoLevelState {
    cplx phi1{1.0, 0.0};
    cplx phi2{0.0, 0.0};

    double norm_squared() const { return std::norm(phi1) + std::norm(phi2); }
    double population1() const { return std::norm(phi1); }
    double population2() const { return std::norm(phi2); }
    TwoLevelState normalized() const;
};

// throws DomainError unless normalized within 1e-9
TwoLevelState make_state(cplx phi1, cplx phi2);

class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double t0, double t_end, std::size_t n_steps);

    double t0() const { return t0_; }
    double t_end() const { return t_end_; }
    std::size_t n_steps() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    double h() const { return (t_end_ - t0_) / static_cast<double>(n_); }
    double time(std::size_t k) const;
    bool contains(double t) const { return t >= t0_ && t <= t_end_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_ = 0.0;
    double t_end_ = 1.0;
    std::size_t n_ = 1;
};

struct DriveSchedule {
    TimeGrid grid;
    std::vector<double> delta_omega;
    std::vector<double> coupling;

    // coupling defaults to g = 1
    static DriveSchedule make(TimeGrid grid, std::vector<double> delta_omega,
                              std::vector<double> coupling = {});
    void validate() const;
    double delta_omega_at(double t) const;
    double coupling_at(double t) const;
};

struct ReferenceTrajectory {
    TimeGrid grid;
    std::vector<TwoLevelState> states;
    DriveSchedule drive;
    double max_norm_drift = 0.0;

    const TwoLevelState& final_state() const { return states.back(); }
};

// H = [[d1, c], [c, d2]]; drives sampled on grid, midpoints by cubic interpolation
std::vector<TwoLevelState> integrate_hamiltonian(const TimeGrid& grid, std::span<const double> d1,
                                                 std::span<const double> d2,
                                                 std::span<const double> c,
                                                 const TwoLevelState& initial);

// rotating frame with omega2 absorbed: H = [[dw, g], [g, 0]]
ReferenceTrajectory integrate_schrodinger(const DriveSchedule& drive, const TwoLevelState& initial);

// steps the same drive from t_end back to t0
TwoLevelState evolve_backward(const DriveSchedule& drive, const TwoLevelState& at_end);

cplx overlap(const TwoLevelState& a, const TwoLevelState& b);
double fidelity(const TwoLevelState& a, const TwoLevelState& b);

// cubic Hermite with Schrodinger-equation slopes, renormalized
TwoLevelState state_at(const ReferenceTrajectory& traj, double t);

}  // namespace ffst
