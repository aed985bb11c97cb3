#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffst/ffst.hpp"
#include "ffst/nelder_mead.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

struct Gap {
    enum class Kind { vertical, horizontal };
    Kind kind = Kind::vertical;
    std::size_t first = 0, last = 0;  // sample range without a usable continuation
    double t_start = 0.0, t_end = 0.0;
    std::vector<double> before, after;  // adjacent branch phases, canonical

    // samples the incoming / outgoing legs must reach
    std::size_t bridge_lo() const { return kind == Kind::vertical && first > 0 ? first - 1 : first; }
    std::size_t bridge_hi() const { return kind == Kind::vertical ? last + 1 : last; }
};

inline constexpr double degeneracy_tolerance = 1e-6;

// vertical: runs without roots; horizontal: sign changes of the sine coefficient where the
// two branches stay split by more than the degeneracy tolerance
std::vector<Gap> detect_gaps(const RootScan& scan, const std::vector<SpeedControlledTrajectory>& scts,
                             double link_threshold = default_link_threshold);

struct BridgeParams {
    double center = 0.0;
    double width = 0.0;
    double amplitude = 0.0;
};

// local: bump over a window of support_widths widths around the gap; span: window reaches the
// neighbouring anchors
enum class Support { local, span };

struct Crossing {
    std::size_t gap = 0;
    std::string to = "Y";
    Support support = Support::local;
};

struct CrossingPlan {
    std::string name = "auto";
    std::string start = "X";
    std::vector<Crossing> crossings;
};

// fractions of T_F, amplitude in radians
struct BridgeBounds {
    double min_width = 0.005;
    double max_width = 0.25;
    double center_slack = 0.02;
    double max_amplitude = pi;
    double support_widths = 3.0;
};

struct Segment {
    double t_start = 0.0, t_end = 0.0;
    std::string source;
};

struct VirtualTrajectory {
    TimeGrid grid;
    std::vector<double> f2;  // continuous lift
    std::vector<Segment> segments;
    std::vector<BridgeParams> bridge_params;
    std::vector<std::pair<std::size_t, std::size_t>> windows;

    std::vector<double> canonical() const;
    PhasePath path() const { return {grid, f2}; }
};

struct IttCostReport {
    double integrated_residual = 0.0;
    std::vector<double> per_gap_residual;
    std::size_t evaluations = 0;
};

// near-zero policy: at every gap continue on the branch closest to f2 = 0
CrossingPlan auto_plan(const std::vector<SpeedControlledTrajectory>& scts, const std::vector<Gap>& gaps,
                       Support support = Support::local);

std::vector<BridgeParams> initial_bridge_params(const std::vector<SpeedControlledTrajectory>& scts,
                                                const std::vector<Gap>& gaps, const CrossingPlan& plan,
                                                const BridgeBounds& bounds = {});

VirtualTrajectory build_virtual_trajectory(const std::vector<SpeedControlledTrajectory>& scts,
                                           const std::vector<Gap>& gaps, const CrossingPlan& plan,
                                           const std::vector<BridgeParams>& params,
                                           const BridgeBounds& bounds = {});

IttCostReport itt_cost(const VirtualTrajectory& vt, const ResidualField& residual);

struct IttResult {
    VirtualTrajectory vt;
    IttCostReport report;
    double initial_cost = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    std::vector<double> best_history;
};

IttResult optimize_virtual_trajectory(const std::vector<SpeedControlledTrajectory>& scts,
                                      const std::vector<Gap>& gaps, const CrossingPlan& plan,
                                      const ResidualField& residual, const BridgeBounds& bounds = {},
                                      std::optional<std::vector<BridgeParams>> init = std::nullopt,
                                      const NelderMeadOptions& options = {});

}  // namespace ffst
