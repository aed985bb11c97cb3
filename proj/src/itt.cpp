#include "ffst/itt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ffst/errors.hpp"

namespace ffst {

namespace {

constexpr double endpoint_tolerance = 0.05;

using Scts = std::vector<SpeedControlledTrajectory>;

double mean_abs_phase(const SpeedControlledTrajectory& s, std::size_t lo, std::size_t hi) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = std::max(lo, s.first); k <= std::min(hi, s.last); ++k) {
        if (!s.valid[k]) continue;
        sum += std::abs(wrap_phase(s.f2[k]));
        ++cnt;
    }
    return cnt ? sum / static_cast<double>(cnt) : std::numeric_limits<double>::infinity();
}

// stretch after a gap over which a candidate branch is judged
std::size_t stretch_end(const std::vector<Gap>& gaps, std::size_t gi, std::size_t n) {
    return gi + 1 < gaps.size() ? gaps[gi + 1].first : n - 1;
}

std::size_t pick(const Scts& scts, const std::vector<std::size_t>& cand, std::size_t lo, std::size_t hi) {
    std::size_t best = cand.front();
    double bv = std::numeric_limits<double>::infinity();
    for (auto c : cand) {
        double m = mean_abs_phase(scts[c], lo, hi);
        if (m < bv) {
            bv = m;
            best = c;
        }
    }
    return best;
}

std::vector<std::size_t> starting_candidates(const Scts& scts, const std::string* label) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < scts.size(); ++i)
        if (scts[i].valid_at(0) && (!label || scts[i].branch_id == *label)) cand.push_back(i);
    return cand;
}

std::vector<std::size_t> crossing_candidates(const Scts& scts, const Gap& g, std::size_t current,
                                             const std::string* label) {
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < scts.size(); ++i) {
        if (label && scts[i].branch_id != *label) continue;
        const auto& s = scts[i];
        if (g.kind == Gap::Kind::vertical) {
            if (s.first == g.last + 1) cand.push_back(i);
        } else if (i != current && s.valid_at(g.first) && s.valid_at(g.last)) {
            cand.push_back(i);
        }
    }
    return cand;
}

std::vector<std::size_t> resolve_legs(const Scts& scts, const std::vector<Gap>& gaps, const CrossingPlan& plan) {
    const std::size_t n = scts.empty() ? 0 : scts.front().grid.size();
    auto c0 = starting_candidates(scts, &plan.start);
    if (c0.empty()) throw ConstructionError("no branch labelled " + plan.start + " starts at t = 0");
    std::size_t end0 = gaps.empty() ? n - 1 : gaps.front().first;
    std::vector<std::size_t> legs{pick(scts, c0, 0, end0)};
    std::size_t prev_gap = 0;
    for (std::size_t j = 0; j < plan.crossings.size(); ++j) {
        const auto& c = plan.crossings[j];
        if (c.gap >= gaps.size()) {
            std::ostringstream os;
            os << "crossing plan '" << plan.name << "' references gap " << c.gap << " but only " << gaps.size()
               << " gaps were detected";
            throw ConstructionError(os.str());
        }
        if (j > 0 && c.gap <= prev_gap) throw ConstructionError("crossing plan gaps must increase");
        prev_gap = c.gap;
        const Gap& g = gaps[c.gap];
        if (!scts[legs.back()].valid_at(g.bridge_lo()))
            throw ConstructionError("branch " + scts[legs.back()].branch_id + " does not reach gap " +
                                    std::to_string(c.gap));
        auto cand = crossing_candidates(scts, g, legs.back(), &c.to);
        if (cand.empty())
            throw ConstructionError("no branch " + c.to + " continues past gap " + std::to_string(c.gap));
        legs.push_back(pick(scts, cand, g.bridge_hi(), stretch_end(gaps, c.gap, n)));
    }
    if (!scts[legs.back()].valid_at(n - 1))
        throw ConstructionError("crossing plan '" + plan.name + "' ends on a branch that does not reach T_F");
    return legs;
}

BridgeParams clamp_params(BridgeParams p, const Gap& g, const TimeGrid& grid, const BridgeBounds& b) {
    const double TF = grid.t_end();
    p.width = std::clamp(p.width, b.min_width * TF, b.max_width * TF);
    double lo = std::max(grid.t0(), grid.time(g.bridge_lo()) - b.center_slack * TF);
    double hi = std::min(TF, grid.time(g.bridge_hi()) + b.center_slack * TF);
    p.center = std::clamp(p.center, lo, hi);
    p.amplitude = std::clamp(p.amplitude, -b.max_amplitude, b.max_amplitude);
    return p;
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct Window {
    std::size_t lo, hi;
};

std::vector<Window> layout(const Scts& scts, const std::vector<Gap>& gaps, const CrossingPlan& plan,
                           const std::vector<std::size_t>& legs, const std::vector<BridgeParams>& params,
                           const BridgeBounds& b, const TimeGrid& grid) {
    const std::size_t m = plan.crossings.size();
    const double h = grid.h();
    const auto last_index = static_cast<double>(grid.n_steps());
    auto to_index = [&](double t) { return std::clamp((t - grid.t0()) / h, 0.0, last_index); };
    std::vector<Window> w(m);
    std::size_t lower = scts[legs[0]].first;
    for (std::size_t j = 0; j < m; ++j) {
        const Gap& g = gaps[plan.crossings[j].gap];
        const auto& out = scts[legs[j + 1]];
        std::size_t upper = out.last;
        if (j + 1 < m) upper = std::min(upper, gaps[plan.crossings[j + 1].gap].bridge_lo());
        lower = std::max(lower, scts[legs[j]].first);
        std::size_t lo, hi;
        if (plan.crossings[j].support == Support::span) {
            lo = lower;
            hi = upper;
        } else {
            const auto& p = params[j];
            auto a = static_cast<std::size_t>(std::floor(to_index(p.center - b.support_widths * p.width)));
            auto z = static_cast<std::size_t>(std::ceil(to_index(p.center + b.support_widths * p.width)));
            lo = std::max(lower, std::min(a, g.bridge_lo()));
            hi = std::min(upper, std::max(z, g.bridge_hi()));
        }
        if (lo >= hi || lo > g.bridge_lo() || hi < g.bridge_hi())
            throw ConstructionError("no room for bridge over gap " + std::to_string(plan.crossings[j].gap));
        w[j] = {lo, hi};
        lower = hi;
    }
    return w;
}

}  // namespace

std::vector<double> VirtualTrajectory::canonical() const {
    std::vector<double> c(f2.size());
    for (std::size_t k = 0; k < f2.size(); ++k) c[k] = wrap_phase(f2[k]);
    c.front() = 0.0;
    c.back() = 0.0;
    return c;
}

std::vector<Gap> detect_gaps(const RootScan& scan, const Scts& scts, double link_threshold) {
    const auto& grid = scan.field.grid;
    const std::size_t n = grid.size();
    std::vector<Gap> gaps;
    auto rootless = [&](std::size_t k) {
        auto s = scan.roots[k].status;
        return s == RootStatus::none || s == RootStatus::singular;
    };

    for (std::size_t k = 0; k < n;) {
        if (!rootless(k)) {
            ++k;
            continue;
        }
        Gap g;
        g.kind = Gap::Kind::vertical;
        g.first = k;
        while (k < n && rootless(k)) ++k;
        g.last = k - 1;
        g.t_start = grid.time(g.first);
        g.t_end = grid.time(g.last);
        for (const auto& s : scts) {
            if (g.first > 0 && s.last == g.first - 1) g.before.push_back(wrap_phase(s.f2[s.last]));
            if (s.first == g.last + 1) g.after.push_back(wrap_phase(s.f2[s.first]));
        }
        gaps.push_back(std::move(g));
    }

    const auto& f = scan.field;
    for (std::size_t k = 1; k + 2 < n; ++k) {
        if (scan.roots[k].status != RootStatus::two || scan.roots[k + 1].status != RootStatus::two) continue;
        double a = f.c2[k], b = f.c2[k + 1];
        if (!(a * b < 0.0 || (b == 0.0 && a != 0.0))) continue;
        double u = a / (a - b);
        double c0 = f.c0[k] + u * (f.c0[k + 1] - f.c0[k]);
        double c1 = f.c1[k] + u * (f.c1[k + 1] - f.c1[k]);
        if (std::abs(c1) < 1e-12) continue;
        double y = std::clamp(-c0 / c1, -1.0, 1.0);
        double split = 2.0 * std::acos(std::abs(y));
        if (split <= degeneracy_tolerance) continue;
        std::size_t ks = u < 0.5 ? k : k + 1;
        std::vector<const SpeedControlledTrajectory*> pair;
        for (const auto& s : scts)
            if (s.valid_at(ks)) pair.push_back(&s);
        if (pair.size() != 2) continue;
        auto sep = [&](std::size_t j) { return std::abs(wrap_phase(pair[0]->f2[j] - pair[1]->f2[j])); };
        double limit = sep(ks) + link_threshold;
        std::size_t lo = ks, hi = ks;
        while (lo > 0 && pair[0]->valid_at(lo - 1) && pair[1]->valid_at(lo - 1) && sep(lo - 1) < limit) --lo;
        while (hi + 1 < n && pair[0]->valid_at(hi + 1) && pair[1]->valid_at(hi + 1) && sep(hi + 1) < limit) ++hi;
        Gap g;
        g.kind = Gap::Kind::horizontal;
        g.first = lo;
        g.last = hi;
        g.t_start = grid.time(lo);
        g.t_end = grid.time(hi);
        for (auto* s : pair) {
            g.before.push_back(wrap_phase(s->f2[lo]));
            g.after.push_back(wrap_phase(s->f2[hi]));
        }
        gaps.push_back(std::move(g));
    }
    std::stable_sort(gaps.begin(), gaps.end(), [](const Gap& x, const Gap& y) { return x.first < y.first; });
    return gaps;
}

CrossingPlan auto_plan(const Scts& scts, const std::vector<Gap>& gaps, Support support) {
    CrossingPlan plan;
    plan.name = "auto";
    if (scts.empty()) throw ConstructionError("no speed-controlled trajectories");
    const std::size_t n = scts.front().grid.size();
    auto c0 = starting_candidates(scts, nullptr);
    if (c0.empty()) throw ConstructionError("no branch starts at t = 0");
    std::size_t cur = pick(scts, c0, 0, gaps.empty() ? n - 1 : gaps.front().first);
    plan.start = scts[cur].branch_id;
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
        const Gap& g = gaps[gi];
        if (!scts[cur].valid_at(g.bridge_lo())) break;
        auto cand = crossing_candidates(scts, g, cur, nullptr);
        if (g.kind == Gap::Kind::horizontal) cand.push_back(cur);
        if (cand.empty()) break;
        std::size_t next = pick(scts, cand, g.bridge_hi(), stretch_end(gaps, gi, n));
        if (next == cur) continue;
        plan.crossings.push_back({gi, scts[next].branch_id, support});
        cur = next;
    }
    return plan;
}

std::vector<BridgeParams> initial_bridge_params(const Scts& scts, const std::vector<Gap>& gaps,
                                                const CrossingPlan& plan, const BridgeBounds& bounds) {
    auto legs = resolve_legs(scts, gaps, plan);
    const auto& grid = scts.front().grid;
    std::vector<BridgeParams> p(plan.crossings.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Gap& g = gaps[plan.crossings[j].gap];
        p[j].center = 0.5 * (grid.time(g.bridge_lo()) + grid.time(g.bridge_hi()));
        p[j].width = 0.5 * (grid.time(g.bridge_hi()) - grid.time(g.bridge_lo()));
        p[j].amplitude = 0.0;
        p[j] = clamp_params(p[j], g, grid, bounds);
    }
    // amplitude: lift of the gap-edge phases above the bare connector at the center
    auto bare = build_virtual_trajectory(scts, gaps, plan, p, bounds);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Gap& g = gaps[plan.crossings[j].gap];
        double in = scts[legs[j]].f2[g.bridge_lo()];
        double out = scts[legs[j + 1]].f2[g.bridge_hi()];
        out = in + wrap_phase(out - in);
        auto kc = static_cast<std::size_t>(std::lround((p[j].center - grid.t0()) / grid.h()));
        p[j].amplitude = wrap_phase(0.5 * (in + out) - bare.f2[kc]);
        p[j] = clamp_params(p[j], g, grid, bounds);
    }
    return p;
}

VirtualTrajectory build_virtual_trajectory(const Scts& scts, const std::vector<Gap>& gaps, const CrossingPlan& plan,
                                           const std::vector<BridgeParams>& params, const BridgeBounds& bounds) {
    if (scts.empty()) throw ConstructionError("no speed-controlled trajectories");
    if (params.size() != plan.crossings.size())
        throw ConstructionError("bridge count must equal the crossing plan length");
    const auto& grid = scts.front().grid;
    const std::size_t n = grid.size();
    auto legs = resolve_legs(scts, gaps, plan);
    std::vector<BridgeParams> p(params.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = clamp_params(params[j], gaps[plan.crossings[j].gap], grid, bounds);
    auto win = layout(scts, gaps, plan, legs, p, bounds, grid);

    VirtualTrajectory vt;
    vt.grid = grid;
    vt.f2.assign(n, 0.0);
    vt.bridge_params = p;

    const auto& l0 = scts[legs[0]];
    double offset = -two_pi * std::round(l0.f2[0] / two_pi);
    std::size_t k = 0;
    for (std::size_t j = 0; j <= p.size(); ++j) {
        const auto& leg = scts[legs[j]];
        std::size_t stop = j < p.size() ? win[j].lo : n - 1;
        double seg_start = grid.time(k);
        for (; k <= stop; ++k) vt.f2[k] = leg.f2[k] + offset;
        vt.segments.push_back({seg_start, grid.time(stop), leg.branch_id});
        if (j == p.size()) break;

        const auto& out = scts[legs[j + 1]];
        const auto [lo, hi] = win[j];
        double fL = vt.f2[lo];
        double raw = out.f2[hi];
        // sheet of the outgoing branch fixed at the gap edges, not at the window edges
        const Gap& g = gaps[plan.crossings[j].gap];
        double edge_in = leg.f2[g.bridge_lo()] + offset;
        double fR = raw + two_pi * std::round((edge_in - out.f2[g.bridge_hi()]) / two_pi);
        const auto& bp = p[j];
        double tL = grid.time(lo), tR = grid.time(hi);
        double zL = norm_cdf((tL - bp.center) / bp.width), zR = norm_cdf((tR - bp.center) / bp.width);
        double den = zR - zL;
        auto gauss = [&](double t) { return std::exp(-0.5 * std::pow((t - bp.center) / bp.width, 2)); };
        double gedge = std::max(gauss(tL), gauss(tR));
        for (k = lo + 1; k < hi; ++k) {
            double t = grid.time(k);
            double s = den > 1e-300 ? (norm_cdf((t - bp.center) / bp.width) - zL) / den : (t - tL) / (tR - tL);
            double bump = gedge < 1.0 - 1e-12 ? std::max(0.0, gauss(t) - gedge) / (1.0 - gedge) : 0.0;
            vt.f2[k] = fL + (fR - fL) * s + bp.amplitude * bump;
        }
        vt.segments.push_back({tL, tR, "bridge-" + std::to_string(j)});
        offset = fR - raw;
        k = hi;
    }
    vt.windows.reserve(win.size());
    for (auto w : win) vt.windows.emplace_back(w.lo, w.hi);

    if (std::abs(wrap_phase(vt.f2.front())) > endpoint_tolerance)
        throw ConstructionError("virtual trajectory does not start at f2 = 0");
    if (std::abs(wrap_phase(vt.f2.back())) > endpoint_tolerance)
        throw ConstructionError("crossing plan '" + plan.name + "' does not reach f2(T_F) = 0");
    vt.f2.front() = 0.0;
    vt.f2.back() = two_pi * std::round(vt.f2.back() / two_pi);
    return vt;
}

IttCostReport itt_cost(const VirtualTrajectory& vt, const ResidualField& residual) {
    if (!(vt.grid == residual.grid)) throw DomainError("path and residual grids differ");
    const std::size_t n = vt.f2.size();
    std::vector<double> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = std::abs(residual.value(k, vt.f2[k]));
    IttCostReport r;
    const double h = vt.grid.h();
    r.integrated_residual = trapezoid(a, h);
    for (auto [lo, hi] : vt.windows)
        r.per_gap_residual.push_back(trapezoid(std::span<const double>(a).subspan(lo, hi - lo + 1), h));
    r.evaluations = 1;
    return r;
}

IttResult optimize_virtual_trajectory(const Scts& scts, const std::vector<Gap>& gaps, const CrossingPlan& plan,
                                      const ResidualField& residual, const BridgeBounds& bounds,
                                      std::optional<std::vector<BridgeParams>> init,
                                      const NelderMeadOptions& options) {
    auto p0 = init ? *init : initial_bridge_params(scts, gaps, plan, bounds);
    if (p0.size() != plan.crossings.size()) throw ConstructionError("bridge count must equal the crossing plan length");
    const auto& grid = scts.front().grid;
    const double TF = grid.t_end();

    std::vector<double> x0, steps;
    for (std::size_t j = 0; j < p0.size(); ++j) {
        const Gap& g = gaps[plan.crossings[j].gap];
        double len = grid.time(g.bridge_hi()) - grid.time(g.bridge_lo());
        x0.insert(x0.end(), {p0[j].center, p0[j].width, p0[j].amplitude});
        steps.insert(steps.end(), {0.25 * std::max(len, 0.02 * TF), 0.5 * p0[j].width, 0.5});
    }
    auto unpack = [&](std::span<const double> x) {
        std::vector<BridgeParams> p(x.size() / 3);
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = {x[3 * j], x[3 * j + 1], x[3 * j + 2]};
        return p;
    };
    auto cost = [&](std::span<const double> x) {
        auto vt = build_virtual_trajectory(scts, gaps, plan, unpack(x), bounds);
        double c = itt_cost(vt, residual).integrated_residual;
        if (!std::isfinite(c)) {
            std::ostringstream os;
            os << "non-finite cost at parameters";
            for (double v : x) os << ' ' << v;
            throw OptimizerError(os.str());
        }
        return c;
    };

    IttResult res;
    res.initial_cost = cost(x0);
    auto nm = nelder_mead(cost, x0, steps, options);
    res.vt = build_virtual_trajectory(scts, gaps, plan, unpack(nm.x), bounds);
    res.report = itt_cost(res.vt, residual);
    res.report.evaluations = nm.evaluations + 1;
    res.iterations = nm.iterations;
    res.converged = nm.converged;
    res.best_history = std::move(nm.best_history);
    return res;
}

}  // namespace ffst
