#include "ffst/ffst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

namespace ffst {

namespace {

constexpr double degenerate_threshold = 1e-12;
constexpr double tangency_tolerance = 1e-12;
// bracket allowed at a removable singular sample
constexpr double removable_bracket_tolerance = 1e-4;

bool grid_spans(const TimeGrid& g, double t_end) {
    return g.t0() == 0.0 && std::abs(g.t_end() - t_end) <= 1e-12 * std::max(1.0, t_end);
}

PhaseRoots roots_from_sine(double x, double shift) {
    PhaseRoots r;
    if (!std::isfinite(x)) return r;
    double ax = std::abs(x);
    if (ax > 1.0 + tangency_tolerance) {
        r.status = RootStatus::none;
    } else if (ax >= 1.0 - tangency_tolerance) {
        r.status = RootStatus::one;
        double f = wrap_phase(std::copysign(pi / 2, x) - shift);
        r.roots = {f, f};
    } else {
        r.status = RootStatus::two;
        double s = std::asin(x);
        r.roots = {wrap_phase(s - shift), wrap_phase(pi - s - shift)};
    }
    return r;
}

}  // namespace

MagnificationProfile MagnificationProfile::from_alpha(const TimeGrid& grid, std::vector<double> alpha, double T) {
    if (alpha.size() != grid.size()) throw DomainError("alpha sample count must equal n_steps + 1");
    if (grid.t0() != 0.0) throw DomainError("profile grid must start at 0");
    MagnificationProfile p;
    p.grid = grid;
    p.lambda = cumulative_trapezoid(alpha, grid.h());
    p.alpha = std::move(alpha);
    p.T = T;
    p.T_F = grid.t_end();
    if (std::abs(p.lambda.back() - T) > 1e-6) throw DomainError("scaled time must end at T");
    return p;
}

double MagnificationProfile::alpha_at(double t) const { return interpolate_uniform(alpha, 0.0, grid.h(), t); }
double MagnificationProfile::lambda_at(double t) const { return interpolate_uniform(lambda, 0.0, grid.h(), t); }

MagnificationProfile build_magnification(double T, double T_F, const TimeGrid& grid) {
    if (!(T > 0) || !(T_F > 0)) throw DomainError("T and T_F must be positive");
    if (!grid_spans(grid, T_F)) throw DomainError("profile grid must span [0, T_F]");
    const double c = (T_F - T) / T_F;
    std::vector<double> a(grid.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = 1.0 - c * (1.0 - std::cos(two_pi * grid.time(k) / T_F));
    return MagnificationProfile::from_alpha(grid, std::move(a), T);
}

ScaledReference scale_reference(const ReferenceTrajectory& ref, const MagnificationProfile& prof) {
    const std::size_t n = prof.grid.size();
    ScaledReference s;
    s.grid = prof.grid;
    s.alpha = prof.alpha;
    s.lambda = prof.lambda;
    s.phi1.resize(n);
    s.phi2.resize(n);
    s.delta_omega.resize(n);
    s.coupling.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double L = std::clamp(prof.lambda[k], ref.grid.t0(), ref.grid.t_end());
        if (k == n - 1) L = ref.grid.t_end();
        auto st = state_at(ref, L);
        s.phi1[k] = st.phi1;
        s.phi2[k] = st.phi2;
        s.delta_omega[k] = ref.drive.delta_omega_at(L);
        s.coupling[k] = ref.drive.coupling_at(L);
    }
    return s;
}

double ResidualField::value(std::size_t k, double f) const {
    return c0[k] + c1[k] * std::cos(f) + c2[k] * std::sin(f);
}

ResidualField ffst_residual(const ScaledReference& sref) {
    const std::size_t n = sref.grid.size();
    ResidualField r;
    r.kind = ResidualField::Kind::ffst;
    r.grid = sref.grid;
    r.c0.resize(n);
    r.c1.resize(n);
    r.c2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx q = std::conj(sref.phi1[k]) * sref.phi2[k];
        double g = sref.coupling[k];
        r.c0[k] = g * sref.alpha[k] * q.imag();
        r.c1[k] = -g * q.imag();
        r.c2[k] = -g * q.real();
    }
    return r;
}

double beta_ff(double t, double f2, const ReferenceTrajectory& ref, const MagnificationProfile& prof) {
    if (t < 0.0 || t > prof.T_F) throw DomainError("beta_ff: t outside [0, T_F]");
    double L = std::clamp(prof.lambda_at(t), ref.grid.t0(), ref.grid.t_end());
    auto st = state_at(ref, L);
    cplx q = std::conj(st.phi1) * st.phi2;
    double g = ref.drive.coupling_at(L);
    return g * (prof.alpha_at(t) * q.imag() - (q * std::exp(cplx(0.0, f2))).imag());
}

int PhaseRoots::count() const {
    switch (status) {
        case RootStatus::two: return 2;
        case RootStatus::one: return 1;
        default: return 0;
    }
}

PhaseRoots solve_residual_roots(double c0, double c1, double c2) {
    double R = std::hypot(c1, c2);
    if (R < degenerate_threshold) {
        PhaseRoots p;
        p.status = std::abs(c0) < degenerate_threshold ? RootStatus::degenerate : RootStatus::singular;
        return p;
    }
    return roots_from_sine(c0 / R, std::atan2(-c1, -c2));
}

PhaseRoots solve_phase_roots(double t, const ReferenceTrajectory& ref, const MagnificationProfile& prof) {
    double L = std::clamp(prof.lambda_at(t), ref.grid.t0(), ref.grid.t_end());
    auto st = state_at(ref, L);
    cplx q = std::conj(st.phi1) * st.phi2;
    double a = q.real(), b = q.imag(), r = std::hypot(a, b);
    if (r < degenerate_threshold) {
        PhaseRoots p;
        p.status = RootStatus::degenerate;
        return p;
    }
    return roots_from_sine(prof.alpha_at(t) * b / r, std::atan2(b, a));
}

RootScan build_root_scan(const ResidualField& field) {
    RootScan s{field, {}};
    s.roots.resize(field.grid.size());
    for (std::size_t k = 0; k < s.roots.size(); ++k)
        s.roots[k] = solve_residual_roots(field.c0[k], field.c1[k], field.c2[k]);
    return s;
}

double BetaMap::ln_abs(std::size_t k, std::size_t j) const {
    return std::log(std::max(std::abs(at(k, j)), ln_beta_floor));
}

BetaMap build_beta_map(const ResidualField& field, std::size_t n_phase, unsigned threads) {
    if (n_phase < 256) throw DomainError("beta map needs at least 256 phase samples");
    BetaMap m;
    m.grid = field.grid;
    m.phases.resize(n_phase);
    for (std::size_t j = 0; j < n_phase; ++j)
        m.phases[j] = -pi + two_pi * static_cast<double>(j) / static_cast<double>(n_phase);
    const std::size_t rows = field.grid.size();
    m.values.resize(rows * n_phase);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            for (std::size_t j = 0; j < n_phase; ++j) m.values[k * n_phase + j] = field.value(k, m.phases[j]);
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        work(0, rows);
    } else {
        std::vector<std::jthread> pool;
        std::size_t chunk = (rows + threads - 1) / threads;
        for (unsigned i = 0; i < threads; ++i) {
            std::size_t lo = i * chunk, hi = std::min(rows, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
    }
    return m;
}

BetaMap build_beta_map(const ReferenceTrajectory& ref, const MagnificationProfile& prof, std::size_t n_phase,
                       unsigned threads) {
    return build_beta_map(ffst_residual(scale_reference(ref, prof)), n_phase, threads);
}

std::vector<SpeedControlledTrajectory> extract_scts(const RootScan& scan, double link_threshold) {
    const auto& grid = scan.field.grid;
    const std::size_t n = grid.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    struct Building {
        std::vector<double> f2;
        std::vector<char> valid;
        std::array<std::size_t, 2> family_votes{0, 0};
        std::size_t first = 0, last = 0, seeded = 0;
        bool open = true;
    };
    std::vector<Building> all;
    std::vector<std::size_t> active;
    std::size_t degenerate_run_start = 0;
    bool in_degenerate_run = false;

    auto start = [&](std::size_t k, double value, int fam) {
        Building b;
        b.f2.assign(n, nan);
        b.valid.assign(n, 0);
        b.first = b.last = b.seeded = k;
        b.f2[k] = value;
        b.valid[k] = 1;
        b.family_votes[fam]++;
        // degenerate samples just before a fresh start admit any phase
        if (in_degenerate_run) {
            for (std::size_t j = degenerate_run_start; j < k; ++j) {
                b.f2[j] = value;
                b.valid[j] = 1;
            }
            b.first = degenerate_run_start;
        }
        all.push_back(std::move(b));
        active.push_back(all.size() - 1);
    };

    for (std::size_t k = 0; k < n; ++k) {
        const auto& pr = scan.roots[k];
        if (pr.status == RootStatus::degenerate) {
            if (active.empty()) {
                if (!in_degenerate_run) degenerate_run_start = k;
                in_degenerate_run = true;
            }
            for (auto i : active) {
                auto& b = all[i];
                b.f2[k] = b.f2[k - 1];
                b.valid[k] = 1;
                b.last = k;
            }
            continue;
        }
        int nroots = pr.count();
        struct Pair {
            double d;
            std::size_t branch;
            int root;
        };
        std::vector<Pair> pairs;
        for (std::size_t a = 0; a < active.size(); ++a) {
            double prev = all[active[a]].f2[k - 1];
            for (int r = 0; r < nroots; ++r) {
                double d = std::abs(wrap_phase(pr.roots[r] - prev));
                if (d < link_threshold) pairs.push_back({d, a, r});
            }
        }
        std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
        std::vector<char> branch_done(active.size(), 0);
        std::array<int, 2> root_claims{0, 0};
        int claim_limit = pr.status == RootStatus::one ? 2 : 1;
        for (const auto& p : pairs) {
            if (branch_done[p.branch] || root_claims[p.root] >= claim_limit) continue;
            auto& b = all[active[p.branch]];
            double prev = b.f2[k - 1];
            b.f2[k] = prev + wrap_phase(pr.roots[p.root] - prev);
            b.valid[k] = 1;
            b.last = k;
            b.family_votes[p.root]++;
            branch_done[p.branch] = 1;
            root_claims[p.root]++;
        }
        std::vector<std::size_t> still;
        for (std::size_t a = 0; a < active.size(); ++a)
            if (branch_done[a]) still.push_back(active[a]);
        active = std::move(still);
        int distinct = pr.status == RootStatus::one ? 1 : nroots;
        for (int r = 0; r < distinct; ++r)
            if (root_claims[r] == 0) start(k, pr.roots[r], r);
        in_degenerate_run = false;
    }

    // a degenerate prefix takes the linear continuation of the branch, not a copy
    for (auto& b : all) {
        std::size_t s = b.seeded;
        if (b.first == s || s + 1 >= n || !b.valid[s + 1] || scan.roots[s + 1].status == RootStatus::degenerate) continue;
        double slope = b.f2[s + 1] - b.f2[s];
        for (std::size_t j = b.first; j < s; ++j) b.f2[j] = b.f2[s] - slope * static_cast<double>(s - j);
    }

    std::vector<SpeedControlledTrajectory> out;
    for (auto& b : all) {
        SpeedControlledTrajectory s;
        s.grid = grid;
        s.f2 = std::move(b.f2);
        s.valid = std::move(b.valid);
        s.family = b.family_votes[1] > b.family_votes[0] ? 1 : 0;
        s.branch_id = s.family == 0 ? "X" : "Y";
        s.first = b.first;
        s.last = b.last;
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first < y.first : x.family < y.family;
    });
    return out;
}

DriveSchedule ControlSchedule::drive() const { return DriveSchedule::make(grid, delta_omega_ff, coupling_ff); }

ControlSchedule ControlSchedule::from_drive(const DriveSchedule& d, std::string label) {
    return {d.grid, d.delta_omega, ffst::derivative(d.delta_omega, d.grid.h()), d.coupling, std::move(label)};
}

std::vector<double> path_on_grid(const PhasePath& path, const TimeGrid& grid) {
    if (path.f2.size() != path.grid.size()) throw DomainError("path sample count must equal n_steps + 1");
    for (std::size_t k = 0; k < path.f2.size(); ++k)
        if (!std::isfinite(path.f2[k])) throw SynthesisError("non-finite phase sample", path.grid.time(k));
    if (path.grid == grid) return path.f2;
    if (std::abs(path.grid.t0() - grid.t0()) > 1e-12 || std::abs(path.grid.t_end() - grid.t_end()) > 1e-12)
        throw DomainError("path must span the control grid");
    return pchip_resample(path.f2, path.grid.t0(), path.grid.h(), grid.t0(), grid.h(), grid.size());
}

void fill_singular(std::vector<double>& v, const std::vector<char>& singular, const TimeGrid& grid) {
    const long n = static_cast<long>(v.size());
    std::vector<long> regular;
    for (long k = 0; k < n; ++k)
        if (!singular[k]) regular.push_back(k);
    if (regular.size() < 4) throw SynthesisError("too few regular samples to fill a singularity", grid.t0());
    for (long k = 0; k < n; ++k) {
        if (!singular[k]) continue;
        auto it = std::lower_bound(regular.begin(), regular.end(), k);
        // widen a window of four around k
        long hi = it - regular.begin(), lo = hi - 1;
        std::vector<long> pick;
        while (pick.size() < 4) {
            bool take_lo = lo >= 0 && (hi >= static_cast<long>(regular.size()) || k - regular[lo] <= regular[hi] - k);
            if (take_lo) {
                pick.push_back(regular[lo--]);
            } else {
                pick.push_back(regular[hi++]);
            }
        }
        std::sort(pick.begin(), pick.end());
        double xs[4], ys[4];
        for (int i = 0; i < 4; ++i) {
            xs[i] = static_cast<double>(pick[i]);
            ys[i] = v[pick[i]];
        }
        v[k] = cubic_through(xs, ys, static_cast<double>(k));
    }
}

ControlSchedule synthesize_control_tunable(const PhasePath& path, const ScaledReference& sref,
                                           std::span<const double> g_ff) {
    const auto& grid = sref.grid;
    const std::size_t n = grid.size();
    if (g_ff.size() != n) throw DomainError("coupling sample count must equal n_steps + 1");
    for (std::size_t k = 0; k < n; ++k)
        if (!(g_ff[k] > 0.0)) throw DomainError("coupling samples must be positive");
    auto f = path_on_grid(path, grid);
    auto df = derivative(f, grid.h());

    std::vector<double> dw(n);
    std::vector<char> singular(n, 0);
    bool any_singular = false;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx p1 = sref.phi1[k], p2 = sref.phi2[k];
        const double a = sref.alpha[k], g = sref.coupling[k];
        const cplx e = std::exp(cplx(0.0, f[k]));
        const cplx br1 = a * g - g_ff[k] * e;
        const cplx br2 = a * g - g_ff[k] * std::conj(e);
        bool s1 = std::abs(p1) < singular_amplitude, s2 = std::abs(p2) < singular_amplitude;
        if ((s1 && std::abs(br1) > removable_bracket_tolerance) || (s2 && std::abs(br2) > removable_bracket_tolerance))
            throw SynthesisError("non-removable singularity in control synthesis", grid.time(k));
        if (s1 || s2) {
            singular[k] = 1;
            any_singular = true;
            continue;
        }
        double w1 = (p2 / p1 * br1).real() + a * sref.delta_omega[k];
        double w2 = (p1 / p2 * br2).real() - df[k];
        dw[k] = w1 - w2;
    }
    if (any_singular) fill_singular(dw, singular, grid);
    for (std::size_t k = 0; k < n; ++k)
        if (!std::isfinite(dw[k])) throw SynthesisError("non-finite control sample", grid.time(k));
    ControlSchedule c;
    c.grid = grid;
    c.derivative = derivative(dw, grid.h());
    c.delta_omega_ff = std::move(dw);
    c.coupling_ff.assign(g_ff.begin(), g_ff.end());
    c.label = "ffst";
    return c;
}

ControlSchedule synthesize_control(const PhasePath& path, const ScaledReference& sref) {
    return synthesize_control_tunable(path, sref, sref.coupling);
}

ControlSchedule naive_scaled_control(const ScaledReference& sref) {
    ControlSchedule c;
    c.grid = sref.grid;
    c.delta_omega_ff = sref.delta_omega;
    c.derivative = derivative(c.delta_omega_ff, c.grid.h());
    c.coupling_ff = sref.coupling;
    c.label = "naive";
    return c;
}

ControlSchedule alpha_scaled_control(const ScaledReference& sref) {
    ControlSchedule c;
    c.grid = sref.grid;
    c.delta_omega_ff.resize(sref.grid.size());
    for (std::size_t k = 0; k < c.delta_omega_ff.size(); ++k) c.delta_omega_ff[k] = sref.alpha[k] * sref.delta_omega[k];
    c.derivative = derivative(c.delta_omega_ff, c.grid.h());
    c.coupling_ff = sref.coupling;
    c.label = "alpha_scaled";
    return c;
}

}  // namespace ffst
