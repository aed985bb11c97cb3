// one line per acceptance criterion; exit status 1 when any fails
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ffst/analysis.hpp"
#include "ffst/device.hpp"
#include "ffst/errors.hpp"
#include "scenarios.hpp"

using namespace ffst;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void need(bool ok, const std::string& what) {
        pass = pass && ok;
        note << (ok ? "" : "!") << what << "; ";
    }
};

std::string fmt(double x, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

bool near(double x, double want, double tol) { return std::abs(x - want) <= tol; }

double itt_fidelity(const scen::FfCase& c, const CrossingPlan& plan, IttResult* out = nullptr) {
    auto r = optimize_virtual_trajectory(c.scts, c.gaps, plan, c.field);
    double f = verify_control(synthesize_control(r.vt.path(), c.sref), {}, scen::reference().final_state()).fidelity;
    if (out) *out = std::move(r);
    return f;
}

void c1(Verdict& v) {
    const auto& c = scen::ff(0.9);
    const auto& tgt = scen::reference().final_state();
    double itt = itt_fidelity(c, auto_plan(c.scts, c.gaps));
    double naive = verify_control(naive_scaled_control(c.sref), {}, tgt).fidelity;
    double alpha = verify_control(alpha_scaled_control(c.sref), {}, tgt).fidelity;
    v.need(itt >= 0.999, "ITT " + fmt(itt, 7) + " >= 0.999");
    v.need(near(naive, 0.9871, 0.002), "naive " + fmt(naive) + " = 0.9871 +- 0.002");
    v.need(near(alpha, 0.9989, 0.002), "alpha-scaled " + fmt(alpha) + " = 0.9989 +- 0.002");
}

void c2(Verdict& v) {
    const auto& c = scen::ff(1.1);
    const auto& tgt = scen::reference().final_state();
    double a = itt_fidelity(c, scen::vt_a), b = itt_fidelity(c, scen::vt_b);
    double naive = verify_control(naive_scaled_control(c.sref), {}, tgt).fidelity;
    double alpha = verify_control(alpha_scaled_control(c.sref), {}, tgt).fidelity;
    v.need(a >= 0.9995, "VT-A " + fmt(a, 7) + " >= 0.9995");
    v.need(b >= 0.999, "VT-B " + fmt(b, 7) + " >= 0.999");
    v.need(near(naive, 0.9876, 0.002), "naive " + fmt(naive) + " = 0.9876 +- 0.002");
    v.need(near(alpha, 0.9984, 0.002), "alpha-scaled " + fmt(alpha) + " = 0.9984 +- 0.002");
}

std::pair<double, double> sta_pair(double TF) {
    const auto& c = scen::sta(TF);
    auto r = optimize_virtual_trajectory(c.scts, c.gaps, auto_plan(c.scts, c.gaps, Support::span), c.field);
    double ff = verify_control(synthesize_sta_control(r.vt.path(), c.sweep), c.sweep.initial_state(), c.target.state).fidelity;
    auto bare = ControlSchedule::from_drive(c.sweep.drive(), "unmodified");
    double un = verify_control(bare, c.sweep.initial_state(), c.target.state).fidelity;
    return {ff, un};
}

void c3(Verdict& v) {
    const auto& c = scen::sta(30.0);
    v.need(c.gaps.empty(), "connected trajectory (" + std::to_string(c.gaps.size()) + " gaps)");
    auto [ff, un] = sta_pair(30.0);
    v.need(ff >= 0.9999, "FFST " + fmt(ff, 8) + " >= 0.9999");
    v.need(near(un, 0.929, 0.005), "unmodified " + fmt(un) + " = 0.929 +- 0.005");
}

void c4(Verdict& v) {
    auto [i20, u20] = sta_pair(20.0);
    auto [i10, u10] = sta_pair(10.0);
    v.need(i20 >= 0.995, "T_F=20 ITT " + fmt(i20) + " >= 0.995");
    v.need(near(u20, 0.857, 0.01), "T_F=20 unmodified " + fmt(u20) + " = 0.857 +- 0.01");
    v.need(near(i10, 0.949, 0.01), "T_F=10 ITT " + fmt(i10) + " = 0.949 +- 0.01");
    v.need(near(u10, 0.697, 0.01), "T_F=10 unmodified " + fmt(u10) + " = 0.697 +- 0.01");
}

void c5(Verdict& v) {
    const auto& c = scen::ff(1.1);
    const auto* x = scen::full_branch(c.scts, "X");
    const auto* y = scen::full_branch(c.scts, "Y");
    v.need(x && y, "two branches over the whole run");
    if (!x || !y) return;
    std::size_t want[2] = {1, 3};
    int i = 0;
    for (const auto* plan : {&scen::vt_a, &scen::vt_b}) {
        IttResult r;
        itt_fidelity(c, *plan, &r);
        auto rep = verify_control(synthesize_control(r.vt.path(), c.sref), {}, scen::reference().final_state());
        auto sh = trajectory_shift_analysis(rep.run, *x, *y, c.sref);
        v.need(sh.shift_count() == want[i], plan->name + " shifts " + std::to_string(sh.shift_count()) + " == " +
                                                std::to_string(want[i]));
        ++i;
    }
}

void c6(Verdict& v) {
    const auto& a = scen::ff(0.9);
    const double va[3] = {0.5, 0.7, 0.8};
    bool ok = a.gaps.size() == 3;
    for (std::size_t i = 0; ok && i < 3; ++i) {
        ok = a.gaps[i].kind == Gap::Kind::vertical && a.gaps[i].t_start - 0.06 <= va[i] && va[i] <= a.gaps[i].t_end + 0.06;
        v.note << "[" << fmt(a.gaps[i].t_start, 4) << ", " << fmt(a.gaps[i].t_end, 4) << "] ";
    }
    v.need(ok, "T_F=0.9 zero-root intervals near 0.5, 0.7, 0.8");
    const auto& d = scen::ff(1.1);
    const double vd[3] = {0.7, 0.9, 1.0};
    ok = d.gaps.size() == 3;
    for (std::size_t i = 0; ok && i < 3; ++i) {
        double mid = 0.5 * (d.gaps[i].t_start + d.gaps[i].t_end);
        ok = d.gaps[i].kind == Gap::Kind::horizontal && std::abs(mid - vd[i]) < 0.05;
        v.note << "[" << fmt(d.gaps[i].t_start, 4) << ", " << fmt(d.gaps[i].t_end, 4) << "] ";
    }
    v.need(ok, "T_F=1.1 horizontal gaps near 0.7, 0.9, 1.0");
    std::vector<double> tfs{0.9, 1.1};
    auto prof = gap_direction_scan(tfs, scen::reference());
    bool dich = !prof[0].counts_at_degenerate.empty() && !prof[1].counts_at_degenerate.empty();
    for (int n : prof[0].counts_at_degenerate) dich = dich && n == 0;
    for (int n : prof[1].counts_at_degenerate) dich = dich && n == 2;
    v.need(dich, "scenario dichotomy (alpha>1: 0 roots, alpha<1: 2 roots)");
    ScaledReference s;
    s.grid = TimeGrid(0.0, 1.0, 2);
    s.phi1.assign(3, cplx(0.6, 0.0));
    s.phi2.assign(3, cplx(0.0, 0.8));
    s.coupling.assign(3, 1.0);
    s.delta_omega.assign(3, 0.0);
    s.lambda = {0.0, 0.5, 1.0};
    bool built = true;
    for (double alpha : {0.5, 0.9, 1.1, 1.5}) {
        s.alpha.assign(3, alpha);
        built = built && build_root_scan(ffst_residual(s)).roots[1].count() == (alpha < 1.0 ? 2 : 0);
    }
    v.need(built, "constructed states dichotomy");
}

void c7(Verdict& v) {
    auto r = solve_reference({30.0, 1.0}, {}, 100000);
    v.need(r.max_norm_drift < 1e-9, "norm drift " + fmt(r.max_norm_drift, 3) + " < 1e-9 over 1e5 steps");
    auto st = [](std::size_t n) { return solve_reference({30.0, 1.0}, {}, n).final_state(); };
    auto dist = [](const TwoLevelState& a, const TwoLevelState& b) {
        return std::sqrt(std::norm(a.phi1 - b.phi1) + std::norm(a.phi2 - b.phi2));
    };
    auto a = st(400), b = st(800), c = st(1600);
    double order = std::log2(dist(a, b) / dist(b, c));
    v.need(order >= 3.9, "Richardson order " + fmt(order, 4) + " >= 3.9");
    const auto& ref = scen::reference();
    double rt = fidelity(evolve_backward(ref.drive, ref.final_state()), TwoLevelState{});
    v.need(rt > 1.0 - 1e-8, "round trip 1 - " + fmt(1.0 - rt, 3));
}

void c8(Verdict& v) {
    const auto& ref = scen::reference();
    const auto& d = scen::ff(1.1);
    double worst = 1.0;
    for (const char* id : {"X", "Y"}) {
        const auto* b = scen::full_branch(d.scts, id);
        if (!b) {
            worst = 0.0;
            continue;
        }
        auto ctrl = synthesize_control(PhasePath{d.grid, b->f2}, d.sref);
        TwoLevelState tgt{ref.final_state().phi1, ref.final_state().phi2 * std::exp(cplx(0.0, b->f2.back()))};
        worst = std::min(worst, verify_control(ctrl, {}, tgt).fidelity);
    }
    v.need(worst > 1.0 - 1e-6, "SCT round trip 1 - " + fmt(1.0 - worst, 3));

    auto prof = build_magnification(1.0, 1.0, ref.grid);
    auto sref = scale_reference(ref, prof);
    auto ctrl = synthesize_control(PhasePath{ref.grid, std::vector<double>(ref.grid.size(), 0.0)}, sref);
    double dev = 0.0;
    for (std::size_t k = 0; k < ref.grid.size(); ++k)
        dev = std::max(dev, std::abs(ctrl.delta_omega_ff[k] - ref.drive.delta_omega[k]));
    v.need(dev < 1e-9, "alpha=1, f2=0 reproduces the drive (max dev " + fmt(dev, 3) + ")");

    double trivial = 1.0;
    for (double TF : {0.9, 1.1}) {
        const auto& c = scen::ff(TF);
        std::vector<double> g(c.grid.size());
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = c.sref.alpha[k] * c.sref.coupling[k];
        auto t = synthesize_control_tunable(PhasePath{c.grid, std::vector<double>(c.grid.size(), 0.0)}, c.sref, g);
        trivial = std::min(trivial, verify_control(t, {}, ref.final_state()).fidelity);
    }
    v.need(trivial > 1.0 - 1e-8, "trivial scaling 1 - " + fmt(1.0 - trivial, 3));
}

void c9(Verdict& v) {
    const auto& c = scen::ff(1.1);
    const auto& ref = scen::reference();
    auto ctrl = alpha_scaled_control(c.sref);
    std::vector<double> shift(c.grid.size());
    double worst = 0.0;
    for (double amp : {0.3, 5.0, 50.0}) {
        for (std::size_t k = 0; k < shift.size(); ++k) {
            double t = c.grid.time(k);
            shift[k] = amp * (std::cos(2.0 * t) + t * t * t - 0.5 * std::sin(9.0 * t));
        }
        worst = std::max(worst, global_phase_check(ctrl, shift, {}, ref.final_state()));
    }
    v.need(worst < 1e-9, "global phase difference " + fmt(worst, 3));

    auto prof = build_magnification(1.0, 0.9, TimeGrid(0.0, 0.9, 20000));
    double per = 0.0;
    for (double t : {0.1, 0.45, 0.6, 0.85})
        for (double f : {-2.5, 0.0, 1.7}) per = std::max(per, std::abs(beta_ff(t, f + two_pi, ref, prof) - beta_ff(t, f, ref, prof)));
    v.need(per < 1e-13, "beta periodicity " + fmt(per, 3));

    auto rate_err = [](std::size_t n) {
        auto r = solve_reference({30.0, 1.0}, {}, n);
        std::vector<double> p1(r.states.size());
        for (std::size_t k = 0; k < p1.size(); ++k) p1[k] = r.states[k].population1();
        auto dp = derivative(p1, r.grid.h());
        double e = 0.0;
        for (std::size_t k = 0; k < p1.size(); ++k)
            e = std::max(e, std::abs(dp[k] - 2.0 * (std::conj(r.states[k].phi1) * r.states[k].phi2).imag()));
        return e;
    };
    double e1 = rate_err(10000), e2 = rate_err(20000);
    v.need(e1 / e2 > 3.5 && e1 / e2 < 4.5, "population-rate identity error ratio " + fmt(e1 / e2, 4) + " (O(h^2))");
}

void c10(Verdict& v) {
    using namespace device;
    double w = transmon_frequency(30.0, 0.203);
    v.need(near(w, 6.777, 1e-3), "transmon frequency " + fmt(w, 7) + " GHz");
    double ej = squid_ej(0.5, 30.0, 0.85);
    v.need(std::abs(ej - 25.5) < 1e-12, "squid E_J(0.5) " + fmt(ej, 15) + " GHz");
    TransmonSpec s;
    auto band = achievable_band(s);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        double target = band.lo + (band.hi - band.lo) * i / 200.0;
        worst = std::max(worst, std::abs(frequency_at_flux(flux_for_frequency(target, s), s) - target));
    }
    v.need(worst < 1e-9, "flux round trip " + fmt(worst, 3) + " GHz");
    double ns = time_unit_ns(0.009);
    v.need(ns >= 10.0 && ns <= 1000.0, "T_F = 1/g at 9 MHz lasts " + fmt(ns, 4) + " ns");
}

}  // namespace

int main() {
    const std::vector<std::function<void(Verdict&)>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            criteria[i](v);
        } catch (const std::exception& e) {
            v.need(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.note.str().c_str());
        std::fflush(stdout);
        if (!v.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
