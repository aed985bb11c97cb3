#include <doctest.h>

#include <cmath>

#include "ffst/analysis.hpp"
#include "ffst/errors.hpp"
#include "scenarios.hpp"

using namespace ffst;

TEST_CASE("verification report") {
    const auto& c = scen::ff(0.9);
    auto ctrl = naive_scaled_control(c.sref);
    auto rep = verify_control(ctrl, {}, scen::reference().final_state());
    CHECK(rep.control_label == "naive");
    CHECK(rep.population1.size() == c.grid.size());
    CHECK(rep.population1.front() == 1.0);
    CHECK(rep.run.max_norm_drift < 1e-9);
    CHECK(rep.fidelity == doctest::Approx(fidelity(rep.target_state, rep.final_state)));
    auto shifted = ctrl;
    shifted.grid = TimeGrid(0.5, 1.4, c.grid.n_steps());
    CHECK_THROWS_AS(verify_control(shifted, {}, rep.target_state), DomainError);
}

TEST_CASE("common energy shifts leave fidelities unchanged") {
    const auto& c = scen::ff(1.1);
    auto ctrl = alpha_scaled_control(c.sref);
    const auto& target = scen::reference().final_state();
    std::vector<double> shift(c.grid.size());
    for (double amp : {0.5, 7.0, 40.0}) {
        for (std::size_t k = 0; k < shift.size(); ++k) {
            double t = c.grid.time(k);
            shift[k] = amp * (std::sin(3.0 * t) + 0.3 * t * t - std::cos(11.0 * t));
        }
        CHECK(global_phase_check(ctrl, shift, {}, target) < 1e-9);
    }
}

TEST_CASE("root-count dichotomy at a purely imaginary overlap") {
    // phi1* phi2 = i / 2: two roots below unit magnification, none above
    ScaledReference s;
    s.grid = TimeGrid(0.0, 1.0, 4);
    s.phi1.assign(5, cplx(std::sqrt(0.5), 0.0));
    s.phi2.assign(5, cplx(0.0, std::sqrt(0.5)));
    s.coupling.assign(5, 1.0);
    s.delta_omega.assign(5, 0.0);
    s.lambda = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (double alpha : {0.3, 0.8, 0.999, 1.001, 1.2, 2.0}) {
        s.alpha.assign(5, alpha);
        auto scan = build_root_scan(ffst_residual(s));
        CHECK(scan.roots[2].count() == (alpha < 1.0 ? 2 : 0));
        if (alpha < 1.0) {
            CHECK(std::cos(scan.roots[2].roots[0]) == doctest::Approx(alpha));
            CHECK(std::cos(scan.roots[2].roots[1]) == doctest::Approx(alpha));
        }
    }
    // negative imaginary part flips nothing
    s.phi2.assign(5, cplx(0.0, -std::sqrt(0.5)));
    s.alpha.assign(5, 0.5);
    CHECK(build_root_scan(ffst_residual(s)).roots[2].count() == 2);
    s.alpha.assign(5, 1.5);
    CHECK(build_root_scan(ffst_residual(s)).roots[2].count() == 0);
}

TEST_CASE("gap direction follows the sign of alpha - 1") {
    std::vector<double> tfs{0.9, 1.0, 1.1};
    auto prof = gap_direction_scan(tfs, scen::reference());
    REQUIRE(prof.size() == 3);
    CHECK(prof[0].opening == GapDirectionProfile::Opening::vertical);
    CHECK(prof[1].opening == GapDirectionProfile::Opening::none);
    CHECK(prof[1].zero_root_everywhere);
    CHECK(prof[2].opening == GapDirectionProfile::Opening::horizontal);
    CHECK(prof[0].counts_at_degenerate.size() == 3);
    for (int n : prof[0].counts_at_degenerate) CHECK(n == 0);
    for (int n : prof[2].counts_at_degenerate) CHECK(n == 2);
    CHECK(prof[0].zero_root_intervals.size() == 3);
    CHECK(prof[2].zero_root_intervals.empty());
}

TEST_CASE("trajectory shifts: one for VT-A, three for VT-B") {
    const auto& c = scen::ff(1.1);
    const auto* x = scen::full_branch(c.scts, "X");
    const auto* y = scen::full_branch(c.scts, "Y");
    REQUIRE(x);
    REQUIRE(y);
    const auto& target = scen::reference().final_state();
    std::size_t want[2] = {1, 3};
    int i = 0;
    for (const auto* plan : {&scen::vt_a, &scen::vt_b}) {
        auto r = optimize_virtual_trajectory(c.scts, c.gaps, *plan, c.field);
        auto rep = verify_control(synthesize_control(r.vt.path(), c.sref), {}, target);
        auto sh = trajectory_shift_analysis(rep.run, *x, *y, c.sref);
        CHECK(sh.shift_count() == want[i]);
        CHECK(sh.dominant.back() == 'Y');
        ++i;
    }
}

TEST_CASE("following one connected trajectory never shifts") {
    const auto& c = scen::ff(1.1);
    const auto* x = scen::full_branch(c.scts, "X");
    const auto* y = scen::full_branch(c.scts, "Y");
    REQUIRE(x);
    REQUIRE(y);
    auto ctrl = synthesize_control(PhasePath{c.grid, x->f2}, c.sref);
    auto rep = verify_control(ctrl, {}, scen::reference().final_state());
    CHECK(trajectory_shift_analysis(rep.run, *x, *y, c.sref).shift_count() == 0);
}

TEST_CASE("zero common shift changes nothing") {
    const auto& c = scen::ff(0.9);
    std::vector<double> zero(c.grid.size(), 0.0);
    CHECK(global_phase_check(naive_scaled_control(c.sref), zero, {}, scen::reference().final_state()) == 0.0);
}
