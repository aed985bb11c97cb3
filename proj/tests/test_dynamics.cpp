#include <doctest.h>

#include <cmath>

#include "ffst/drives.hpp"
#include "ffst/dynamics.hpp"
#include "ffst/errors.hpp"
#include "ffst/numerics.hpp"

using namespace ffst;

namespace {

double distance(const TwoLevelState& a, const TwoLevelState& b) {
    return std::sqrt(std::norm(a.phi1 - b.phi1) + std::norm(a.phi2 - b.phi2));
}

}  // namespace

TEST_CASE("resonant Rabi flop against the closed form") {
    // dw = 0, g = 1: P2(t) = sin^2 t
    TimeGrid grid(0.0, 1.0, 1000);
    auto run = integrate_schrodinger(DriveSchedule::make(grid, std::vector<double>(grid.size(), 0.0)), {});
    for (std::size_t k = 0; k < grid.size(); k += 100)
        CHECK(run.states[k].population2() == doctest::Approx(std::pow(std::sin(grid.time(k)), 2)).epsilon(1e-11));
    CHECK(run.final_state().phi1.real() == doctest::Approx(std::cos(1.0)).epsilon(1e-11));
    CHECK(run.final_state().phi2.imag() == doctest::Approx(-std::sin(1.0)).epsilon(1e-11));
}

TEST_CASE("norm drift over 1e5 steps") {
    auto r = solve_reference({30.0, 1.0}, {}, 100000);
    CHECK(r.max_norm_drift < 1e-9);
}

TEST_CASE("reference sweep final populations") {
    auto r = solve_reference({30.0, 1.0}, {});
    CHECK(r.grid.n_steps() == 20000);
    CHECK(r.final_state().population2() == doctest::Approx(0.087315349789).epsilon(1e-9));
    CHECK(r.final_state().population1() + r.final_state().population2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fourth order convergence on the reference sweep") {
    auto st = [](std::size_t n) { return solve_reference({30.0, 1.0}, {}, n).final_state(); };
    auto a = st(400), b = st(800), c = st(1600);
    double order = std::log2(distance(a, b) / distance(b, c));
    CHECK(order >= 3.9);
    CHECK(order < 4.3);
}

TEST_CASE("forward then backward returns the initial state") {
    auto r = solve_reference({30.0, 1.0}, {});
    auto back = evolve_backward(r.drive, r.final_state());
    CHECK(fidelity(back, TwoLevelState{}) > 1.0 - 1e-8);
}

TEST_CASE("population rate identity dP1/dt = 2 g Im(phi1* phi2)") {
    auto err = [](std::size_t n) {
        auto r = solve_reference({30.0, 1.0}, {}, n);
        std::vector<double> p1(r.states.size());
        for (std::size_t k = 0; k < p1.size(); ++k) p1[k] = r.states[k].population1();
        auto d = derivative(p1, r.grid.h());
        double e = 0.0;
        for (std::size_t k = 0; k < p1.size(); ++k) {
            double rate = 2.0 * r.drive.coupling[k] * (std::conj(r.states[k].phi1) * r.states[k].phi2).imag();
            e = std::max(e, std::abs(d[k] - rate));
        }
        return e;
    };
    double e1 = err(10000), e2 = err(20000);
    CHECK(e2 < 1e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("state_at interpolation") {
    auto coarse = solve_reference({30.0, 1.0}, {}, 20000);
    for (std::size_t k = 0; k < coarse.grid.size(); k += 2500) {
        auto s = state_at(coarse, coarse.grid.time(k));
        CHECK(distance(s, coarse.states[k]) < 1e-14);
    }
    auto fine = solve_reference({30.0, 1.0}, {}, 40000);
    for (std::size_t k = 1; k < fine.grid.size(); k += 4001) {
        auto s = state_at(coarse, fine.grid.time(k));
        CHECK(distance(s, fine.states[k]) < 1e-9);
        CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(make_state({1.0, 0.0}, {0.1, 0.0}), DomainError);
    CHECK_NOTHROW(make_state({std::sqrt(0.5), 0.0}, {0.0, std::sqrt(0.5)}));
    CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 10), DomainError);
    TimeGrid g(0.0, 1.0, 10);
    CHECK(g.time(10) == 1.0);
    CHECK_THROWS_AS(DriveSchedule::make(g, std::vector<double>(5, 0.0)), DomainError);
    std::vector<double> bad(g.size(), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(DriveSchedule::make(g, bad), IntegrationError);
}

TEST_CASE("fidelity and overlap") {
    TwoLevelState a{}, b{cplx(0.0, 1.0), 0.0};
    CHECK(fidelity(a, b) == doctest::Approx(1.0));
    CHECK(std::abs(overlap(a, b) - cplx(0.0, 1.0)) < 1e-15);
    TwoLevelState c{0.0, 1.0};
    CHECK(fidelity(a, c) == 0.0);
}

TEST_CASE("free evolution leaves |1> alone") {
    TimeGrid grid(0.0, 2.0, 200);
    std::vector<double> zero(grid.size(), 0.0);
    auto run = integrate_schrodinger(DriveSchedule::make(grid, zero, zero), {});
    CHECK(distance(run.final_state(), TwoLevelState{}) == 0.0);
    CHECK(run.states.front().phi1 == cplx(1.0, 0.0));
}

TEST_CASE("interpolation midway through a Rabi flop") {
    TimeGrid grid(0.0, 1.0, 100);
    auto run = integrate_schrodinger(DriveSchedule::make(grid, std::vector<double>(grid.size(), 0.0)), {});
    for (double t : {0.005, 0.335, 0.995}) {
        auto s = state_at(run, t);
        CHECK(std::abs(s.phi1 - cplx(std::cos(t), 0.0)) < 1e-6);
        CHECK(std::abs(s.phi2 - cplx(0.0, -std::sin(t))) < 1e-6);
    }
}

TEST_CASE("reference population against an eighth-step oracle") {
    double coarse = solve_reference({30.0, 1.0}, {}).final_state().population2();
    double fine = solve_reference({30.0, 1.0}, {}, 160000).final_state().population2();
    CHECK(std::abs(coarse - fine) < 1e-7);
}
