#include "fafchain/crease.hpp"
#include "fafchain/errors.hpp"
#include "fafchain/ground_state.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace fafchain;

namespace {

bool constant_at(const AngleChain& c, double value, double tol)
{
    for (double t : c.values()) {
        if (std::abs(t - value) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("free minimization lands on the ground states")
{
    MinimizeOptions opts;
    auto r = minimize_periodic(50, 2.0, opts);
    CHECK(r.converged);
    CHECK(r.energy < 1e-10);
    CHECK(constant_at(r.chain, kPi / 3.0, 1e-6));

    opts.init = init::Random{7};
    r = minimize_periodic(50, 5.0, opts);
    CHECK(r.converged);
    CHECK(r.energy < 1e-8);
    CHECK(constant_at(r.chain, 0.0, 1e-4));

    opts.init = init::Constant{-1};
    r = minimize_periodic(30, 1.0, opts);
    CHECK(r.energy < 1e-10);
    CHECK(constant_at(r.chain, -theta_alpha(1.0), 1e-6));
}

TEST_CASE("returned energy is the energy of the returned chain")
{
    MinimizeOptions opts;
    opts.init = init::Random{42};
    opts.max_iterations = 5;
    const auto r = minimize_periodic(20, 3.0, opts);
    CHECK(r.energy == doctest::Approx(energy_angles(r.chain, 3.0)).epsilon(1e-14));
    for (double t : r.chain.values()) {
        CHECK(std::abs(t) <= kHalfPi);
    }
}

TEST_CASE("solver trace is non-increasing")
{
    for (double alpha : {0.5, 2.0, 3.9, 5.0}) {
        MinimizeOptions opts;
        opts.init = init::Random{static_cast<std::uint64_t>(alpha * 10)};
        opts.record_trace = true;
        const auto r = minimize_periodic(40, alpha, opts);
        REQUIRE(r.trace.size() >= 2);
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
            REQUIRE(r.trace[i] <= r.trace[i - 1] + 1e-13 * std::abs(r.trace[i - 1]) + 1e-300);
        }
    }
}

TEST_CASE("brute-force grid oracle")
{
    auto g = brute_force_minimum(3, 0.0, 5);
    CHECK(std::abs(g.energy) < 1e-12);
    CHECK(std::abs(std::abs(g.chain[0]) - kHalfPi) < 1e-12);
    CHECK(constant_at(g.chain, g.chain[0], 1e-12));
    CHECK(g.evaluated == 125);

    g = brute_force_minimum(3, 4.0, 5);
    CHECK(std::abs(g.energy) < 1e-12);
    CHECK(constant_at(g.chain, 0.0, 1e-12));

    g = brute_force_minimum(4, 2.0, 9);
    const double delta = kPi / 8.0;
    CHECK(g.energy_per_site_p >= m_alpha(2.0) - 1e-12);
    // constant chain at the node nearest theta_alpha: W'' <= 4 + alpha, offset <= delta/2
    CHECK(g.energy_per_site_p - m_alpha(2.0) <= (4.0 + 2.0) * delta * delta / 8.0);

    CHECK_THROWS_AS(brute_force_minimum(9, 1.0, 5), CostGuard);
    CHECK_THROWS_AS(brute_force_minimum(3, 1.0, 43), CostGuard);
    CHECK_THROWS_AS(brute_force_minimum(3, 1.0, 4), InvalidArgument);
}

TEST_CASE("solver never loses to the grid oracle")
{
    for (double alpha : {0.0, 1.0, 2.0, 3.0, 3.9, 5.0}) {
        for (int n : {3, 4, 5}) {
            const auto grid = brute_force_minimum(n, alpha, n == 5 ? 13 : 21);
            const auto r = minimize_periodic(n, alpha, {});
            CHECK(r.energy <= grid.energy + 1e-9);
        }
    }
    MinimizeOptions opts;
    opts.init = init::Random{3};
    const auto r = minimize_periodic(6, 1.0, opts);
    CHECK(r.energy <= brute_force_minimum(6, 1.0, 25).energy + 1e-9);
}

TEST_CASE("chirality profile")
{
    const double t = theta_alpha(2.0);
    auto p = chirality_profile(AngleChain::constant(10, t));
    CHECK(p.jump_count == 0);
    CHECK_FALSE(p.zero_chirality);
    for (int s : p.signs) {
        CHECK(s == 1);
    }

    std::vector<double> half(10, t);
    std::fill(half.begin() + 5, half.end(), -t);
    p = chirality_profile(AngleChain(half));
    CHECK(p.jump_count == 2);
    REQUIRE(p.jump_positions.size() == 2);
    CHECK(p.jump_positions[0] == 0);
    CHECK(p.jump_positions[1] == 5);

    // a zero site inherits the sign before it
    p = chirality_profile(AngleChain({0.5, 0.0, -0.5, -0.5, 0.0, 0.5}));
    CHECK(p.signs == std::vector<int>{1, 1, -1, -1, -1, 1});
    CHECK(p.jump_count == 2);

    p = chirality_profile(AngleChain::constant(5, 0.0));
    CHECK(p.zero_chirality);
    CHECK(p.jump_count == 0);
}

TEST_CASE("pinned minimization")
{
    const double c3 = crease_energy(3.0).energy;
    const double t3 = theta_alpha(3.0);
    const PinSet pins{{100, t3}, {300, -t3}};
    MinimizeOptions opts;
    opts.init = init::TanhWalls{{0.0, 200.0}};
    opts.max_iterations = 100000;
    const auto r = minimize_constrained(400, 3.0, pins, opts);
    CHECK(r.converged);
    CHECK(r.chain[100] == t3);
    CHECK(r.chain[300] == -t3);
    CHECK(std::abs(r.energy - 2.0 * c3) <= 0.01 * 2.0 * c3);
    const auto prof = chirality_profile(r.chain);
    CHECK(prof.jump_count == 2);
    for (std::size_t j : prof.jump_positions) {
        CHECK((std::abs(static_cast<int>(j) - 200) <= 2 || j >= 397 || j <= 2));
    }

    const double c2 = crease_energy(2.0).energy;
    MinimizeOptions four;
    four.init = init::TanhWalls{alternating_wall_positions(400, 4)};
    const auto r4 = minimize_constrained(400, 2.0, alternating_pins(400, 2.0, 4), four);
    CHECK(std::abs(r4.energy - 4.0 * c2) <= 0.01 * 4.0 * c2);
    CHECK(chirality_profile(r4.chain).jump_count == 4);

    const double t = theta_alpha(1.5);
    const auto same = minimize_constrained(60, 1.5, {{10, t}, {40, t}}, {});
    CHECK(same.energy < 1e-10);
}

TEST_CASE("pin validation")
{
    CHECK_THROWS_AS(minimize_constrained(10, 1.0, {{10, 0.0}}, {}), InvalidArgument);
    CHECK_THROWS_AS(minimize_constrained(10, 1.0, {{1, 0.0}, {1, 0.1}}, {}), InvalidArgument);
    CHECK_THROWS_AS(minimize_constrained(10, 1.0, {{1, 2.0}}, {}), InvalidArgument);
    CHECK_THROWS_AS(alternating_pins(10, 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(minimize_periodic(2, 1.0, {}), InvalidArgument);
    MinimizeOptions bad;
    bad.init = init::TanhWalls{{5.0, 2.0}};
    CHECK_THROWS_AS(minimize_periodic(10, 1.0, bad), InvalidArgument);
}

TEST_CASE("wall additivity across alpha")
{
    for (double alpha : {1.0, 2.0, 3.0, 3.5}) {
        const double c = crease_energy(alpha).energy;
        for (int k : {2, 4}) {
            const int n = 100 * k;
            MinimizeOptions opts;
            opts.max_iterations = 100000;
            opts.init = init::TanhWalls{alternating_wall_positions(n, k)};
            const auto r = minimize_constrained(n, alpha, alternating_pins(n, alpha, k), opts);
            CHECK(std::abs(r.energy - k * c) <= 0.01 * k * c);
            CHECK(chirality_profile(r.chain).jump_count % 2 == 0);
        }
    }
}
