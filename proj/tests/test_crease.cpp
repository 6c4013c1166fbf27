#include "fafchain/crease.hpp"
#include "fafchain/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace fafchain;
using testing_support::relative_error;

TEST_CASE("sign profile energies")
{
    const auto p0 = crease_initial_profile(0.0, 2, CreaseStart::sign);
    CHECK(p0.thetas.size() == 5);
    CHECK(p0.at(0) == -kHalfPi);
    CHECK(p0.at(1) == kHalfPi);
    CHECK(crease_window_energy(p0) == doctest::Approx(2.0).epsilon(1e-14));

    // a single junction bond costs (4 - alpha) - (4 - alpha)^2 / 8
    for (double a : {0.5, 2.0, 3.5}) {
        CHECK(crease_window_energy(crease_initial_profile(a, 5, CreaseStart::sign)) ==
              doctest::Approx(crease_upper_bound(a)).epsilon(1e-12));
    }
}

TEST_CASE("window solve from the sign profile stays below the rough bound")
{
    CreaseOptions o;
    o.start = CreaseStart::sign;
    const auto r = solve_crease_window(2.0, 2, o);
    CHECK(r.converged);
    CHECK(r.energy <= 1.5);
    CHECK(r.profile.at(-2) == -theta_alpha(2.0));
    CHECK(r.profile.at(2) == theta_alpha(2.0));
}

TEST_CASE("wide windows saturate")
{
    const auto a = solve_crease_window(2.0, 40);
    const auto b = solve_crease_window(2.0, 80);
    CHECK(std::abs(a.energy - b.energy) < 1e-10);
}

TEST_CASE("window gradient vanishes at the solution and matches differences")
{
    const auto r = solve_crease_window(3.0, 16);
    for (double g : crease_window_gradient(r.profile)) {
        CHECK(std::abs(g) <= 1e-10);
    }
    auto p = crease_initial_profile(3.0, 6, CreaseStart::tanh);
    const auto g = crease_window_gradient(p);
    const double h = 1e-6;
    for (int i = -5; i <= 5; ++i) {
        auto plus = p, minus = p;
        plus.thetas[static_cast<std::size_t>(i + 6)] += h;
        minus.thetas[static_cast<std::size_t>(i + 6)] -= h;
        const double fd = (crease_window_energy(plus) - crease_window_energy(minus)) / (2.0 * h);
        CHECK(relative_error(g[static_cast<std::size_t>(i + 5)], fd, 1e-6) < 1e-5);
    }
}

TEST_CASE("crease energy: positivity, bounds and monotone history")
{
    for (double a : {0.0, 0.5, 1.0, 2.0, 3.0, 3.5, 3.9, 3.99}) {
        const auto r = crease_energy(a);
        CHECK(r.converged);
        CHECK(r.energy > 0.0);
        CHECK(r.energy <= crease_upper_bound(a) + 1e-9);
        for (std::size_t i = 1; i < r.window_history.size(); ++i) {
            CHECK(r.window_history[i].energy <= r.window_history[i - 1].energy + 1e-12);
            CHECK(r.window_history[i].half_width == 2 * r.window_history[i - 1].half_width);
        }
        CHECK(r.window_history.front().half_width == crease_initial_half_width(a));
    }
    const auto c2 = crease_energy(2.0);
    CHECK(c2.energy > 0.0);
    CHECK(c2.energy <= 1.5);
}

TEST_CASE("near-critical value follows the asymptotic law")
{
    const double c = crease_energy(3.96).energy;
    CHECK(std::abs(c / crease_asymptotic_prediction(3.96) - 1.0) < 0.1);
    CHECK(crease_asymptotic_prediction(3.96) == doctest::Approx(3.771236e-3).epsilon(1e-6));
    CHECK(crease_asymptotic_prediction(3.9) == doctest::Approx(1.4907e-2).epsilon(1e-4));
    CHECK(crease_asymptotic_prediction(4.0) == 0.0);
}

TEST_CASE("reflection symmetry")
{
    for (double a : {0.0, 1.5, 3.0}) {
        CreaseOptions mirrored;
        mirrored.orientation = WallOrientation::plus_to_minus;
        const auto r = crease_energy(a);
        const auto m = crease_energy(a, 1e-8, mirrored);
        CHECK(std::abs(r.energy - m.energy) < 1e-9);
        REQUIRE(r.profile.half_width == m.profile.half_width);
        // the mirrored wall is the reversed profile or the sign-flipped one
        const int n = r.profile.half_width;
        double reversed = 0.0, flipped = 0.0;
        for (int i = -n; i <= n; ++i) {
            reversed = std::max(reversed, std::abs(m.profile.at(i) - r.profile.at(-i)));
            flipped = std::max(flipped, std::abs(m.profile.at(i) + r.profile.at(i)));
        }
        CHECK(std::min(reversed, flipped) < 1e-6);
    }
}

TEST_CASE("converged profile is monotone (observed)")
{
    for (double a : {1.0, 3.0, 3.9}) {
        const auto r = crease_energy(a);
        int violations = 0;
        for (int i = -r.profile.half_width; i < r.profile.half_width; ++i) {
            if (r.profile.at(i + 1) < r.profile.at(i) - 1e-9) {
                ++violations;
            }
        }
        WARN_MESSAGE(violations == 0, "profile not monotone at alpha = " << a << " (" << violations << " sites)");
    }
}

TEST_CASE("upper bound closed form")
{
    CHECK(crease_upper_bound(0.0) == 2.0);
    CHECK(crease_upper_bound(4.0) == 0.0);
    CHECK(crease_upper_bound(2.0) == 1.5);
    for (double a : {0.3, 1.7, 3.3}) {
        CHECK(crease_upper_bound(a) == doctest::Approx(2.0 - a * a / 8.0).epsilon(1e-14));
    }
}

TEST_CASE("continuity scan")
{
    std::vector<double> alphas;
    for (double a = 0.0; a <= 3.5; a += 0.5) {
        alphas.push_back(a);
    }
    const auto scan = continuity_scan(alphas, 1e-8, {}, 2);
    REQUIRE(scan.rows.size() == alphas.size());
    CHECK(scan.monotone_decreasing);
    double max_c = 0.0;
    for (const auto& r : scan.rows) {
        max_c = std::max(max_c, r.energy);
    }
    for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        const auto& x = scan.rows[i - 1];
        const auto& y = scan.rows[i];
        CHECK(std::abs(y.energy - x.energy) <= scan.lipschitz_estimate * (y.alpha - x.alpha) + 2e-8 * max_c);
    }

    const double one[] = {2.0};
    CHECK(continuity_scan(one).rows.size() == 1);

    // finer steps near alpha = 3 give smaller differences
    double last = 1e9;
    for (double step : {1e-1, 1e-2, 1e-3}) {
        const double pair[] = {3.0, 3.0 + step};
        const auto s = continuity_scan(pair);
        const double d = std::abs(s.rows[1].energy - s.rows[0].energy);
        CHECK(d < last);
        last = d;
    }

    const double unsorted[] = {2.0, 1.0};
    CHECK_THROWS_AS(continuity_scan(unsorted), InvalidArgument);
}

TEST_CASE("power-law fit")
{
    std::vector<std::pair<double, double>> exact;
    for (double eps : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
        exact.emplace_back(4.0 - eps, std::sqrt(2.0) / 3.0 * std::pow(eps, 1.5));
    }
    const auto f = fit_asymptotics(exact);
    CHECK(std::abs(f.exponent - 1.5) < 1e-12);
    CHECK(std::abs(f.prefactor - std::sqrt(2.0) / 3.0) < 1e-12);
    CHECK(std::abs(f.r_squared - 1.0) < 1e-12);

    exact.pop_back();
    CHECK_THROWS_AS(fit_asymptotics(exact), InvalidArgument);
    std::vector<std::pair<double, double>> bad{{3.9, 1.0}, {3.91, 1.0}, {3.92, 0.0}, {3.93, 1.0}, {3.94, 1.0}};
    CHECK_THROWS_AS(fit_asymptotics(bad), InvalidArgument);
}

TEST_CASE("asymptotic alpha grid is log-spaced in 4 - alpha")
{
    const auto g = asymptotic_alpha_grid(3.9, 3.999, 12);
    REQUIRE(g.size() == 12);
    CHECK(g.front() == 3.9);
    CHECK(g.back() == 3.999);
    const double r0 = (4.0 - g[0]) / (4.0 - g[1]);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        CHECK((4.0 - g[i]) / (4.0 - g[i + 1]) == doctest::Approx(r0).epsilon(1e-9));
    }
}

TEST_CASE("crease refuses the ferromagnetic side")
{
    CHECK_THROWS_AS(crease_energy(4.0), InvalidArgument);
    CHECK_THROWS_AS(solve_crease_window(4.5, 8), InvalidArgument);
    CHECK_THROWS_AS(solve_crease_window(2.0, 1), InvalidArgument);
    CHECK_THROWS_AS(crease_energy(2.0, 0.0), InvalidArgument);
}
