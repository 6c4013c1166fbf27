#include "fafchain/continuum.hpp"
#include "fafchain/crease.hpp"
#include "fafchain/errors.hpp"
#include "fafchain/model_core.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fafchain;
using testing_support::relative_error;

namespace {

GridFunction constant_grid(std::size_t m, double value)
{
    return GridFunction(std::vector<double>(m, value));
}

// Seeded values in [-r, r] with |v(0)| = |v(1)|.
GridFunction random_grid(std::mt19937_64& rng, std::size_t m, double r)
{
    std::uniform_real_distribution<double> u(-r, r);
    std::vector<double> v(m);
    for (double& x : v) {
        x = u(rng);
    }
    v.back() = (rng() % 2 == 0 ? 1.0 : -1.0) * v.front();
    return GridFunction(std::move(v));
}

} // namespace

TEST_CASE("grid function validation")
{
    CHECK_THROWS_AS(GridFunction(std::vector<double>(63, 0.0)), InvalidArgument);
    std::vector<double> v(64, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(GridFunction{v}, InvalidArgument);
    v[3] = 0.0;
    v.back() = -0.0;
    CHECK(GridFunction(v).periodic_modulus());
    v.back() = 0.5;
    CHECK_FALSE(GridFunction(v).periodic_modulus());
    CHECK_THROWS_AS(continuum_F0(GridFunction(v), 1.0), InvalidArgument);
}

TEST_CASE("F0 closed-form values")
{
    CHECK(continuum_F0(constant_grid(100, 1.0), 0.3) == 0.0);
    CHECK(continuum_F0(constant_grid(1001, 0.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(continuum_F0(constant_grid(100, 1.0), 0.0), InvalidArgument);
    CHECK_THROWS_AS(continuum_F0(constant_grid(100, 1.0), -1.0), InvalidArgument);

    const auto tanh = tanh_profile(0.05, 0.5, 4096);
    CHECK(std::abs(continuum_F0(tanh, 0.05) - 8.0 / 3.0) < 1e-3);
}

TEST_CASE("G and H closed-form values")
{
    const double t2 = theta_alpha(2.0);
    const double lambda = 2.0 * 100.0 * std::pow(t2, 4);
    CHECK(mm_energy_G(constant_grid(200, 1.0), 100, 2.0, 1.0) == 0.0);
    CHECK(mm_energy_G(constant_grid(200, -1.0), 100, 2.0, 1.0) == 0.0);
    CHECK(mm_energy_G(constant_grid(1001, 0.0), 100, 2.0, 1.0) ==
          doctest::Approx(2.0 * 200.0 * std::pow(kPi / 3.0, 4)).epsilon(1e-13));
    CHECK(mm_energy_H(constant_grid(200, t2), 100, 2.0, 1.0) == doctest::Approx(0.0));
    CHECK(mm_energy_H(constant_grid(1001, 0.0), 100, 2.0, 1.0) == doctest::Approx(lambda).epsilon(1e-13));

    CHECK_THROWS_AS(mm_energy_G(constant_grid(100, 1.0), 100, 4.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(mm_energy_H(constant_grid(100, 1.0), 100, 4.5, 1.0), InvalidArgument);
    CHECK_THROWS_AS(mm_energy_G(constant_grid(100, 1.0), 2, 2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(mm_energy_G(constant_grid(100, 1.0), 100, 2.0, 0.0), InvalidArgument);
}

TEST_CASE("H equals mu times G after rescaling by theta_alpha")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const double alpha = std::uniform_real_distribution<double>(0.0, 3.99)(rng);
        const int n = 3 + static_cast<int>(rng() % 5000);
        const double crease = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        const double t = theta_alpha(alpha);
        const auto theta = random_grid(rng, 64 + rng() % 500, t * 1.2);
        std::vector<double> v;
        for (double x : theta.values()) {
            v.push_back(x / t);
        }
        const double h = mm_energy_H(theta, n, alpha, crease);
        const double g = mm_energy_G(GridFunction(v), n, alpha, crease);
        CHECK(relative_error(h, mu_alpha(alpha) * g) < 1e-10);
    }
}

TEST_CASE("interface costs")
{
    CHECK(std::abs(interface_cost(standard_double_well()) - 8.0 / 3.0) < 1e-9);
    for (double a : {0.0, 1.0, 2.0, 3.0}) {
        const double t = theta_alpha(a);
        CHECK(std::abs(interface_cost(angular_double_well(a)) - 8.0 / 3.0 * t * t * t) < 1e-9);
    }
    DoubleWellSpec degenerate = standard_double_well();
    degenerate.well_left = 1.0;
    CHECK(interface_cost(degenerate) == 0.0);

    DoubleWellSpec reversed = standard_double_well();
    reversed.well_left = 1.0;
    reversed.well_right = -1.0;
    CHECK_THROWS_AS(interface_cost(reversed), InvalidArgument);

    DoubleWellSpec negative{-1.0, 1.0, [](double s) { return s * s - 0.5; }};
    CHECK_THROWS_AS(interface_cost(negative), InvalidArgument);
}

TEST_CASE("tanh profile and equipartition")
{
    const auto v = tanh_profile(0.05, 0.5, 4097);
    CHECK(v[2048] == 0.0);
    CHECK(v[4096] > 0.9999);
    CHECK_THROWS_AS(tanh_profile(0.0, 0.5, 100), InvalidArgument);
    CHECK_THROWS_AS(tanh_profile(0.1, 0.5, 32), InvalidArgument);

    double last = 1e300;
    for (std::size_t m : {257u, 1025u, 4097u, 16385u}) {
        const double r = equipartition_residual(tanh_profile(0.05, 0.5, m), 0.05);
        CHECK(r < last);
        last = r;
    }
    CHECK(last < 1e-3);
}

TEST_CASE("F0 quadrature converges at second order")
{
    // smooth, not periodic in its derivative, |v(0)| = |v(1)|
    auto profile = [](std::size_t m) {
        std::vector<double> v(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(m - 1);
            v[j] = std::cos(3.0 * kPi * t) + 0.5 * t * (1.0 - t) * std::exp(t);
        }
        return GridFunction(v);
    };
    const double l = 0.1;
    const double reference = continuum_F0(profile((1u << 18) + 1), l);
    const double e1 = std::abs(continuum_F0(profile(257), l) - reference);
    const double e2 = std::abs(continuum_F0(profile(513), l) - reference);
    const double e3 = std::abs(continuum_F0(profile(1025), l) - reference);
    CHECK(std::log2(e1 / e2) >= 1.9);
    CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("analytic gradients of the discretized functionals")
{
    std::mt19937_64 rng(11);
    const double c3 = 0.419637;
    const std::vector<FunctionalKind> kinds{functional::F0{0.07}, functional::G{500, 3.0, c3},
                                            functional::H{500, 3.0, c3}, functional::G{40, 1.0, 1.28}};
    for (const auto& kind : kinds) {
        const auto f = discretize(kind);
        const double r = std::isfinite(f.bound) ? f.bound : 1.5 * f.well;
        const auto v = random_grid(rng, 80, r);
        std::vector<double> x(v.values().begin(), v.values().end());
        std::vector<double> g(x.size());
        const double value = f.value_and_gradient(x, g);
        CHECK(value == doctest::Approx(f.value(x)).epsilon(1e-14));
        double scale = 0.0;
        for (double gi : g) {
            scale = std::max(scale, std::abs(gi));
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            auto plus = x, minus = x;
            plus[j] += h;
            minus[j] -= h;
            const double fd = (f.value(plus) - f.value(minus)) / (2.0 * h);
            CHECK(relative_error(g[j], fd, 1e-6 * scale) < 1e-5);
        }
    }
}

TEST_CASE("pinned F0 minimization")
{
    const std::vector<GridPin> pins{{0.25, -1.0}, {0.75, 1.0}};
    const auto r = minimize_functional(functional::F0{0.05}, 2048, pins);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 16.0 / 3.0) <= 0.05 * 16.0 / 3.0);
    CHECK(r.v[static_cast<std::size_t>(std::lround(0.25 * 2047))] == -1.0);
    CHECK(r.v[static_cast<std::size_t>(std::lround(0.75 * 2047))] == 1.0);
    CHECK(r.v.periodic_modulus());

    ContinuumOptions random_start;
    random_start.init = grid_init::Random{99};
    const auto s = minimize_functional(functional::F0{0.05}, 2048, pins, random_start);
    CHECK(s.converged);
    CHECK(std::abs(r.value - s.value) < 1e-6);
}

TEST_CASE("pinned F0 minima approach 16/3 from above as l decreases")
{
    const auto pins = alternating_grid_pins(2);
    REQUIRE(pins.size() == 2);
    CHECK(pins[0].t == 0.25);
    CHECK(pins[0].value == 1.0);
    CHECK(pins[1].value == -1.0);
    double last = 1e300;
    for (double l : {0.2, 0.1, 0.05, 0.025}) {
        const auto r = minimize_functional(functional::F0{l}, 2048, pins);
        CHECK(r.converged);
        CHECK(r.value <= last + 1e-9);
        CHECK(r.value >= 16.0 / 3.0 - 1e-3);
        last = r.value;
    }
}

TEST_CASE("unconstrained G minimum is a well")
{
    const auto r = minimize_functional(functional::G{100, 3.0, 0.419637}, 256, {});
    CHECK(r.converged);
    CHECK(std::abs(r.value) < 1e-8);
    for (double x : r.v.values()) {
        CHECK(std::abs(std::abs(x) - 1.0) < 1e-4);
    }
}

TEST_CASE("minimization beats the tanh profile at the same pins")
{
    const double l = 0.05;
    const std::size_t m = 4097;
    const auto tanh = tanh_profile(l, 0.5, m);
    const std::vector<GridPin> pins{{0.25, tanh[1024]}, {0.75, tanh[3072]}};
    ContinuumOptions o;
    o.coupling = EndpointCoupling::antiperiodic;
    o.init = grid_init::Explicit{tanh};
    const auto r = minimize_functional(functional::F0{l}, m, pins, o);
    CHECK(r.value <= continuum_F0(tanh, l) + 1e-12);
    CHECK(r.v[0] == doctest::Approx(-r.v[m - 1]).epsilon(1e-12));
}

TEST_CASE("minimization input validation")
{
    CHECK_THROWS_AS(minimize_functional(functional::F0{0.1}, 32, {}), InvalidArgument);
    const std::vector<GridPin> outside{{1.5, 1.0}};
    CHECK_THROWS_AS(minimize_functional(functional::F0{0.1}, 128, outside), InvalidArgument);
    const std::vector<GridPin> clash{{0.5, 1.0}, {0.5001, -1.0}};
    CHECK_THROWS_AS(minimize_functional(functional::F0{0.1}, 128, clash), InvalidArgument);
    const std::vector<GridPin> too_big{{0.5, 3.0}};
    CHECK_THROWS_AS(minimize_functional(functional::H{100, 2.0, 1.0}, 128, too_big), InvalidArgument);
    CHECK_THROWS_AS(alternating_grid_pins(3), InvalidArgument);
    CHECK_THROWS_AS(discretize(functional::F0{0.0}), InvalidArgument);
}

TEST_CASE("grid resolution follows the interface width")
{
    CHECK(resolved_grid(functional::F0{0.05}) == 2048);
    const auto fine = resolved_grid(functional::F0{1e-4});
    CHECK(static_cast<double>(fine - 1) * 1e-4 >= 16.0 - 1e-9);
    CHECK(discretize(functional::F0{0.2}).interface_width() == doctest::Approx(0.2));
}

TEST_CASE("relative gap")
{
    CHECK(relative_gap(0.0, 0.0) == 0.0);
    CHECK(relative_gap(1.0, 1.1) == doctest::Approx(0.1));
    CHECK(relative_gap(1.1, 1.0) == doctest::Approx(0.1));
}

TEST_CASE("equivalence report")
{
    const auto r = equivalence_report(2000, 3.0, 2);
    CHECK(r.converged);
    CHECK(r.gap_discrete_continuum <= 0.05);
    CHECK(r.gap_discrete_prediction <= 0.05);
    CHECK(r.gap_continuum_prediction <= 0.05);
    CHECK(r.prediction == doctest::Approx(8.0 * r.crease / std::sqrt(2.0) * 2.0).epsilon(1e-12));

    const auto zero = equivalence_report(2000, 2.0, 0);
    CHECK(zero.discrete_minimum == 0.0);
    CHECK(zero.continuum_minimum == 0.0);
    CHECK(zero.prediction == 0.0);

    CHECK_THROWS_AS(equivalence_report(100, 4.0, 2), SingularPoint);
    CHECK_THROWS_AS(equivalence_report(100, 3.0, 3), InvalidArgument);
    CHECK_THROWS_AS(equivalence_report(2, 3.0, 2), InvalidArgument);
}
