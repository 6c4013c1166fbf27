#pragma once

// Minimization of the periodic chain energy over angle configurations, with
// optional pinned sites, plus chirality bookkeeping and an exhaustive grid
// oracle for small chains.

#include "fafchain/model_core.hpp"
#include "fafchain/optimizer.hpp"

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace fafchain {

namespace init {
/// Constant chain at +pi/4 (sign = +1) or -pi/4 (sign = -1); away from every well.
struct Constant {
    int sign = 1;
};
/// Uniform draws on J from a 64-bit Mersenne twister.
struct Random {
    std::uint64_t seed = 0;
};
/// theta_alpha * s(i) * tanh(distance to nearest wall / width); the domain
/// starting at the first wall is positive and signs alternate cyclically.
struct TanhWalls {
    std::vector<double> positions;
};
struct Explicit {
    AngleChain chain;
};
} // namespace init

using ChainInit = std::variant<init::Constant, init::Random, init::TanhWalls, init::Explicit>;

struct MinimizeOptions {
    int max_iterations = 10000;
    double gradient_tolerance = 1e-10;
    ChainInit init = init::Constant{+1};
    StepControl step_control;
    DescentRule rule = DescentRule::projected_lbfgs;
    bool record_trace = false;

    SolverSettings solver_settings() const;
    void validate(std::size_t n) const;
};

struct Pin {
    std::size_t site = 0;
    double angle = 0.0;
};

using PinSet = std::vector<Pin>;

struct ChainMinimum {
    AngleChain chain;
    double energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double projected_gradient_norm = 0.0;
    std::vector<double> trace;
};

/// Builds the initial chain described by an init option.
std::vector<double> initial_chain(std::size_t n, double alpha, const ChainInit& init);

ChainMinimum minimize_periodic(int n, double alpha, const MinimizeOptions& opts = {});

/// As minimize_periodic, with the pinned coordinates held at their angles.
ChainMinimum minimize_constrained(int n, double alpha, const PinSet& pins, const MinimizeOptions& opts = {});

struct GridMinimum {
    AngleChain chain;
    double energy = 0.0;           ///< E = P - n m_alpha at the grid minimizer
    double energy_per_site_p = 0.0; ///< min P / n on the grid
    std::uint64_t evaluated = 0;
};

/// Exhaustive search over grid_points^n chains on a uniform grid of J
/// (odd grid_points so that -pi/2, 0, pi/2 are nodes). Bond energies come
/// straight from the textbook cosine form, independent of bond_energy.
GridMinimum brute_force_minimum(int n, double alpha, int grid_points);

struct ChiralityProfile {
    std::vector<int> signs;
    int jump_count = 0;
    std::vector<std::size_t> jump_positions; ///< site i with signs[i] != signs[i-1] (cyclic)
    bool zero_chirality = false;             ///< every angle inside the dead zone
};

ChiralityProfile chirality_profile(const AngleChain& chain, double dead_zone = 1e-6);

/// k alternating pins (+theta_alpha first) at sites round((j + 1/2) n / k).
PinSet alternating_pins(int n, double alpha, int k);
/// Wall positions j n / k that sit midway between alternating_pins.
std::vector<double> alternating_wall_positions(int n, int k);

} // namespace fafchain
