#pragma once

// Box-constrained smooth minimization shared by the lattice and the continuum
// solvers: projected gradient with Armijo backtracking, optionally steered by
// a limited-memory BFGS direction on the currently free coordinates.

#include <functional>
#include <span>
#include <vector>

namespace fafchain {

struct StepControl {
    double initial_step = 1.0;
    double shrink = 0.5;
    double sufficient_decrease = 1e-4;
    int max_backtracks = 60;
};

enum class DescentRule {
    projected_gradient, ///< plain steepest descent step
    projected_lbfgs,    ///< quasi-Newton direction, falls back to the gradient
};

struct SolverSettings {
    int max_iterations = 10000;
    double gradient_tolerance = 1e-10;
    StepControl step;
    DescentRule rule = DescentRule::projected_lbfgs;
    int memory = 12;
    bool record_trace = false;
};

/// Fills grad (same length as x) and returns the objective.
using ValueAndGradient = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BoxProblem {
    ValueAndGradient objective;
    std::vector<double> lower;  ///< may hold -inf
    std::vector<double> upper;  ///< may hold +inf
    std::vector<char> fixed;    ///< nonzero entries never move; empty means none
};

struct SolverResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double projected_gradient_norm = 0.0;
    std::vector<double> trace; ///< objective after every accepted step (when requested)
};

/// max_i |x_i - P(x_i - g_i)| over the movable coordinates.
double projected_gradient_norm(const BoxProblem& problem, std::span<const double> x, std::span<const double> g);

SolverResult minimize_box(const BoxProblem& problem, std::vector<double> x0, const SolverSettings& settings);

} // namespace fafchain
