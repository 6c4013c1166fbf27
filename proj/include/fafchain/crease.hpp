#pragma once

// Chirality-wall (crease) energy: the minimal excess energy of an infinite
// chain that interpolates between the two chiral ground states. Computed on
// clamped windows [-N, N] whose half-width doubles until the value saturates.

#include "fafchain/ground_state.hpp"
#include "fafchain/optimizer.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fafchain {

/// Which well sits at -infinity.
enum class WallOrientation {
    minus_to_plus, ///< -theta_alpha on the left, +theta_alpha on the right
    plus_to_minus,
};

struct CreaseProfile {
    int half_width = 0;          ///< N
    std::vector<double> thetas;  ///< sites -N..N, stored at offset N
    double alpha = 0.0;
    WallOrientation orientation = WallOrientation::minus_to_plus;

    double at(int i) const; ///< clamped value outside [-N, N]
};

struct WindowSample {
    int half_width = 0;
    double energy = 0.0;
    bool converged = false;
};

struct CreaseResult {
    CreaseProfile profile;
    double energy = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<WindowSample> window_history;
};

enum class CreaseStart {
    tanh, ///< theta_alpha tanh(i sqrt(4-alpha)/sqrt 2)
    sign, ///< theta_alpha sign(i) with sign(0) = -1
};

struct CreaseOptions {
    SolverSettings solver = [] {
        SolverSettings s;
        s.max_iterations = 200000;
        return s;
    }();
    CreaseStart start = CreaseStart::tanh;
    WallOrientation orientation = WallOrientation::minus_to_plus;
    int max_half_width = 16384;
};

/// Window energy sum_{i=-N-1}^{N} of the bond terms; the two outermost bonds vanish.
double crease_window_energy(const CreaseProfile& profile);

/// Per-site derivatives of the window energy at the free sites -N+1..N-1.
std::vector<double> crease_window_gradient(const CreaseProfile& profile);

CreaseProfile crease_initial_profile(double alpha, int half_width, CreaseStart start,
                                     WallOrientation orientation = WallOrientation::minus_to_plus);

CreaseResult solve_crease_window(double alpha, int half_width, const CreaseOptions& opts = {},
                                 const std::optional<CreaseProfile>& start_from = std::nullopt);

/// Initial half-width max(8, ceil(4 / sqrt(4 - alpha))).
int crease_initial_half_width(double alpha);

CreaseResult crease_energy(double alpha, double rel_tol = 1e-8, const CreaseOptions& opts = {});

/// (4 - alpha) - (4 - alpha)^2 / 8: the energy of the bare sign profile.
double crease_upper_bound(double alpha);

/// (sqrt 2 / 3)(4 - alpha)^{3/2}.
double crease_asymptotic_prediction(double alpha);

struct CreaseSample {
    double alpha = 0.0;
    double energy = 0.0;
    bool converged = false;
    int final_half_width = 0;
};

struct ContinuityScan {
    std::vector<CreaseSample> rows;     ///< sorted by alpha
    double lipschitz_estimate = 0.0;    ///< max |dC| / |dalpha| over neighbours
    bool monotone_decreasing = true;    ///< observed, not guaranteed
};

ContinuityScan continuity_scan(std::span<const double> alphas, double rel_tol = 1e-8,
                               const CreaseOptions& opts = {}, unsigned threads = 0);

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
};

/// Least squares on (log(4 - alpha), log C).
PowerLawFit fit_asymptotics(std::span<const std::pair<double, double>> table);

/// n points with 4 - alpha log-spaced over [4 - alpha_max, 4 - alpha_min].
std::vector<double> asymptotic_alpha_grid(double alpha_min, double alpha_max, int points);

} // namespace fafchain
