#pragma once

// Near-critical rescaling. With v = theta / theta_alpha and
// l = sqrt2 / (4 n sqrt(4 - alpha)), scaled minima with k forced sign changes
// approach (8/3) k (l -> 0), a diffuse-interface minimum (l finite) or
// diverge (l -> infinity).

#include "fafchain/ground_state.hpp"

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fafchain {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct OrderParameterChain {
    std::vector<double> values;
    double alpha = 0.0;
    int n = 0;
};

OrderParameterChain to_order_parameter(const AngleChain& chain, double alpha);
AngleChain from_order_parameter(const OrderParameterChain& v);

double l_value(int n, double alpha);

/// (8/3) k at l = 0, 0 or infinity at l = infinity, otherwise the
/// two-well F0 minimum with k alternating pins on the given grid.
double regime_limit_energy(double l, int jumps, std::size_t grid = 2048);

/// Minimization defaults for scaled problems: generous iteration budget.
MinimizeOptions scaled_minimize_defaults();

struct ScaledMinimum {
    double value = 0.0;    ///< E / mu_alpha
    double energy = 0.0;   ///< E
    bool converged = false;
    int iterations = 0;
    AngleChain chain;
};

/// Constrained minimum with k alternating pins (free for k = 0). For k > 0
/// the search starts from tanh walls midway between the pins, whatever
/// opts.init says.
ScaledMinimum min_scaled_energy(int n, double alpha, int jumps,
                                const MinimizeOptions& opts = scaled_minimize_defaults());

enum class Regime { sharp, diffuse, ferro };

std::string_view to_string(Regime r);

struct RegimeCandidates {
    double sharp = 0.0;
    double diffuse = 0.0;
    double ferro_threshold = 0.0; ///< 2 x sharp
    /// Relative separation below which diffuse and sharp count as one candidate.
    double resolution = 0.01;
};

/// Candidates at l. The diffuse value uses the given grid refined, if
/// needed, to 16 nodes per interface width l (at most 2^20 nodes).
RegimeCandidates regime_candidates(double l, int jumps, std::size_t grid = 2048);

/// ferro above the threshold; otherwise whichever of sharp/diffuse is
/// nearer, with sharp chosen when the two candidates are closer than
/// the resolution.
Regime classify_regime(double measured, const RegimeCandidates& c);
Regime classify_regime(double measured, double l, int jumps, std::size_t grid = 2048);

struct RegimePoint {
    int n = 0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double l_value = 0.0;
    double measured = 0.0;
    double sharp_candidate = 0.0;
    double diffuse_candidate = 0.0;
    Regime regime_label = Regime::sharp;
    bool converged = false;
    int iterations = 0;
    double wall_seconds = 0.0;
    std::string error; ///< non-empty when the point failed
};

struct PhaseDiagramOptions {
    MinimizeOptions minimize = scaled_minimize_defaults();
    std::size_t grid = 2048;
    unsigned threads = 0;
};

/// One row per (n, alpha), n-major in the order given.
std::vector<RegimePoint> phase_diagram(std::span<const int> n_grid, std::span<const double> alpha_grid, int jumps,
                                       const PhaseDiagramOptions& opts = {});

/// Along each alpha the labels, read with increasing n, move only in the
/// direction ferro -> diffuse -> sharp. Failed points are skipped.
bool labels_monotone_in_n(std::span<const RegimePoint> rows);

} // namespace fafchain
