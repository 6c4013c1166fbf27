#pragma once

// Modica-Mortola type functionals on a uniform grid of [0, 1]:
//   F0(v)  = (1/l) int (v^2-1)^2 + l int v'^2
//   G(v)   = (1/mu) [ lambda int (v^2-1)^2 + (M^2/lambda) int v'^2 ]
//   H(th)  = (lambda/th_a^4) int (th^2-th_a^2)^2 + (M^2/(lambda th_a^2)) int th'^2
// with lambda = 2 n theta_alpha^4, M = 3 C_alpha / 8, mu = sqrt2 (4-alpha)^{3/2} / 8.
// Potential terms use the trapezoid rule, gradient terms forward differences.

#include "fafchain/optimizer.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace fafchain {

/// Values at nodes t_j = j / (m - 1), j = 0..m-1, m >= 64.
class GridFunction {
public:
    static constexpr std::size_t kMinNodes = 64;

    GridFunction() = default;
    explicit GridFunction(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double spacing() const noexcept { return 1.0 / static_cast<double>(values_.size() - 1); }
    double node(std::size_t j) const noexcept { return static_cast<double>(j) * spacing(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }

    /// |v(0)| = |v(1)|: membership in the class the functionals live on.
    bool periodic_modulus(double tol = 1e-9) const noexcept;

private:
    std::vector<double> values_;
};

struct DoubleWellSpec {
    double well_left = -1.0;
    double well_right = 1.0;
    std::function<double(double)> potential;
};

/// (v^2 - 1)^2 with wells +-1.
DoubleWellSpec standard_double_well();
/// (theta^2 - theta_alpha^2)^2 with wells +-theta_alpha.
DoubleWellSpec angular_double_well(double alpha);

/// c_W = 2 int_a^b sqrt(W(s)) ds by adaptive Gauss-Kronrod quadrature.
double interface_cost(const DoubleWellSpec& spec);

namespace functional {
struct F0 {
    double l = 0.0;
};
struct G {
    int n = 0;
    double alpha = 0.0;
    double crease = 0.0; ///< C_alpha, supplied by the caller
};
struct H {
    int n = 0;
    double alpha = 0.0;
    double crease = 0.0;
};
} // namespace functional

using FunctionalKind = std::variant<functional::F0, functional::G, functional::H>;

/// A * trap((v^2 - w^2)^2) + B * sum_j ((v_{j+1} - v_j)/h)^2 h.
struct DiscreteFunctional {
    double potential_weight = 0.0; ///< A
    double gradient_weight = 0.0;  ///< B
    double well = 1.0;             ///< w
    double bound = 0.0;            ///< box |v| <= bound; +inf if none

    double value(std::span<const double> v) const;
    double value_and_gradient(std::span<const double> v, std::span<double> grad) const;
    /// Width of the optimal tanh interface, sqrt(B/A) / w.
    double interface_width() const;
};

DiscreteFunctional discretize(const FunctionalKind& kind);

double continuum_F0(const GridFunction& v, double l);
double mm_energy_G(const GridFunction& v, int n, double alpha, double crease);
double mm_energy_H(const GridFunction& theta, int n, double alpha, double crease);

/// Value of any functional on a grid function (checks the periodic-modulus class).
double evaluate_functional(const FunctionalKind& kind, const GridFunction& v);

GridFunction tanh_profile(double l, double center, std::size_t grid);

/// max over interior nodes of |l v'^2 - (v^2-1)^2 / l|, v' by central differences.
double equipartition_residual(const GridFunction& v, double l);

struct GridPin {
    double t = 0.0;
    double value = 0.0;
};

/// k pins at t = (j + 1/2)/k with values +w, -w, +w, ...
std::vector<GridPin> alternating_grid_pins(int k, double well = 1.0);

/// How v(1) is tied to v(0). Both choices satisfy |v(0)| = |v(1)|.
enum class EndpointCoupling {
    periodic,     ///< v(1) = v(0)
    antiperiodic, ///< v(1) = -v(0)
};

namespace grid_init {
/// Tanh interfaces midway between consecutive opposite pins (the default).
struct TanhFromPins {};
/// Seeded magnitudes in (0, w] carrying the sign of the nearest pin.
struct Random {
    std::uint64_t seed = 0;
};
struct Explicit {
    GridFunction v;
};
} // namespace grid_init

using GridInit = std::variant<grid_init::TanhFromPins, grid_init::Random, grid_init::Explicit>;

struct ContinuumOptions {
    SolverSettings solver = [] {
        SolverSettings s;
        s.max_iterations = 200000;
        return s;
    }();
    EndpointCoupling coupling = EndpointCoupling::periodic;
    GridInit init = grid_init::TanhFromPins{};
};

struct FunctionalMinimum {
    GridFunction v;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    double projected_gradient_norm = 0.0;
};

FunctionalMinimum minimize_functional(const FunctionalKind& kind, std::size_t grid, std::span<const GridPin> pins,
                                      const ContinuumOptions& opts = {});

/// Grid size resolving the functional's interface with at least
/// nodes_per_width nodes, never below base.
std::size_t resolved_grid(const FunctionalKind& kind, std::size_t base = 2048, double nodes_per_width = 16.0);

struct EquivalenceReport {
    int n = 0;
    double alpha = 0.0;
    int jumps = 0;
    double crease = 0.0;
    double discrete_minimum = 0.0;   ///< min F_n^alpha with forced walls
    double continuum_minimum = 0.0;  ///< min G_n^alpha with forced walls
    double prediction = 0.0;         ///< 8 C / (sqrt2 (4-alpha)^{3/2}) * k
    double gap_discrete_continuum = 0.0;
    double gap_discrete_prediction = 0.0;
    double gap_continuum_prediction = 0.0;
    std::size_t grid = 0;
    bool converged = false;
};

/// |a - b| / min(|a|, |b|); zero when both vanish.
double relative_gap(double a, double b);

EquivalenceReport equivalence_report(int n, double alpha, int jumps, std::size_t base_grid = 2048);

} // namespace fafchain
