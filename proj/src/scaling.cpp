#include "fafchain/scaling.hpp"

#include "fafchain/continuum.hpp"
#include "fafchain/errors.hpp"
#include "fafchain/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace fafchain {

namespace {

constexpr std::size_t kCandidateGridCap = std::size_t{1} << 20;

void require_subcritical(double alpha, const char* what)
{
    require_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw InvalidArgument(std::string(what) + ": needs alpha < 4 (alpha = 4 is the singular point)");
    }
}

void require_even_jumps(int k)
{
    if (k < 0 || k % 2 != 0) {
        throw InvalidArgument("jump count must be even and nonnegative (periodicity), got " + std::to_string(k));
    }
}

int rank(Regime r)
{
    switch (r) {
    case Regime::ferro:
        return 0;
    case Regime::diffuse:
        return 1;
    case Regime::sharp:
        return 2;
    }
    return 0;
}

} // namespace

OrderParameterChain to_order_parameter(const AngleChain& chain, double alpha)
{
    require_subcritical(alpha, "to_order_parameter");
    const double t = theta_alpha(alpha);
    OrderParameterChain v;
    v.alpha = alpha;
    v.n = static_cast<int>(chain.size());
    v.values.reserve(chain.size());
    for (double theta : chain.values()) {
        v.values.push_back(theta / t);
    }
    return v;
}

AngleChain from_order_parameter(const OrderParameterChain& v)
{
    require_subcritical(v.alpha, "from_order_parameter");
    if (v.n != static_cast<int>(v.values.size())) {
        throw InvalidArgument("order parameter chain: n does not match the number of values");
    }
    const double t = theta_alpha(v.alpha);
    std::vector<double> thetas;
    thetas.reserve(v.values.size());
    for (double x : v.values) {
        thetas.push_back(x * t);
    }
    return AngleChain(std::move(thetas));
}

double l_value(int n, double alpha)
{
    require_subcritical(alpha, "l_value");
    if (n < 3) {
        throw InvalidArgument("l_value: n must be >= 3");
    }
    return std::sqrt(2.0) / (4.0 * n * std::sqrt(kCriticalAlpha - alpha));
}

double regime_limit_energy(double l, int jumps, std::size_t grid)
{
    require_even_jumps(jumps);
    if (!(l >= 0.0)) {
        throw InvalidArgument("regime_limit_energy: l must be nonnegative");
    }
    if (l == 0.0) {
        return 8.0 / 3.0 * jumps;
    }
    if (std::isinf(l)) {
        return jumps == 0 ? 0.0 : kInfinity;
    }
    if (grid < GridFunction::kMinNodes) {
        throw InvalidArgument("regime_limit_energy: grid must have at least 64 nodes");
    }
    if (jumps == 0) {
        return 0.0;
    }
    const auto pins = alternating_grid_pins(jumps);
    return minimize_functional(functional::F0{l}, grid, pins).value;
}

MinimizeOptions scaled_minimize_defaults()
{
    MinimizeOptions o;
    o.max_iterations = 200000;
    return o;
}

ScaledMinimum min_scaled_energy(int n, double alpha, int jumps, const MinimizeOptions& opts)
{
    require_subcritical(alpha, "min_scaled_energy");
    require_even_jumps(jumps);

    ChainMinimum m;
    if (jumps == 0) {
        m = minimize_periodic(n, alpha, opts);
    } else {
        MinimizeOptions o = opts;
        o.init = init::TanhWalls{alternating_wall_positions(n, jumps)};
        m = minimize_constrained(n, alpha, alternating_pins(n, alpha, jumps), o);
    }
    ScaledMinimum out;
    out.energy = m.energy;
    out.value = m.energy / mu_alpha(alpha);
    out.converged = m.converged;
    out.iterations = m.iterations;
    out.chain = std::move(m.chain);
    return out;
}

std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::sharp:
        return "sharp";
    case Regime::diffuse:
        return "diffuse";
    case Regime::ferro:
        return "ferro";
    }
    return "unknown";
}

RegimeCandidates regime_candidates(double l, int jumps, std::size_t grid)
{
    if (jumps < 2) {
        throw InvalidArgument("regime classification needs at least 2 jumps");
    }
    RegimeCandidates c;
    c.sharp = regime_limit_energy(0.0, jumps, grid);
    std::size_t fine = grid;
    if (l > 0.0 && std::isfinite(l)) {
        fine = std::min(resolved_grid(functional::F0{l}, grid), std::max(grid, kCandidateGridCap));
    }
    c.diffuse = regime_limit_energy(l, jumps, fine);
    c.ferro_threshold = 2.0 * c.sharp;
    return c;
}

Regime classify_regime(double measured, const RegimeCandidates& c)
{
    if (measured > c.ferro_threshold) {
        return Regime::ferro;
    }
    if (std::abs(c.diffuse - c.sharp) <= c.resolution * c.sharp) {
        return Regime::sharp;
    }
    return std::abs(measured - c.diffuse) < std::abs(measured - c.sharp) ? Regime::diffuse : Regime::sharp;
}

Regime classify_regime(double measured, double l, int jumps, std::size_t grid)
{
    if (jumps < 2) {
        throw InvalidArgument("regime classification needs at least 2 jumps");
    }
    // Anything past the threshold is ferro whatever the diffuse candidate is.
    if (measured > 2.0 * regime_limit_energy(0.0, jumps, grid)) {
        return Regime::ferro;
    }
    return classify_regime(measured, regime_candidates(l, jumps, grid));
}

std::vector<RegimePoint> phase_diagram(std::span<const int> n_grid, std::span<const double> alpha_grid, int jumps,
                                       const PhaseDiagramOptions& opts)
{
    if (n_grid.empty() || alpha_grid.empty()) {
        throw InvalidArgument("phase_diagram: n and alpha grids must be nonempty");
    }
    if (jumps < 2) {
        throw InvalidArgument("phase_diagram: needs at least 2 jumps");
    }
    require_even_jumps(jumps);
    for (double a : alpha_grid) {
        require_subcritical(a, "phase_diagram");
    }
    for (int n : n_grid) {
        if (n < 3) {
            throw InvalidArgument("phase_diagram: n must be >= 3");
        }
    }

    std::vector<RegimePoint> rows(n_grid.size() * alpha_grid.size());
    parallel_for_index(rows.size(), opts.threads, [&](std::size_t idx) {
        RegimePoint& p = rows[idx];
        p.n = n_grid[idx / alpha_grid.size()];
        p.alpha = alpha_grid[idx % alpha_grid.size()];
        p.epsilon = kCriticalAlpha - p.alpha;
        const auto start = std::chrono::steady_clock::now();
        try {
            p.l_value = l_value(p.n, p.alpha);
            const ScaledMinimum m = min_scaled_energy(p.n, p.alpha, jumps, opts.minimize);
            p.measured = m.value;
            p.converged = m.converged;
            p.iterations = m.iterations;
            const RegimeCandidates c = regime_candidates(p.l_value, jumps, opts.grid);
            p.sharp_candidate = c.sharp;
            p.diffuse_candidate = c.diffuse;
            p.regime_label = classify_regime(p.measured, c);
        } catch (const std::exception& e) {
            p.error = e.what();
            p.converged = false;
        }
        p.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    return rows;
}

bool labels_monotone_in_n(std::span<const RegimePoint> rows)
{
    std::map<double, std::vector<const RegimePoint*>> by_alpha;
    for (const auto& r : rows) {
        if (r.error.empty()) {
            by_alpha[r.alpha].push_back(&r);
        }
    }
    for (auto& [alpha, pts] : by_alpha) {
        std::sort(pts.begin(), pts.end(), [](const RegimePoint* a, const RegimePoint* b) { return a->n < b->n; });
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (rank(pts[i]->regime_label) < rank(pts[i - 1]->regime_label)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace fafchain
