#include "fafchain/continuum.hpp"

#include "fafchain/crease.hpp"
#include "fafchain/errors.hpp"
#include "fafchain/model_core.hpp"
#include "fafchain/overloaded.hpp"
#include "fafchain/scaling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

namespace fafchain {

namespace {

constexpr std::size_t kMaxGrid = std::size_t{1} << 22;

void require_grid(std::size_t m)
{
    if (m < GridFunction::kMinNodes) {
        throw InvalidArgument("grid must have at least 64 nodes, got " + std::to_string(m));
    }
    if (m > kMaxGrid) {
        throw InvalidArgument("grid larger than " + std::to_string(kMaxGrid) + " nodes");
    }
}

void require_subcritical(int n, double alpha, double crease, const char* what)
{
    require_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw InvalidArgument(std::string(what) + ": mu_alpha vanishes at alpha >= 4 (the singular point)");
    }
    if (n < 3) {
        throw InvalidArgument(std::string(what) + ": n must be >= 3");
    }
    if (!(crease > 0.0) || !std::isfinite(crease)) {
        throw InvalidArgument(std::string(what) + ": crease energy must be positive");
    }
}

void require_class(const GridFunction& v, const char* what)
{
    if (!v.periodic_modulus()) {
        throw InvalidArgument(std::string(what) + ": |v(0)| != |v(1)|");
    }
}

double coupling_sign(EndpointCoupling c)
{
    return c == EndpointCoupling::periodic ? 1.0 : -1.0;
}

// Cyclic distance on [0, 1).
double cyclic_distance(double a, double b)
{
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

} // namespace

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values))
{
    if (values_.size() < kMinNodes) {
        throw InvalidArgument("grid function needs at least 64 nodes, got " + std::to_string(values_.size()));
    }
    for (double x : values_) {
        if (!std::isfinite(x)) {
            throw InvalidArgument("grid function values must be finite");
        }
    }
}

bool GridFunction::periodic_modulus(double tol) const noexcept
{
    return !values_.empty() && std::abs(std::abs(values_.front()) - std::abs(values_.back())) <= tol;
}

DoubleWellSpec standard_double_well()
{
    return {-1.0, 1.0, [](double s) {
                const double q = s * s - 1.0;
                return q * q;
            }};
}

DoubleWellSpec angular_double_well(double alpha)
{
    require_alpha(alpha);
    const double t = theta_alpha(alpha);
    return {-t, t, [t](double s) {
                const double q = s * s - t * t;
                return q * q;
            }};
}

double interface_cost(const DoubleWellSpec& spec)
{
    const double a = spec.well_left;
    const double b = spec.well_right;
    if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
        throw InvalidArgument("interface_cost: need well_left <= well_right");
    }
    if (!spec.potential) {
        throw InvalidArgument("interface_cost: missing potential");
    }
    if (a == b) {
        return 0.0;
    }
    constexpr int kSamples = 1001;
    for (int i = 0; i < kSamples; ++i) {
        const double s = a + (b - a) * i / (kSamples - 1);
        const double w = spec.potential(s);
        if (!(w >= 0.0)) {
            throw InvalidArgument("interface_cost: potential negative (or NaN) at s = " + std::to_string(s));
        }
    }
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double integral = gauss_kronrod<double, 31>::integrate(
        [&](double s) { return std::sqrt(std::max(0.0, spec.potential(s))); }, a, b, 15, 1e-14, &error);
    return 2.0 * integral;
}

double DiscreteFunctional::value(std::span<const double> v) const
{
    const std::size_t m = v.size();
    const double h = 1.0 / static_cast<double>(m - 1);
    const double w2 = well * well;
    double pot = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double q = v[j] * v[j] - w2;
        pot += (j == 0 || j + 1 == m ? 0.5 : 1.0) * q * q;
    }
    double grad = 0.0;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double d = v[j + 1] - v[j];
        grad += d * d;
    }
    return potential_weight * h * pot + gradient_weight * grad / h;
}

double DiscreteFunctional::value_and_gradient(std::span<const double> v, std::span<double> g) const
{
    const std::size_t m = v.size();
    const double h = 1.0 / static_cast<double>(m - 1);
    const double w2 = well * well;
    double pot = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double weight = j == 0 || j + 1 == m ? 0.5 : 1.0;
        const double q = v[j] * v[j] - w2;
        pot += weight * q * q;
        g[j] = potential_weight * h * weight * 4.0 * v[j] * q;
    }
    double grad = 0.0;
    const double c = 2.0 * gradient_weight / h;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double d = v[j + 1] - v[j];
        grad += d * d;
        g[j] -= c * d;
        g[j + 1] += c * d;
    }
    return potential_weight * h * pot + gradient_weight * grad / h;
}

double DiscreteFunctional::interface_width() const
{
    return std::sqrt(gradient_weight / potential_weight) / well;
}

DiscreteFunctional discretize(const FunctionalKind& kind)
{
    return std::visit(
        overloaded{
            [](const functional::F0& f) {
                if (!(f.l > 0.0) || !std::isfinite(f.l)) {
                    throw InvalidArgument("F0: l must be positive and finite");
                }
                return DiscreteFunctional{1.0 / f.l, f.l, 1.0, kInfinity};
            },
            [](const functional::G& f) {
                require_subcritical(f.n, f.alpha, f.crease, "G");
                const auto k = derive_constants(f.alpha, f.n).with_crease_energy(f.crease);
                const double lam = k.lambda_n_alpha;
                const double big_m = *k.M_alpha;
                return DiscreteFunctional{lam / k.mu_alpha, big_m * big_m / (lam * k.mu_alpha), 1.0, kInfinity};
            },
            [](const functional::H& f) {
                require_subcritical(f.n, f.alpha, f.crease, "H");
                const auto k = derive_constants(f.alpha, f.n).with_crease_energy(f.crease);
                const double lam = k.lambda_n_alpha;
                const double big_m = *k.M_alpha;
                const double t = k.theta_alpha;
                return DiscreteFunctional{lam / (t * t * t * t), big_m * big_m / (lam * t * t), t, kHalfPi};
            },
        },
        kind);
}

double evaluate_functional(const FunctionalKind& kind, const GridFunction& v)
{
    require_class(v, "functional");
    return discretize(kind).value(v.values());
}

double continuum_F0(const GridFunction& v, double l)
{
    return evaluate_functional(functional::F0{l}, v);
}

double mm_energy_G(const GridFunction& v, int n, double alpha, double crease)
{
    return evaluate_functional(functional::G{n, alpha, crease}, v);
}

double mm_energy_H(const GridFunction& theta, int n, double alpha, double crease)
{
    return evaluate_functional(functional::H{n, alpha, crease}, theta);
}

GridFunction tanh_profile(double l, double center, std::size_t grid)
{
    require_grid(grid);
    if (!(l > 0.0) || !std::isfinite(center)) {
        throw InvalidArgument("tanh_profile: l must be positive");
    }
    std::vector<double> v(grid);
    const double h = 1.0 / static_cast<double>(grid - 1);
    for (std::size_t j = 0; j < grid; ++j) {
        v[j] = std::tanh((static_cast<double>(j) * h - center) / l);
    }
    return GridFunction(std::move(v));
}

double equipartition_residual(const GridFunction& v, double l)
{
    if (!(l > 0.0)) {
        throw InvalidArgument("equipartition_residual: l must be positive");
    }
    const double h = v.spacing();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < v.size(); ++j) {
        const double dv = (v[j + 1] - v[j - 1]) / (2.0 * h);
        const double q = v[j] * v[j] - 1.0;
        worst = std::max(worst, std::abs(l * dv * dv - q * q / l));
    }
    return worst;
}

std::vector<GridPin> alternating_grid_pins(int k, double well)
{
    if (k < 0 || k % 2 != 0) {
        throw InvalidArgument("jump count must be even and nonnegative, got " + std::to_string(k));
    }
    std::vector<GridPin> pins;
    for (int j = 0; j < k; ++j) {
        pins.push_back({(j + 0.5) / k, j % 2 == 0 ? well : -well});
    }
    return pins;
}

FunctionalMinimum minimize_functional(const FunctionalKind& kind, std::size_t grid, std::span<const GridPin> pins,
                                      const ContinuumOptions& opts)
{
    require_grid(grid);
    const DiscreteFunctional fn = discretize(kind);
    const double s = coupling_sign(opts.coupling);
    const std::size_t m = grid;
    const std::size_t free_nodes = m - 1; // v_{m-1} = s v_0
    const double top = static_cast<double>(m - 1);

    // Pins snap to the nearest node; the last node is an image of the first.
    std::map<std::size_t, double> pinned;
    for (const auto& p : pins) {
        if (!(p.t >= 0.0 && p.t <= 1.0) || !std::isfinite(p.value)) {
            throw InvalidArgument("pin positions must lie in [0, 1]");
        }
        if (std::abs(p.value) > fn.bound) {
            throw InvalidArgument("pin value outside the admissible range");
        }
        auto j = static_cast<std::size_t>(std::llround(p.t * top));
        double value = p.value;
        if (j == m - 1) {
            j = 0;
            value *= s;
        }
        const auto [it, fresh] = pinned.emplace(j, value);
        if (!fresh && it->second != value) {
            throw InvalidArgument("conflicting pins on the same grid node");
        }
    }

    std::vector<double> x(free_nodes);
    std::visit(
        overloaded{
            [&](const grid_init::TanhFromPins&) {
                if (pinned.empty()) {
                    std::fill(x.begin(), x.end(), 0.5 * fn.well);
                    return;
                }
                std::vector<GridPin> sorted;
                for (const auto& [j, v] : pinned) {
                    sorted.push_back({static_cast<double>(j) / top, v});
                }
                std::vector<double> walls;
                for (std::size_t i = 0; i < sorted.size(); ++i) {
                    const auto& a = sorted[i];
                    const auto& b = sorted[(i + 1) % sorted.size()];
                    if ((a.value > 0.0) != (b.value > 0.0)) {
                        double mid = 0.5 * (a.t + b.t + (i + 1 == sorted.size() ? 1.0 : 0.0));
                        walls.push_back(mid - std::floor(mid));
                    }
                }
                const double width = std::max(fn.interface_width(), 1.0 / top);
                for (std::size_t j = 0; j < free_nodes; ++j) {
                    const double t = static_cast<double>(j) / top;
                    double nearest = 2.0, sign = 1.0;
                    for (const auto& p : sorted) {
                        const double d = cyclic_distance(t, p.t);
                        if (d < nearest) {
                            nearest = d;
                            sign = p.value >= 0.0 ? 1.0 : -1.0;
                        }
                    }
                    double mag = 1.0;
                    for (double w : walls) {
                        mag = std::min(mag, std::tanh(cyclic_distance(t, w) / width));
                    }
                    x[j] = sign * fn.well * mag;
                }
            },
            [&](const grid_init::Random& r) {
                std::mt19937_64 rng(r.seed);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                for (std::size_t j = 0; j < free_nodes; ++j) {
                    const double t = static_cast<double>(j) / top;
                    double nearest = 2.0, sign = 1.0;
                    for (const auto& [pj, v] : pinned) {
                        const double d = cyclic_distance(t, static_cast<double>(pj) / top);
                        if (d < nearest) {
                            nearest = d;
                            sign = v >= 0.0 ? 1.0 : -1.0;
                        }
                    }
                    // 1 - u lies in (0, 1]
                    x[j] = sign * fn.well * (1.0 - u(rng));
                }
            },
            [&](const grid_init::Explicit& e) {
                if (e.v.size() != m) {
                    throw InvalidArgument("explicit grid init has the wrong size");
                }
                std::copy_n(e.v.values().begin(), free_nodes, x.begin());
            },
        },
        opts.init);

    BoxProblem problem;
    problem.lower.assign(free_nodes, -fn.bound);
    problem.upper.assign(free_nodes, fn.bound);
    problem.fixed.assign(free_nodes, 0);
    for (const auto& [j, v] : pinned) {
        x[j] = v;
        problem.fixed[j] = 1;
    }
    problem.objective = [fn, s, m, full = std::vector<double>(m), g = std::vector<double>(m)](
                            std::span<const double> y, std::span<double> grad) mutable {
        std::copy(y.begin(), y.end(), full.begin());
        full[m - 1] = s * y[0];
        const double f = fn.value_and_gradient(full, g);
        std::copy_n(g.begin(), m - 1, grad.begin());
        grad[0] += s * g[m - 1];
        return f;
    };

    SolverResult r = minimize_box(problem, std::move(x), opts.solver);
    std::vector<double> v(m);
    std::copy(r.x.begin(), r.x.end(), v.begin());
    v[m - 1] = s * r.x[0];

    FunctionalMinimum out;
    out.value = fn.value(v);
    out.v = GridFunction(std::move(v));
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.projected_gradient_norm = r.projected_gradient_norm;
    return out;
}

std::size_t resolved_grid(const FunctionalKind& kind, std::size_t base, double nodes_per_width)
{
    require_grid(base);
    if (!(nodes_per_width > 0.0)) {
        throw InvalidArgument("resolved_grid: nodes_per_width must be positive");
    }
    const double width = discretize(kind).interface_width();
    const double wanted = std::ceil(nodes_per_width / width) + 1.0;
    if (!(wanted < static_cast<double>(kMaxGrid))) {
        return kMaxGrid;
    }
    return std::max(base, static_cast<std::size_t>(wanted));
}

double relative_gap(double a, double b)
{
    const double lo = std::min(std::abs(a), std::abs(b));
    const double d = std::abs(a - b);
    if (d == 0.0) {
        return 0.0;
    }
    return lo > 0.0 ? d / lo : kInfinity;
}

EquivalenceReport equivalence_report(int n, double alpha, int jumps, std::size_t base_grid)
{
    require_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw SingularPoint("alpha = 4 is the singular point: the scaled energies and G are undefined there");
    }
    if (jumps < 0 || jumps % 2 != 0) {
        throw InvalidArgument("jump count must be even and nonnegative, got " + std::to_string(jumps));
    }
    if (n < 3) {
        throw InvalidArgument("equivalence_report: n must be >= 3");
    }

    EquivalenceReport rep;
    rep.n = n;
    rep.alpha = alpha;
    rep.jumps = jumps;
    const CreaseResult crease = crease_energy(alpha);
    rep.crease = crease.energy;
    if (jumps == 0) {
        rep.converged = crease.converged;
        rep.grid = base_grid;
        return rep;
    }

    const ScaledMinimum discrete = min_scaled_energy(n, alpha, jumps);
    rep.discrete_minimum = discrete.value;

    const functional::G g{n, alpha, rep.crease};
    rep.grid = resolved_grid(g, base_grid);
    const auto pins = alternating_grid_pins(jumps);
    const FunctionalMinimum cont = minimize_functional(g, rep.grid, pins);
    rep.continuum_minimum = cont.value;

    const double eps = kCriticalAlpha - alpha;
    rep.prediction = 8.0 * rep.crease / (std::sqrt(2.0) * eps * std::sqrt(eps)) * jumps;
    rep.gap_discrete_continuum = relative_gap(rep.discrete_minimum, rep.continuum_minimum);
    rep.gap_discrete_prediction = relative_gap(rep.discrete_minimum, rep.prediction);
    rep.gap_continuum_prediction = relative_gap(rep.continuum_minimum, rep.prediction);
    rep.converged = crease.converged && discrete.converged && cont.converged;
    return rep;
}

} // namespace fafchain
