#include "fafchain/ground_state.hpp"

#include "fafchain/errors.hpp"
#include "fafchain/overloaded.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fafchain {

namespace {

constexpr double kConstantInit = kHalfPi / 2.0;

void require_n(int n)
{
    if (n < 3) {
        throw InvalidArgument("chain length n must be >= 3, got " + std::to_string(n));
    }
}

double wall_width_sites(double alpha)
{
    const double t = theta_alpha(alpha);
    return t > 0.0 ? 1.0 / t : 1.0;
}

} // namespace

SolverSettings MinimizeOptions::solver_settings() const
{
    SolverSettings s;
    s.max_iterations = max_iterations;
    s.gradient_tolerance = gradient_tolerance;
    s.step = step_control;
    s.rule = rule;
    s.record_trace = record_trace;
    return s;
}

void MinimizeOptions::validate(std::size_t n) const
{
    if (max_iterations <= 0 || !(gradient_tolerance > 0.0)) {
        throw InvalidArgument("minimize options: iterations and tolerance must be positive");
    }
    if (const auto* walls = std::get_if<init::TanhWalls>(&init)) {
        const auto& p = walls->positions;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!(p[i] >= 0.0 && p[i] < static_cast<double>(n))) {
                throw InvalidArgument("tanh-wall positions must lie in [0, n)");
            }
            if (i > 0 && !(p[i] > p[i - 1])) {
                throw InvalidArgument("tanh-wall positions must be strictly increasing");
            }
        }
    }
    if (const auto* e = std::get_if<init::Explicit>(&init)) {
        if (e->chain.size() != n) {
            throw InvalidArgument("explicit init has the wrong length");
        }
    }
    if (const auto* c = std::get_if<init::Constant>(&init)) {
        if (c->sign != 1 && c->sign != -1) {
            throw InvalidArgument("constant init sign must be +1 or -1");
        }
    }
}

std::vector<double> initial_chain(std::size_t n, double alpha, const ChainInit& how)
{
    std::vector<double> t(n, 0.0);
    std::visit(overloaded{
                   [&](const init::Constant& c) { std::fill(t.begin(), t.end(), c.sign * kConstantInit); },
                   [&](const init::Random& r) {
                       std::mt19937_64 rng(r.seed);
                       std::uniform_real_distribution<double> u(-kHalfPi, kHalfPi);
                       for (double& v : t) {
                           v = u(rng);
                       }
                   },
                   [&](const init::TanhWalls& w) {
                       const double ta = theta_alpha(alpha);
                       if (w.positions.empty()) {
                           std::fill(t.begin(), t.end(), ta);
                           return;
                       }
                       const double width = wall_width_sites(alpha);
                       const auto nd = static_cast<double>(n);
                       const auto& p = w.positions;
                       for (std::size_t i = 0; i < n; ++i) {
                           const double x = static_cast<double>(i);
                           // domain index: last wall at or before x (cyclically)
                           std::size_t dom = p.size() - 1;
                           for (std::size_t j = 0; j < p.size(); ++j) {
                               if (p[j] <= x) {
                                   dom = j;
                               }
                           }
                           const double sign = (dom % 2 == 0) ? 1.0 : -1.0;
                           double dist = nd;
                           for (double q : p) {
                               const double d = std::abs(x - q);
                               dist = std::min({dist, d, nd - d});
                           }
                           t[i] = std::clamp(sign * ta * std::tanh(dist / width), -kHalfPi, kHalfPi);
                       }
                   },
                   [&](const init::Explicit& e) {
                       const auto v = e.chain.values();
                       std::copy(v.begin(), v.end(), t.begin());
                   },
               },
               how);
    return t;
}

ChainMinimum minimize_constrained(int n, double alpha, const PinSet& pins, const MinimizeOptions& opts)
{
    require_n(n);
    require_alpha(alpha);
    const auto size = static_cast<std::size_t>(n);
    opts.validate(size);

    BoxProblem problem;
    problem.lower.assign(size, -kHalfPi);
    problem.upper.assign(size, kHalfPi);
    problem.fixed.assign(size, 0);

    std::vector<double> x0 = initial_chain(size, alpha, opts.init);
    for (const Pin& pin : pins) {
        if (pin.site >= size) {
            throw InvalidArgument("pin site " + std::to_string(pin.site) + " outside the chain");
        }
        if (problem.fixed[pin.site]) {
            throw InvalidArgument("pin site " + std::to_string(pin.site) + " pinned twice");
        }
        if (!(std::abs(pin.angle) <= kHalfPi)) {
            throw InvalidArgument("pinned angle outside [-pi/2, pi/2]");
        }
        problem.fixed[pin.site] = 1;
        x0[pin.site] = pin.angle;
    }
    problem.objective = [alpha](std::span<const double> x, std::span<double> g) {
        return energy_and_gradient(x, alpha, g);
    };

    SolverResult r = minimize_box(problem, std::move(x0), opts.solver_settings());

    ChainMinimum out;
    out.chain = AngleChain(std::move(r.x));
    out.energy = energy_angles(out.chain, alpha);
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.projected_gradient_norm = r.projected_gradient_norm;
    out.trace = std::move(r.trace);
    return out;
}

ChainMinimum minimize_periodic(int n, double alpha, const MinimizeOptions& opts)
{
    return minimize_constrained(n, alpha, {}, opts);
}

GridMinimum brute_force_minimum(int n, double alpha, int grid_points)
{
    require_n(n);
    require_alpha(alpha);
    if (grid_points < 3 || grid_points % 2 == 0) {
        throw InvalidArgument("grid must have an odd number (>= 3) of points so that 0 and +-pi/2 are nodes");
    }
    if (n > 8 || grid_points > 41) {
        throw CostGuard("brute force limited to n <= 8 and at most 41 grid points");
    }
    const double total = std::pow(static_cast<double>(grid_points), n);
    if (total > 1e9) {
        throw CostGuard("brute force refused: grid_points^n exceeds 1e9 chains");
    }

    const auto g = static_cast<std::size_t>(grid_points);
    std::vector<double> nodes(g);
    for (std::size_t a = 0; a < g; ++a) {
        nodes[a] = -kHalfPi + kPi * static_cast<double>(a) / static_cast<double>(g - 1);
    }
    nodes[(g - 1) / 2] = 0.0;

    // P-contribution of one bond in the plain cosine form.
    std::vector<double> bond(g * g);
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t b = 0; b < g; ++b) {
            bond[a * g + b] = std::cos(nodes[a] + nodes[b]) - 0.5 * alpha * (std::cos(nodes[a]) + std::cos(nodes[b]));
        }
    }

    const auto len = static_cast<std::size_t>(n);
    std::vector<std::size_t> idx(len, 0), best(len, 0);
    std::vector<double> partial(len + 1, 0.0);
    double best_p = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;

    // Odometer enumeration; partial[k] holds the open-chain sum over bonds (0,1)..(k-1,k).
    std::size_t depth = 1;
    for (;;) {
        for (std::size_t k = depth; k < len; ++k) {
            partial[k] = partial[k - 1] + bond[idx[k - 1] * g + idx[k]];
        }
        const double p = partial[len - 1] + bond[idx[len - 1] * g + idx[0]];
        ++count;
        if (p < best_p) {
            best_p = p;
            best = idx;
        }
        std::size_t k = len;
        while (k > 0) {
            --k;
            if (++idx[k] < g) {
                break;
            }
            idx[k] = 0;
            if (k == 0) {
                k = len + 1;
                break;
            }
        }
        if (k == len + 1) {
            break;
        }
        depth = std::max<std::size_t>(k, 1);
    }

    std::vector<double> chain(len);
    for (std::size_t i = 0; i < len; ++i) {
        chain[i] = nodes[best[i]];
    }
    GridMinimum out;
    out.chain = AngleChain(std::move(chain));
    out.energy_per_site_p = best_p / n;
    out.energy = best_p - n * m_alpha(alpha);
    out.evaluated = count;
    return out;
}

ChiralityProfile chirality_profile(const AngleChain& chain, double dead_zone)
{
    if (!(dead_zone >= 0.0)) {
        throw InvalidArgument("dead zone must be >= 0");
    }
    const std::size_t n = chain.size();
    ChiralityProfile out;
    out.signs.assign(n, 0);

    std::size_t seed = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(chain[i]) > dead_zone) {
            seed = i;
            break;
        }
    }
    if (seed == n) {
        out.zero_chirality = true;
        std::fill(out.signs.begin(), out.signs.end(), -1);
        return out;
    }
    // Walk once around the ring from the seed so dead-zone sites inherit the
    // sign of the nearest resolved predecessor.
    int current = chain[seed] > 0.0 ? 1 : -1;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = (seed + step) % n;
        if (chain[i] > dead_zone) {
            current = 1;
        } else if (chain[i] < -dead_zone) {
            current = -1;
        }
        out.signs[i] = current;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (out.signs[i] != out.signs[(i + n - 1) % n]) {
            out.jump_positions.push_back(i);
        }
    }
    out.jump_count = static_cast<int>(out.jump_positions.size());
    return out;
}

PinSet alternating_pins(int n, double alpha, int k)
{
    require_n(n);
    if (k < 0 || k % 2 != 0) {
        throw InvalidArgument("jump count must be even and >= 0 on a periodic chain, got " + std::to_string(k));
    }
    if (k > n / 2) {
        throw InvalidArgument("too many jumps for the chain length");
    }
    const double ta = theta_alpha(alpha);
    PinSet pins;
    for (int j = 0; j < k; ++j) {
        const auto site = static_cast<std::size_t>(std::lround((j + 0.5) * n / k)) % static_cast<std::size_t>(n);
        pins.push_back({site, (j % 2 == 0) ? ta : -ta});
    }
    return pins;
}

std::vector<double> alternating_wall_positions(int n, int k)
{
    std::vector<double> p;
    for (int j = 0; j < k; ++j) {
        p.push_back(static_cast<double>(j) * n / k);
    }
    return p;
}

} // namespace fafchain
