#include "fafchain/optimizer.hpp"

#include "fafchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace fafchain {

namespace {

// Relative size of objective changes treated as rounding noise.
constexpr double kRoundoffSlack = 1e-13;

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho = 0.0;
};

bool is_fixed(const BoxProblem& p, std::size_t i)
{
    return !p.fixed.empty() && p.fixed[i] != 0;
}

double masked_dot(std::span<const double> a, std::span<const double> b, const std::vector<char>& mask)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask[i]) {
            s += a[i] * b[i];
        }
    }
    return s;
}

// Two-loop recursion restricted to the free coordinates.
std::vector<double> lbfgs_direction(std::span<const double> g, const std::deque<CurvaturePair>& memory,
                                    const std::vector<char>& free)
{
    const std::size_t n = g.size();
    std::vector<double> q(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = free[i] ? g[i] : 0.0;
    }
    std::vector<double> a(memory.size());
    for (std::size_t k = memory.size(); k-- > 0;) {
        const auto& m = memory[k];
        a[k] = m.rho * masked_dot(m.s, q, free);
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                q[i] -= a[k] * m.y[i];
            }
        }
    }
    double gamma = 1.0;
    if (!memory.empty()) {
        const auto& last = memory.back();
        const double yy = masked_dot(last.y, last.y, free);
        const double sy = masked_dot(last.s, last.y, free);
        if (yy > 0.0 && sy > 0.0) {
            gamma = sy / yy;
        }
    }
    for (double& v : q) {
        v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
        const auto& m = memory[k];
        const double b = m.rho * masked_dot(m.y, q, free);
        for (std::size_t i = 0; i < n; ++i) {
            if (free[i]) {
                q[i] += m.s[i] * (a[k] - b);
            }
        }
    }
    for (double& v : q) {
        v = -v;
    }
    return q;
}

} // namespace

double projected_gradient_norm(const BoxProblem& p, std::span<const double> x, std::span<const double> g)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_fixed(p, i)) {
            continue;
        }
        const double moved = std::clamp(x[i] - g[i], p.lower[i], p.upper[i]);
        worst = std::max(worst, std::abs(x[i] - moved));
    }
    return worst;
}

SolverResult minimize_box(const BoxProblem& p, std::vector<double> x, const SolverSettings& settings)
{
    const std::size_t n = x.size();
    if (p.lower.size() != n || p.upper.size() != n || (!p.fixed.empty() && p.fixed.size() != n)) {
        throw InvalidArgument("minimize_box: bound or mask size mismatch");
    }
    if (settings.max_iterations <= 0 || !(settings.gradient_tolerance > 0.0)) {
        throw InvalidArgument("minimize_box: iteration budget and gradient tolerance must be positive");
    }
    const StepControl& step = settings.step;
    if (!(step.initial_step > 0.0) || !(step.shrink > 0.0 && step.shrink < 1.0) ||
        !(step.sufficient_decrease > 0.0 && step.sufficient_decrease < 1.0)) {
        throw InvalidArgument("minimize_box: invalid backtracking parameters");
    }

    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::clamp(x[i], p.lower[i], p.upper[i]);
    }

    std::vector<double> g(n), xn(n), gn(n);
    double f = p.objective(x, g);

    SolverResult result;
    if (settings.record_trace) {
        result.trace.push_back(f);
    }

    std::deque<CurvaturePair> memory;
    std::vector<char> free(n);
    const bool quasi_newton = settings.rule == DescentRule::projected_lbfgs;

    int it = 0;
    for (;; ++it) {
        result.projected_gradient_norm = projected_gradient_norm(p, x, g);
        if (result.projected_gradient_norm <= settings.gradient_tolerance) {
            result.converged = true;
            break;
        }
        if (it >= settings.max_iterations) {
            break;
        }

        // Coordinates sitting on a bound with the gradient pushing outward stay put.
        for (std::size_t i = 0; i < n; ++i) {
            const bool at_lower = x[i] <= p.lower[i] && g[i] > 0.0;
            const bool at_upper = x[i] >= p.upper[i] && g[i] < 0.0;
            free[i] = !is_fixed(p, i) && !at_lower && !at_upper;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            const bool use_memory = quasi_newton && attempt == 0 && !memory.empty();
            std::vector<double> d;
            if (use_memory) {
                d = lbfgs_direction(g, memory, free);
                if (!(masked_dot(g, d, free) < 0.0)) {
                    continue;
                }
            } else {
                d.assign(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    d[i] = free[i] ? -g[i] : 0.0;
                }
            }

            double t = use_memory ? 1.0 : step.initial_step;
            for (int bt = 0; bt <= step.max_backtracks; ++bt, t *= step.shrink) {
                for (std::size_t i = 0; i < n; ++i) {
                    xn[i] = free[i] ? std::clamp(x[i] + t * d[i], p.lower[i], p.upper[i]) : x[i];
                }
                double predicted = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    predicted += g[i] * (xn[i] - x[i]);
                }
                if (!(predicted < 0.0)) {
                    break;
                }
                const double fn = p.objective(xn, gn);
                bool ok = std::isfinite(fn) && fn <= f + step.sufficient_decrease * predicted;
                if (!ok && std::isfinite(fn) && fn <= f + kRoundoffSlack * std::abs(f)) {
                    // Decrease below what f can resolve: fall back to the slope
                    // condition of the approximate Armijo rule.
                    double slope = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        slope += gn[i] * (xn[i] - x[i]);
                    }
                    ok = slope <= (1.0 - 2.0 * step.sufficient_decrease) * -predicted;
                }
                if (ok) {
                    double sy = 0.0, ss = 0.0, yy = 0.0;
                    CurvaturePair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
                    for (std::size_t i = 0; i < n; ++i) {
                        pair.s[i] = xn[i] - x[i];
                        pair.y[i] = gn[i] - g[i];
                        sy += pair.s[i] * pair.y[i];
                        ss += pair.s[i] * pair.s[i];
                        yy += pair.y[i] * pair.y[i];
                    }
                    if (quasi_newton && sy > 1e-12 * std::sqrt(ss * yy)) {
                        pair.rho = 1.0 / sy;
                        memory.push_back(std::move(pair));
                        if (static_cast<int>(memory.size()) > settings.memory) {
                            memory.pop_front();
                        }
                    }
                    x.swap(xn);
                    g.swap(gn);
                    f = fn;
                    accepted = true;
                    break;
                }
            }
            if (!accepted && use_memory) {
                memory.clear();
            }
        }
        if (!accepted) {
            // No decrease representable along the gradient: stalled at roundoff.
            break;
        }
        if (settings.record_trace) {
            result.trace.push_back(f);
        }
    }

    result.iterations = it;
    result.value = f;
    result.x = std::move(x);
    return result;
}

} // namespace fafchain
