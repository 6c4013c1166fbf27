#include "fafchain/crease.hpp"

#include "fafchain/errors.hpp"
#include "fafchain/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fafchain {

namespace {

void require_helimagnetic(double alpha, const char* what)
{
    require_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw InvalidArgument(std::string(what) +
                              ": the chirality wall is trivial for alpha >= 4 (C_alpha = 0 there)");
    }
}

double left_value(double alpha, WallOrientation o)
{
    const double t = theta_alpha(alpha);
    return o == WallOrientation::minus_to_plus ? -t : t;
}

double window_energy(std::span<const double> t, double alpha)
{
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        e += bond_energy(t[i], t[i + 1], alpha);
    }
    return e;
}

double window_energy_and_gradient(std::span<const double> t, double alpha, std::span<double> g)
{
    const std::size_t m = t.size();
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        e += bond_energy(t[i], t[i + 1], alpha);
    }
    // End sites are clamped; their neighbours outside the window share the
    // clamped value, so the formula below is exact there too.
    for (std::size_t i = 0; i < m; ++i) {
        const double left = i == 0 ? t[0] : t[i - 1];
        const double right = i + 1 == m ? t[m - 1] : t[i + 1];
        g[i] = site_gradient(left, t[i], right, alpha);
    }
    return e;
}

} // namespace

double CreaseProfile::at(int i) const
{
    if (i <= -half_width) {
        return thetas.front();
    }
    if (i >= half_width) {
        return thetas.back();
    }
    return thetas[static_cast<std::size_t>(i + half_width)];
}

double crease_window_energy(const CreaseProfile& p)
{
    return window_energy(p.thetas, p.alpha);
}

std::vector<double> crease_window_gradient(const CreaseProfile& p)
{
    std::vector<double> g(p.thetas.size());
    window_energy_and_gradient(p.thetas, p.alpha, g);
    if (g.size() >= 2) {
        g.erase(g.begin());
        g.pop_back();
    }
    return g;
}

int crease_initial_half_width(double alpha)
{
    require_helimagnetic(alpha, "crease_initial_half_width");
    return std::max(8, static_cast<int>(std::ceil(4.0 / std::sqrt(kCriticalAlpha - alpha))));
}

CreaseProfile crease_initial_profile(double alpha, int half_width, CreaseStart start, WallOrientation orientation)
{
    require_helimagnetic(alpha, "crease_initial_profile");
    if (half_width < 2) {
        throw InvalidArgument("crease window half-width must be >= 2");
    }
    const double ta = theta_alpha(alpha);
    const double s = orientation == WallOrientation::minus_to_plus ? 1.0 : -1.0;
    const double rate = std::sqrt(kCriticalAlpha - alpha) / std::sqrt(2.0);
    CreaseProfile p;
    p.half_width = half_width;
    p.alpha = alpha;
    p.orientation = orientation;
    p.thetas.resize(static_cast<std::size_t>(2 * half_width + 1));
    for (int i = -half_width; i <= half_width; ++i) {
        double v = 0.0;
        if (start == CreaseStart::tanh) {
            v = s * ta * std::tanh(i * rate);
        } else {
            v = s * ta * (i > 0 ? 1.0 : -1.0);
        }
        p.thetas[static_cast<std::size_t>(i + half_width)] = std::clamp(v, -kHalfPi, kHalfPi);
    }
    p.thetas.front() = left_value(alpha, orientation);
    p.thetas.back() = -left_value(alpha, orientation);
    return p;
}

CreaseResult solve_crease_window(double alpha, int half_width, const CreaseOptions& opts,
                                 const std::optional<CreaseProfile>& start_from)
{
    require_helimagnetic(alpha, "solve_crease_window");
    if (half_width < 2) {
        throw InvalidArgument("crease window half-width must be >= 2");
    }

    CreaseProfile profile;
    if (start_from) {
        // Embed a smaller (or equal) window; sites beyond it take the clamped values.
        const CreaseProfile& src = *start_from;
        if (src.half_width > half_width || src.orientation != opts.orientation || src.alpha != alpha) {
            throw InvalidArgument("solve_crease_window: incompatible starting profile");
        }
        profile.half_width = half_width;
        profile.alpha = alpha;
        profile.orientation = opts.orientation;
        profile.thetas.resize(static_cast<std::size_t>(2 * half_width + 1));
        for (int i = -half_width; i <= half_width; ++i) {
            profile.thetas[static_cast<std::size_t>(i + half_width)] = src.at(i);
        }
    } else {
        profile = crease_initial_profile(alpha, half_width, opts.start, opts.orientation);
    }

    const std::size_t m = profile.thetas.size();
    BoxProblem problem;
    problem.lower.assign(m, -kHalfPi);
    problem.upper.assign(m, kHalfPi);
    problem.fixed.assign(m, 0);
    problem.fixed.front() = 1;
    problem.fixed.back() = 1;
    problem.objective = [alpha](std::span<const double> x, std::span<double> g) {
        return window_energy_and_gradient(x, alpha, g);
    };

    SolverResult r = minimize_box(problem, profile.thetas, opts.solver);
    profile.thetas = std::move(r.x);

    CreaseResult out;
    out.energy = crease_window_energy(profile);
    out.profile = std::move(profile);
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.window_history.push_back({half_width, out.energy, out.converged});
    return out;
}

CreaseResult crease_energy(double alpha, double rel_tol, const CreaseOptions& opts)
{
    require_helimagnetic(alpha, "crease_energy");
    if (!(rel_tol > 0.0)) {
        throw InvalidArgument("crease_energy: rel_tol must be positive");
    }
    int half_width = crease_initial_half_width(alpha);

    CreaseResult best = solve_crease_window(alpha, half_width, opts);
    std::vector<WindowSample> history = best.window_history;
    int iterations = best.iterations;
    bool all_windows_converged = best.converged;

    for (;;) {
        const int next = 2 * half_width;
        if (next > opts.max_half_width) {
            best.converged = false;
            break;
        }
        CreaseResult wider = solve_crease_window(alpha, next, opts, best.profile);
        history.push_back(wider.window_history.front());
        iterations += wider.iterations;
        all_windows_converged = all_windows_converged && wider.converged;
        const double previous = best.energy;
        const bool saturated = std::abs(wider.energy - previous) <= rel_tol * previous;
        best = std::move(wider);
        half_width = next;
        if (saturated) {
            best.converged = best.converged && all_windows_converged;
            break;
        }
    }
    best.window_history = std::move(history);
    best.iterations = iterations;
    return best;
}

double crease_upper_bound(double alpha)
{
    require_alpha(alpha);
    if (alpha > kCriticalAlpha) {
        throw InvalidArgument("crease_upper_bound: defined for alpha in [0, 4]");
    }
    const double eps = kCriticalAlpha - alpha;
    return eps - eps * eps / 8.0;
}

double crease_asymptotic_prediction(double alpha)
{
    require_alpha(alpha);
    if (alpha > kCriticalAlpha) {
        throw InvalidArgument("crease_asymptotic_prediction: defined for alpha in [0, 4]");
    }
    const double eps = kCriticalAlpha - alpha;
    return std::sqrt(2.0) / 3.0 * eps * std::sqrt(eps);
}

ContinuityScan continuity_scan(std::span<const double> alphas, double rel_tol, const CreaseOptions& opts,
                               unsigned threads)
{
    if (alphas.empty()) {
        throw InvalidArgument("continuity_scan: empty alpha grid");
    }
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        require_helimagnetic(alphas[i], "continuity_scan");
        if (i > 0 && !(alphas[i] > alphas[i - 1])) {
            throw InvalidArgument("continuity_scan: alpha grid must be strictly increasing");
        }
    }

    ContinuityScan scan;
    scan.rows.resize(alphas.size());
    parallel_for_index(alphas.size(), threads, [&](std::size_t i) {
        const CreaseResult r = crease_energy(alphas[i], rel_tol, opts);
        scan.rows[i] = {alphas[i], r.energy, r.converged, r.profile.half_width};
    });

    for (std::size_t i = 1; i < scan.rows.size(); ++i) {
        const auto& a = scan.rows[i - 1];
        const auto& b = scan.rows[i];
        scan.lipschitz_estimate =
            std::max(scan.lipschitz_estimate, std::abs(b.energy - a.energy) / (b.alpha - a.alpha));
        if (b.energy > a.energy) {
            scan.monotone_decreasing = false;
        }
    }
    return scan;
}

PowerLawFit fit_asymptotics(std::span<const std::pair<double, double>> table)
{
    if (table.size() < 5) {
        throw InvalidArgument("fit_asymptotics: need at least 5 points, got " + std::to_string(table.size()));
    }
    double sx = 0.0, sy = 0.0;
    std::vector<double> xs, ys;
    for (const auto& [alpha, c] : table) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw InvalidArgument("fit_asymptotics: crease energies must be positive");
        }
        if (!(alpha < kCriticalAlpha)) {
            throw InvalidArgument("fit_asymptotics: alpha must be below 4");
        }
        xs.push_back(std::log(kCriticalAlpha - alpha));
        ys.push_back(std::log(c));
        sx += xs.back();
        sy += ys.back();
    }
    const double k = static_cast<double>(xs.size());
    const double mx = sx / k;
    const double my = sy / k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InvalidArgument("fit_asymptotics: alpha values must not all coincide");
    }
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<double> asymptotic_alpha_grid(double alpha_min, double alpha_max, int points)
{
    require_alpha(alpha_min);
    if (!(alpha_max > alpha_min) || !(alpha_max < kCriticalAlpha) || points < 2) {
        throw InvalidArgument("asymptotic_alpha_grid: need alpha_min < alpha_max < 4 and >= 2 points");
    }
    const double lo = std::log(kCriticalAlpha - alpha_max);
    const double hi = std::log(kCriticalAlpha - alpha_min);
    std::vector<double> alphas(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        // decreasing epsilon -> increasing alpha
        const double e = std::exp(hi + (lo - hi) * i / (points - 1));
        alphas[static_cast<std::size_t>(i)] = kCriticalAlpha - e;
    }
    alphas.front() = alpha_min;
    alphas.back() = alpha_max;
    return alphas;
}

} // namespace fafchain
