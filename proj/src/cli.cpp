#include "fafchain/cli.hpp"

#include "fafchain/continuum.hpp"
#include "fafchain/crease.hpp"
#include "fafchain/errors.hpp"
#include "fafchain/ground_state.hpp"
#include "fafchain/scaling.hpp"
#include "fafchain/table_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>

namespace fafchain::cli {

namespace {

constexpr const char* kVersion = "fafchain 1.0.0";

struct Common {
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool gnuplot = false;
    bool timing = false;
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Cell num(double x) { return x; }
Cell integer(long long x) { return static_cast<std::int64_t>(x); }
Cell text(std::string s) { return Cell(std::move(s)); }

void check_alpha(double alpha)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("alpha must be finite and >= 0");
    }
}

void check_subcritical(double alpha, const std::string& what)
{
    check_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw SingularPoint(what + " needs alpha < 4: alpha = 4 is the singular point, where mu_alpha and "
                                   "the crease energy vanish");
    }
}

void check_n(int n)
{
    if (n < 3) {
        throw InvalidArgument("n must be >= 3, got " + std::to_string(n));
    }
}

void check_jumps(int k)
{
    if (k < 0 || k % 2 != 0) {
        throw InvalidArgument("jump count must be even and nonnegative (periodic chains), got " + std::to_string(k));
    }
}

void check_positive(double x, const std::string& name)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw InvalidArgument(name + " must be positive");
    }
}

bool all_converged(const Report& r)
{
    auto ok = [](const SweepRow& row) {
        for (const auto& f : row.flags) {
            if (f.key == "converged" && !std::get<bool>(f.value)) {
                return false;
            }
        }
        return true;
    };
    if (r.summary && !ok(*r.summary)) {
        return false;
    }
    for (const auto& row : r.rows) {
        if (!ok(row)) {
            return false;
        }
    }
    return true;
}

void solver_metadata(Report& r, int max_iterations, double tolerance)
{
    r.metadata.push_back({"solver", text("projected L-BFGS, Armijo backtracking")});
    r.metadata.push_back({"solver_max_iterations", integer(max_iterations)});
    r.metadata.push_back({"solver_gradient_tolerance", num(tolerance)});
}

// ---- energy -------------------------------------------------------------

struct EnergyArgs {
    double alpha = 0.0;
    int n = 0;
    std::string constant;
    std::vector<double> angles;
    bool random = false;
};

Report cmd_energy(const EnergyArgs& a, const Common& c)
{
    check_alpha(a.alpha);
    Stopwatch clock;
    std::vector<double> thetas;
    std::string how;
    const int modes = (!a.constant.empty()) + (!a.angles.empty()) + (a.random ? 1 : 0);
    if (modes > 1) {
        throw InvalidArgument("energy: choose one of --constant, --angles, --random");
    }
    if (!a.angles.empty()) {
        thetas = a.angles;
        how = "angles";
    } else {
        check_n(a.n);
        if (a.random) {
            thetas = initial_chain(static_cast<std::size_t>(a.n), a.alpha, init::Random{c.seed});
            how = "random";
        } else {
            how = a.constant.empty() ? "theta-alpha" : a.constant;
            const double t = theta_alpha(a.alpha);
            double v = 0.0;
            if (how == "theta-alpha") {
                v = t;
            } else if (how == "minus-theta-alpha") {
                v = -t;
            } else if (how != "zero") {
                throw InvalidArgument("energy: --constant takes theta-alpha, minus-theta-alpha or zero");
            }
            thetas.assign(static_cast<std::size_t>(a.n), v);
        }
    }
    const AngleChain chain(std::move(thetas));

    Report r;
    r.metadata.push_back({"command", text("energy")});
    r.metadata.push_back({"version", text(kVersion)});
    SweepRow row;
    row.input("alpha", num(a.alpha)).input("n", integer(static_cast<long long>(chain.size()))).input("chain", text(how));
    if (how == "random") {
        row.input("seed", text(std::to_string(c.seed)));
    }
    row.output("energy", num(energy_angles(chain, a.alpha)))
        .output("potential_lower_bound", num(potential_lower_bound(chain, a.alpha)))
        .output("m_alpha", num(m_alpha(a.alpha)))
        .output("closure_defect", num(closure_defect(chain)))
        .output("jump_count", integer(chirality_profile(chain).jump_count));
    if (a.alpha < kCriticalAlpha) {
        row.output("scaled_energy", num(scaled_energy(chain, a.alpha)));
    }
    row.flag("converged", true);
    row.wall_seconds = clock.seconds();
    r.summary = std::move(row);
    return r;
}

// ---- minimize -----------------------------------------------------------

struct MinimizeArgs {
    double alpha = 0.0;
    int n = 0;
    int jumps = 0;
    std::string init = "default";
    int max_iterations = 10000;
    double tolerance = 1e-10;
    bool profile = false;
};

Report cmd_minimize(const MinimizeArgs& a, const Common& c)
{
    check_alpha(a.alpha);
    check_n(a.n);
    check_jumps(a.jumps);
    check_positive(a.tolerance, "--tol");
    if (a.max_iterations <= 0) {
        throw InvalidArgument("--max-iter must be positive");
    }
    if (a.jumps > 0) {
        check_subcritical(a.alpha, "minimize with forced jumps");
        if (a.jumps > a.n / 2) {
            throw InvalidArgument("minimize: at most n/2 jumps fit on the chain");
        }
    }

    MinimizeOptions opts;
    opts.max_iterations = a.max_iterations;
    opts.gradient_tolerance = a.tolerance;
    std::string how = a.init;
    if (how == "default") {
        how = a.jumps > 0 ? "tanh" : "constant";
    }
    if (how == "constant") {
        opts.init = init::Constant{+1};
    } else if (how == "random") {
        opts.init = init::Random{c.seed};
    } else if (how == "tanh") {
        opts.init = init::TanhWalls{alternating_wall_positions(a.n, a.jumps)};
    } else {
        throw InvalidArgument("minimize: --init takes constant, random or tanh");
    }

    Stopwatch clock;
    const ChainMinimum m = a.jumps > 0 ? minimize_constrained(a.n, a.alpha, alternating_pins(a.n, a.alpha, a.jumps), opts)
                                       : minimize_periodic(a.n, a.alpha, opts);

    Report r;
    r.metadata.push_back({"command", text("minimize")});
    r.metadata.push_back({"version", text(kVersion)});
    solver_metadata(r, a.max_iterations, a.tolerance);
    r.metadata.push_back({"pins", text("k alternating pins +-theta_alpha at sites round((j+1/2) n/k)")});

    SweepRow row;
    row.input("alpha", num(a.alpha)).input("n", integer(a.n)).input("jumps", integer(a.jumps)).input("init", text(how));
    if (how == "random") {
        row.input("seed", text(std::to_string(c.seed)));
    }
    row.output("energy", num(m.energy))
        .output("iterations", integer(m.iterations))
        .output("projected_gradient_norm", num(m.projected_gradient_norm))
        .output("jump_count", integer(chirality_profile(m.chain).jump_count))
        .output("theta_alpha", num(theta_alpha(a.alpha)));
    if (a.alpha < kCriticalAlpha) {
        row.output("scaled_energy", num(m.energy / mu_alpha(a.alpha)));
    }
    row.flag("converged", m.converged);
    row.wall_seconds = clock.seconds();
    r.summary = std::move(row);

    if (a.profile) {
        r.rows_key = "profile";
        for (std::size_t i = 0; i < m.chain.size(); ++i) {
            SweepRow p;
            p.input("site", integer(static_cast<long long>(i))).output("theta", num(m.chain[i]));
            p.flag("converged", m.converged);
            r.rows.push_back(std::move(p));
        }
    }
    return r;
}

// ---- crease -------------------------------------------------------------

struct CreaseArgs {
    double alpha = 0.0;
    double rel_tol = 1e-8;
    int max_half_width = 16384;
    std::string start = "tanh";
};

CreaseOptions crease_options(const CreaseArgs& a)
{
    check_positive(a.rel_tol, "--rel-tol");
    if (a.max_half_width < 8) {
        throw InvalidArgument("--max-half-width must be >= 8");
    }
    CreaseOptions o;
    o.max_half_width = a.max_half_width;
    if (a.start == "tanh") {
        o.start = CreaseStart::tanh;
    } else if (a.start == "sign") {
        o.start = CreaseStart::sign;
    } else {
        throw InvalidArgument("--start takes tanh or sign");
    }
    return o;
}

void crease_metadata(Report& r, const CreaseArgs& a, const CreaseOptions& o)
{
    r.metadata.push_back({"rel_tol", num(a.rel_tol)});
    r.metadata.push_back({"initial_half_width", text("max(8, ceil(4/sqrt(4-alpha)))")});
    r.metadata.push_back({"max_half_width", integer(a.max_half_width)});
    r.metadata.push_back({"start", text(a.start)});
    solver_metadata(r, o.solver.max_iterations, o.solver.gradient_tolerance);
}

Report cmd_crease(const CreaseArgs& a, const Common&)
{
    check_subcritical(a.alpha, "crease");
    const CreaseOptions o = crease_options(a);
    Stopwatch clock;
    const CreaseResult res = crease_energy(a.alpha, a.rel_tol, o);

    Report r;
    r.metadata.push_back({"command", text("crease")});
    r.metadata.push_back({"version", text(kVersion)});
    crease_metadata(r, a, o);

    SweepRow row;
    row.input("alpha", num(a.alpha))
        .output("C", num(res.energy))
        .output("N_final", integer(res.profile.half_width))
        .output("iterations", integer(res.iterations))
        .output("upper_bound", num(crease_upper_bound(a.alpha)))
        .output("asymptotic_prediction", num(crease_asymptotic_prediction(a.alpha)))
        .flag("converged", res.converged);
    row.wall_seconds = clock.seconds();
    r.summary = std::move(row);

    r.rows_key = "history";
    for (const auto& w : res.window_history) {
        SweepRow h;
        h.input("N", integer(w.half_width)).output("energy", num(w.energy)).flag("converged", w.converged);
        r.rows.push_back(std::move(h));
    }
    return r;
}

// ---- crease-sweep / fit-asymptotics -------------------------------------

struct SweepArgs {
    CreaseArgs crease;
    double alpha_min = 0.0;
    double alpha_max = 3.99;
    int points = 20;
};

SweepRow crease_row(const CreaseSample& s)
{
    SweepRow row;
    row.input("alpha", num(s.alpha))
        .output("C", num(s.energy))
        .output("N_final", integer(s.final_half_width))
        .output("upper_bound", num(crease_upper_bound(s.alpha)))
        .output("epsilon", num(kCriticalAlpha - s.alpha))
        .output("asymptotic_prediction", num(crease_asymptotic_prediction(s.alpha)))
        .flag("converged", s.converged);
    return row;
}

Report cmd_crease_sweep(const SweepArgs& a, const Common& c)
{
    check_subcritical(a.alpha_min, "crease-sweep");
    check_subcritical(a.alpha_max, "crease-sweep");
    if (a.points < 2 || !(a.alpha_max > a.alpha_min)) {
        throw InvalidArgument("crease-sweep: need alpha-min < alpha-max and >= 2 points");
    }
    const CreaseOptions o = crease_options(a.crease);
    std::vector<double> alphas(static_cast<std::size_t>(a.points));
    for (int i = 0; i < a.points; ++i) {
        alphas[static_cast<std::size_t>(i)] = a.alpha_min + (a.alpha_max - a.alpha_min) * i / (a.points - 1);
    }
    Stopwatch clock;
    const ContinuityScan scan = continuity_scan(alphas, a.crease.rel_tol, o, c.threads);

    Report r;
    r.metadata.push_back({"command", text("crease-sweep")});
    r.metadata.push_back({"version", text(kVersion)});
    crease_metadata(r, a.crease, o);
    r.metadata.push_back({"alpha_grid", text("linear")});
    SweepRow summary;
    summary.input("alpha_min", num(a.alpha_min))
        .input("alpha_max", num(a.alpha_max))
        .input("points", integer(a.points))
        .output("lipschitz_estimate", num(scan.lipschitz_estimate))
        .flag("monotone_decreasing", scan.monotone_decreasing);
    bool ok = true;
    for (const auto& s : scan.rows) {
        r.rows.push_back(crease_row(s));
        ok = ok && s.converged;
    }
    summary.flag("converged", ok);
    summary.wall_seconds = clock.seconds();
    r.summary = std::move(summary);
    return r;
}

Report cmd_fit(const SweepArgs& a, const Common& c)
{
    check_subcritical(a.alpha_min, "fit-asymptotics");
    check_subcritical(a.alpha_max, "fit-asymptotics");
    if (a.points < 5) {
        throw InvalidArgument("fit-asymptotics: need at least 5 points");
    }
    const CreaseOptions o = crease_options(a.crease);
    const std::vector<double> alphas = asymptotic_alpha_grid(a.alpha_min, a.alpha_max, a.points);
    Stopwatch clock;
    const ContinuityScan scan = continuity_scan(alphas, a.crease.rel_tol, o, c.threads);
    std::vector<std::pair<double, double>> table;
    bool ok = true;
    for (const auto& s : scan.rows) {
        table.emplace_back(s.alpha, s.energy);
        ok = ok && s.converged;
    }
    const PowerLawFit fit = fit_asymptotics(table);

    Report r;
    r.metadata.push_back({"command", text("fit-asymptotics")});
    r.metadata.push_back({"version", text(kVersion)});
    crease_metadata(r, a.crease, o);
    r.metadata.push_back({"alpha_grid", text("4 - alpha log-spaced")});
    r.metadata.push_back({"fit", text("least squares of log C on log(4 - alpha)")});
    SweepRow summary;
    summary.input("alpha_min", num(a.alpha_min))
        .input("alpha_max", num(a.alpha_max))
        .input("points", integer(a.points))
        .output("exponent", num(fit.exponent))
        .output("prefactor", num(fit.prefactor))
        .output("r_squared", num(fit.r_squared))
        .output("reference_exponent", num(1.5))
        .output("reference_prefactor", num(std::sqrt(2.0) / 3.0))
        .flag("converged", ok);
    summary.wall_seconds = clock.seconds();
    r.summary = std::move(summary);
    for (const auto& s : scan.rows) {
        r.rows.push_back(crease_row(s));
    }
    return r;
}

// ---- regimes / mm-compare / phase-diagram -------------------------------

struct RegimeArgs {
    int n = 0;
    double alpha = 0.0;
    int jumps = 2;
    std::size_t grid = 2048;
};

void regime_metadata(Report& r, std::size_t grid)
{
    r.metadata.push_back({"l_value", text("sqrt(2) / (4 n sqrt(4 - alpha))")});
    r.metadata.push_back({"sharp_candidate", text("(8/3) k")});
    r.metadata.push_back({"diffuse_candidate", text("min F0 with k alternating pins at t = (j+1/2)/k")});
    r.metadata.push_back({"ferro_threshold", text("2 x sharp candidate (classifier convention)")});
    r.metadata.push_back({"continuum_grid", integer(static_cast<long long>(grid))});
    const auto defaults = scaled_minimize_defaults();
    solver_metadata(r, defaults.max_iterations, defaults.gradient_tolerance);
}

SweepRow regime_row(const RegimePoint& p)
{
    SweepRow row;
    row.input("n", integer(p.n))
        .input("alpha", num(p.alpha))
        .output("epsilon", num(p.epsilon))
        .output("l_value", num(p.l_value))
        .output("measured", num(p.measured))
        .output("sharp_candidate", num(p.sharp_candidate))
        .output("diffuse_candidate", num(p.diffuse_candidate))
        .output("regime", text(p.error.empty() ? std::string(to_string(p.regime_label)) : "error"))
        .output("iterations", integer(p.iterations))
        .output("error", text(p.error))
        .flag("converged", p.converged && p.error.empty());
    row.wall_seconds = p.wall_seconds;
    return row;
}

void check_grid(std::size_t grid)
{
    if (grid < GridFunction::kMinNodes) {
        throw InvalidArgument("--grid must be >= 64");
    }
}

Report cmd_regimes(const RegimeArgs& a, const Common&)
{
    check_subcritical(a.alpha, "regimes");
    check_n(a.n);
    check_jumps(a.jumps);
    check_grid(a.grid);
    if (a.jumps < 2 || a.jumps > a.n / 2) {
        throw InvalidArgument("regimes: need 2 <= jumps <= n/2");
    }
    const int ns[] = {a.n};
    const double alphas[] = {a.alpha};
    PhaseDiagramOptions o;
    o.grid = a.grid;
    o.threads = 1;
    const auto rows = phase_diagram(ns, alphas, a.jumps, o);
    if (!rows.front().error.empty()) {
        throw InvalidArgument(rows.front().error);
    }
    Report r;
    r.metadata.push_back({"command", text("regimes")});
    r.metadata.push_back({"version", text(kVersion)});
    regime_metadata(r, a.grid);
    SweepRow row = regime_row(rows.front());
    row.input("jumps", integer(a.jumps));
    row.output("ferro_threshold", num(2.0 * rows.front().sharp_candidate));
    r.summary = std::move(row);
    return r;
}

Report cmd_mm_compare(const RegimeArgs& a, const Common&)
{
    check_subcritical(a.alpha, "mm-compare");
    check_n(a.n);
    check_jumps(a.jumps);
    check_grid(a.grid);
    Stopwatch clock;
    const EquivalenceReport e = equivalence_report(a.n, a.alpha, a.jumps, a.grid);
    Report r;
    r.metadata.push_back({"command", text("mm-compare")});
    r.metadata.push_back({"version", text(kVersion)});
    r.metadata.push_back({"base_grid", integer(static_cast<long long>(a.grid))});
    r.metadata.push_back({"grid_rule", text("max(base, 16 nodes per interface width + 1)")});
    r.metadata.push_back({"endpoint_coupling", text("periodic")});
    r.metadata.push_back({"crease_rel_tol", num(1e-8)});
    SweepRow row;
    row.input("n", integer(a.n))
        .input("alpha", num(a.alpha))
        .input("jumps", integer(a.jumps))
        .output("C", num(e.crease))
        .output("discrete_minimum", num(e.discrete_minimum))
        .output("continuum_minimum", num(e.continuum_minimum))
        .output("prediction", num(e.prediction))
        .output("gap_discrete_continuum", num(e.gap_discrete_continuum))
        .output("gap_discrete_prediction", num(e.gap_discrete_prediction))
        .output("gap_continuum_prediction", num(e.gap_continuum_prediction))
        .output("grid", integer(static_cast<long long>(e.grid)))
        .flag("converged", e.converged);
    row.wall_seconds = clock.seconds();
    r.summary = std::move(row);
    return r;
}

struct PhaseArgs {
    std::vector<int> n_values{10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
    std::vector<double> alpha_values;
    double alpha_min = 3.9;
    double alpha_max = 3.99999;
    int alpha_points = 10;
    int jumps = 2;
    std::size_t grid = 1024;
};

Report cmd_phase(const PhaseArgs& a, const Common& c)
{
    check_jumps(a.jumps);
    check_grid(a.grid);
    std::vector<double> alphas = a.alpha_values;
    if (alphas.empty()) {
        check_subcritical(a.alpha_min, "phase-diagram");
        check_subcritical(a.alpha_max, "phase-diagram");
        if (a.alpha_points < 2 || !(a.alpha_max > a.alpha_min)) {
            throw InvalidArgument("phase-diagram: need alpha-min < alpha-max and >= 2 alpha points");
        }
        alphas = asymptotic_alpha_grid(a.alpha_min, a.alpha_max, a.alpha_points);
    }
    for (double x : alphas) {
        check_subcritical(x, "phase-diagram");
    }
    for (int n : a.n_values) {
        check_n(n);
    }
    PhaseDiagramOptions o;
    o.grid = a.grid;
    o.threads = c.threads;
    const auto points = phase_diagram(a.n_values, alphas, a.jumps, o);

    Report r;
    r.metadata.push_back({"command", text("phase-diagram")});
    r.metadata.push_back({"version", text(kVersion)});
    r.metadata.push_back({"jumps", integer(a.jumps)});
    regime_metadata(r, a.grid);
    for (const auto& p : points) {
        r.rows.push_back(regime_row(p));
    }
    return r;
}

std::filesystem::path gnuplot_path(const std::string& out)
{
    std::filesystem::path p(out);
    p.replace_extension(".dat");
    return p;
}

int dispatch(const Common& common, const std::function<Report()>& build, std::ostream& out)
{
    const Report report = build();
    Format format = Format::csv;
    if (!common.format.empty()) {
        format = parse_format(common.format);
    } else if (std::filesystem::path(common.out).extension() == ".json") {
        format = Format::json;
    }
    if (common.out.empty()) {
        if (common.gnuplot) {
            throw InvalidArgument("--gnuplot needs --out");
        }
        out << (format == Format::csv ? render_csv(report, common.timing) : render_json(report, common.timing));
    } else {
        emit_table(report, format, common.out, common.timing);
        if (common.gnuplot) {
            write_text(gnuplot_path(common.out), render_gnuplot(report));
        }
    }
    return all_converged(report) ? kSuccess : kNotConverged;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Frustrated ferromagnetic/antiferromagnetic spin chains: energies, chirality walls, "
                 "near-critical regimes"};
    app.name("fafchain");
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--out", common.out, "Output file (default: standard output)");
    app.add_option("--format", common.format, "csv or json (default: from --out extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", common.seed, "Seed for random initial configurations");
    app.add_option("--threads", common.threads, "Worker threads for sweeps (0: available parallelism)");
    app.add_flag("--gnuplot", common.gnuplot, "Also write a whitespace-separated .dat next to --out");
    app.add_flag("--timing", common.timing, "Add wall-clock seconds to every row");

    std::function<Report()> build;

    EnergyArgs energy;
    auto* e = app.add_subcommand("energy", "Energy of a chain");
    e->add_option("--alpha", energy.alpha, "Frustration parameter")->required();
    e->add_option("--n", energy.n, "Number of sites");
    e->add_option("--constant", energy.constant, "theta-alpha, minus-theta-alpha or zero");
    e->add_option("--angles", energy.angles, "Comma-separated oriented angles")->delimiter(',');
    e->add_flag("--random", energy.random, "Uniform random angles (uses --seed)");
    e->callback([&] { build = [&] { return cmd_energy(energy, common); }; });

    MinimizeArgs minimize;
    auto* m = app.add_subcommand("minimize", "Minimize the chain energy, optionally with forced chirality jumps");
    m->add_option("--alpha", minimize.alpha, "Frustration parameter")->required();
    m->add_option("--n", minimize.n, "Number of sites")->required();
    m->add_option("--jumps", minimize.jumps, "Even number of forced chirality jumps");
    m->add_option("--init", minimize.init, "constant, random or tanh");
    m->add_option("--max-iter", minimize.max_iterations, "Iteration budget");
    m->add_option("--tol", minimize.tolerance, "Projected-gradient tolerance");
    m->add_flag("--profile", minimize.profile, "Emit the minimizing angles as rows");
    m->callback([&] { build = [&] { return cmd_minimize(minimize, common); }; });

    auto crease_flags = [](CLI::App* sub, CreaseArgs& a) {
        sub->add_option("--rel-tol", a.rel_tol, "Relative window-doubling tolerance");
        sub->add_option("--max-half-width", a.max_half_width, "Largest window half-width");
        sub->add_option("--start", a.start, "tanh or sign initial profile");
    };

    CreaseArgs crease;
    auto* c = app.add_subcommand("crease", "Chirality-wall energy C_alpha");
    c->add_option("--alpha", crease.alpha, "Frustration parameter in [0, 4)")->required();
    crease_flags(c, crease);
    c->callback([&] { build = [&] { return cmd_crease(crease, common); }; });

    SweepArgs sweep;
    auto* cs = app.add_subcommand("crease-sweep", "C_alpha on a linear alpha grid");
    cs->add_option("--alpha-min", sweep.alpha_min);
    cs->add_option("--alpha-max", sweep.alpha_max);
    cs->add_option("--points", sweep.points);
    crease_flags(cs, sweep.crease);
    cs->callback([&] { build = [&] { return cmd_crease_sweep(sweep, common); }; });

    SweepArgs fit;
    fit.alpha_min = 3.9;
    fit.alpha_max = 3.999;
    fit.points = 12;
    auto* f = app.add_subcommand("fit-asymptotics", "Log-log fit of C_alpha against 4 - alpha");
    f->add_option("--alpha-min", fit.alpha_min);
    f->add_option("--alpha-max", fit.alpha_max);
    f->add_option("--points", fit.points);
    crease_flags(f, fit.crease);
    f->callback([&] { build = [&] { return cmd_fit(fit, common); }; });

    RegimeArgs regimes;
    auto* rg = app.add_subcommand("regimes", "Scaled minimum and regime label at one (n, alpha)");
    rg->add_option("--n", regimes.n)->required();
    rg->add_option("--alpha", regimes.alpha)->required();
    rg->add_option("--jumps", regimes.jumps);
    rg->add_option("--grid", regimes.grid, "Continuum grid for the diffuse candidate");
    rg->callback([&] { build = [&] { return cmd_regimes(regimes, common); }; });

    RegimeArgs mm;
    auto* mc = app.add_subcommand("mm-compare", "Discrete minimum vs Modica-Mortola minimum vs prediction");
    mc->add_option("--n", mm.n)->required();
    mc->add_option("--alpha", mm.alpha)->required();
    mc->add_option("--jumps", mm.jumps);
    mc->add_option("--grid", mm.grid, "Base continuum grid");
    mc->callback([&] { build = [&] { return cmd_mm_compare(mm, common); }; });

    PhaseArgs phase;
    auto* pd = app.add_subcommand("phase-diagram", "Regime labels over an (n, alpha) grid");
    pd->add_option("--n-values", phase.n_values)->delimiter(',');
    pd->add_option("--alpha-values", phase.alpha_values)->delimiter(',');
    pd->add_option("--alpha-min", phase.alpha_min);
    pd->add_option("--alpha-max", phase.alpha_max);
    pd->add_option("--alpha-points", phase.alpha_points);
    pd->add_option("--jumps", phase.jumps);
    pd->add_option("--grid", phase.grid);
    pd->callback([&] { build = [&] { return cmd_phase(phase, common); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n\n" << app.help();
        return kValidationError;
    }

    try {
        return dispatch(common, build, out);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kValidationError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"fafchain"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace fafchain::cli
