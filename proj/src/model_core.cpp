#include "fafchain/model_core.hpp"

#include "fafchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fafchain {

namespace {

constexpr double kAngleSlack = 1e-12;
constexpr double kUnitTol = 1e-9;

double clamp_to_j(double theta)
{
    return std::clamp(theta, -kHalfPi, kHalfPi);
}

bool in_j(double theta)
{
    return std::isfinite(theta) && std::abs(theta) <= kHalfPi + kAngleSlack;
}

// W_alpha as a function of s2 = sin^2(theta/2). Both branches are written as
// products of nonnegative factors so that values near the wells keep their
// relative precision.
double potential_from_half_sine(double alpha, double s2)
{
    const double eps = kCriticalAlpha - alpha;
    if (alpha <= kCriticalAlpha) {
        const double d = 0.25 * eps - 2.0 * s2; // cos(theta) - alpha/4
        return 2.0 * d * d;
    }
    return 2.0 * s2 * (4.0 * s2 - eps);
}

double reduce_angle(double a)
{
    // into [-pi, pi)
    double r = std::remainder(a, 2.0 * kPi);
    if (r >= kPi) {
        r -= 2.0 * kPi;
    }
    return r;
}

} // namespace

void require_alpha(double alpha)
{
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw InvalidArgument("frustration parameter alpha must be finite and >= 0, got " +
                              std::to_string(alpha));
    }
}

double theta_alpha(double alpha)
{
    require_alpha(alpha);
    return alpha <= kCriticalAlpha ? std::acos(alpha / 4.0) : 0.0;
}

double m_alpha(double alpha)
{
    require_alpha(alpha);
    if (alpha <= kCriticalAlpha) {
        return -(alpha * alpha / 8.0 + 1.0);
    }
    return -alpha + 1.0;
}

double mu_alpha(double alpha)
{
    require_alpha(alpha);
    const double eps = std::abs(kCriticalAlpha - alpha);
    return std::sqrt(2.0) * eps * std::sqrt(eps) / 8.0;
}

DerivedConstants derive_constants(double alpha, int n)
{
    require_alpha(alpha);
    if (n < 3) {
        throw InvalidArgument("chain length n must be >= 3, got " + std::to_string(n));
    }
    DerivedConstants c;
    c.alpha = alpha;
    c.n = n;
    c.theta_alpha = theta_alpha(alpha);
    c.m_alpha = m_alpha(alpha);
    c.mu_alpha = mu_alpha(alpha);
    const double t2 = c.theta_alpha * c.theta_alpha;
    c.lambda_n_alpha = 2.0 * n * t2 * t2;
    return c;
}

DerivedConstants DerivedConstants::with_crease_energy(double crease) const
{
    if (!std::isfinite(crease) || crease < 0.0) {
        throw InvalidArgument("crease energy must be finite and >= 0");
    }
    DerivedConstants out = *this;
    out.M_alpha = 3.0 * crease / 8.0;
    return out;
}

double effective_potential(double alpha, double theta)
{
    require_alpha(alpha);
    if (!in_j(theta)) {
        throw InvalidArgument("effective_potential: theta outside [-pi/2, pi/2]");
    }
    const double s = std::sin(0.5 * theta);
    return potential_from_half_sine(alpha, s * s);
}

double bond_energy(double a, double b, double alpha)
{
    const double mid = 0.5 * (a + b);
    const double sm = std::sin(0.5 * mid);
    const double sd = std::sin(0.25 * (a - b));
    return potential_from_half_sine(alpha, sm * sm) + 2.0 * alpha * std::cos(mid) * sd * sd;
}

// ---------------------------------------------------------------------------
// AngleChain

AngleChain::AngleChain(std::vector<double> thetas)
    : thetas_(std::move(thetas))
{
    if (thetas_.size() < 3) {
        throw InvalidArgument("angle chain needs n >= 3 sites, got " + std::to_string(thetas_.size()));
    }
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
        if (!in_j(thetas_[i])) {
            throw InvalidArgument("angle chain entry " + std::to_string(i) + " outside [-pi/2, pi/2]");
        }
        thetas_[i] = clamp_to_j(thetas_[i]);
    }
}

AngleChain AngleChain::constant(std::size_t n, double theta)
{
    return AngleChain(std::vector<double>(n, theta));
}

double AngleChain::cyclic(std::ptrdiff_t i) const noexcept
{
    const auto n = static_cast<std::ptrdiff_t>(thetas_.size());
    std::ptrdiff_t r = i % n;
    if (r < 0) {
        r += n;
    }
    return thetas_[static_cast<std::size_t>(r)];
}

// ---------------------------------------------------------------------------
// Spins

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

Vec2 rotate(Vec2 v, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

SpinChain::SpinChain(std::vector<Vec2> spins, double twist)
    : spins_(std::move(spins)), twist_(twist)
{
    if (spins_.size() < 3) {
        throw InvalidArgument("spin chain needs n >= 3 sites");
    }
    if (!std::isfinite(twist_)) {
        throw InvalidArgument("spin chain twist must be finite");
    }
    for (std::size_t i = 0; i < spins_.size(); ++i) {
        const double norm = std::hypot(spins_[i].x, spins_[i].y);
        if (!(std::abs(norm - 1.0) <= 1e-12)) {
            throw InvalidArgument("spin " + std::to_string(i) + " is not a unit vector");
        }
    }
}

Vec2 SpinChain::at(std::ptrdiff_t i) const
{
    const auto n = static_cast<std::ptrdiff_t>(spins_.size());
    std::ptrdiff_t q = i / n;
    std::ptrdiff_t r = i % n;
    if (r < 0) {
        r += n;
        --q;
    }
    const Vec2 base = spins_[static_cast<std::size_t>(r)];
    if (q == 0 || twist_ == 0.0) {
        return base;
    }
    return rotate(base, static_cast<double>(q) * twist_);
}

bool SpinChain::closes(double tol) const noexcept
{
    return std::abs(twist_) <= tol;
}

OrientedAngle oriented_angle(Vec2 v, Vec2 w)
{
    if (!(std::abs(std::hypot(v.x, v.y) - 1.0) <= kUnitTol) ||
        !(std::abs(std::hypot(w.x, w.y) - 1.0) <= kUnitTol)) {
        throw InvalidArgument("oriented_angle: inputs must be unit vectors");
    }
    const double det = cross(v, w);
    OrientedAngle out;
    out.chi = det > 0.0 ? 1 : -1;
    // |atan2(det, dot)| equals arccos(dot) but stays accurate for tiny angles.
    out.theta = out.chi * std::abs(std::atan2(det, dot(v, w)));
    if (out.theta >= kPi) {
        out.theta = -kPi;
    }
    return out;
}

double closure_defect(const AngleChain& chain)
{
    double sum = 0.0;
    for (double t : chain.values()) {
        sum += t;
    }
    return reduce_angle(sum);
}

SpinChain spins_from_angles(const AngleChain& chain, Vec2 u0)
{
    if (!(std::abs(std::hypot(u0.x, u0.y) - 1.0) <= kUnitTol)) {
        throw InvalidArgument("spins_from_angles: u0 must be a unit vector");
    }
    const std::size_t n = chain.size();
    std::vector<Vec2> spins(n);
    spins[0] = u0;
    // Absolute phases instead of repeated rotation keep every spin unit length.
    const double phi0 = std::atan2(u0.y, u0.x);
    double phi = phi0;
    for (std::size_t i = 1; i < n; ++i) {
        phi += chain[i - 1];
        spins[i] = {std::cos(phi), std::sin(phi)};
    }
    return SpinChain(std::move(spins), closure_defect(chain));
}

AngleChain angles_from_spins(const SpinChain& chain)
{
    const std::size_t n = chain.size();
    std::vector<double> thetas(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::ptrdiff_t>(i);
        const double t = oriented_angle(chain.at(k), chain.at(k + 1)).theta;
        if (!in_j(t)) {
            throw DomainViolation(i, t);
        }
        thetas[i] = clamp_to_j(t);
    }
    return AngleChain(std::move(thetas));
}

DomainViolation::DomainViolation(std::size_t index, double angle)
    : std::domain_error("oriented angle " + std::to_string(angle) + " at bond " + std::to_string(index) +
                        " lies outside [-pi/2, pi/2]"),
      index_(index), angle_(angle)
{
}

// ---------------------------------------------------------------------------
// Energies

double energy_angles(const AngleChain& chain, double alpha)
{
    require_alpha(alpha);
    const auto t = chain.values();
    const std::size_t n = t.size();
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        e += bond_energy(t[i], t[(i + 1) % n], alpha);
    }
    return e;
}

double energy_and_gradient(std::span<const double> t, double alpha, std::span<double> grad)
{
    const std::size_t n = t.size();
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = t[(i + n - 1) % n];
        const double right = t[(i + 1) % n];
        e += bond_energy(t[i], right, alpha);
        grad[i] = site_gradient(left, t[i], right, alpha);
    }
    return e;
}

std::vector<double> energy_gradient(const AngleChain& chain, double alpha)
{
    require_alpha(alpha);
    std::vector<double> g(chain.size());
    energy_and_gradient(chain.values(), alpha, g);
    return g;
}

double energy_spins(const SpinChain& chain, double alpha)
{
    require_alpha(alpha);
    const auto n = static_cast<std::ptrdiff_t>(chain.size());
    double p = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Vec2 u0 = chain.at(i);
        p += -alpha * dot(u0, chain.at(i + 1)) + dot(u0, chain.at(i + 2));
    }
    return p - static_cast<double>(n) * m_alpha(alpha);
}

double potential_lower_bound(const AngleChain& chain, double alpha)
{
    require_alpha(alpha);
    const auto t = chain.values();
    const std::size_t n = t.size();
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w += effective_potential(alpha, 0.5 * (t[i] + t[(i + 1) % n]));
    }
    return w;
}

double scaled_energy(const AngleChain& chain, double alpha)
{
    require_alpha(alpha);
    if (alpha >= kCriticalAlpha) {
        throw ScalingUndefined("scaled energy undefined for alpha >= 4: mu_alpha vanishes at the singular point");
    }
    return energy_angles(chain, alpha) / mu_alpha(alpha);
}

} // namespace fafchain
