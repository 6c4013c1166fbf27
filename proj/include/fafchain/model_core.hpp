#pragma once

// Closed-form quantities of the planar F-AF spin chain: energies in spin and
// angle form, the effective double-well potential and the alpha-dependent
// constants that the scaling and continuum modules build on.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fafchain {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Critical frustration: helimagnetic below, ferromagnetic above.
inline constexpr double kCriticalAlpha = 4.0;

struct DerivedConstants {
    double alpha = 0.0;
    int n = 0;
    double theta_alpha = 0.0;    ///< arccos(alpha/4) on [0,4], 0 beyond
    double m_alpha = 0.0;        ///< minimal energy per site
    double mu_alpha = 0.0;       ///< sqrt(2)|4-alpha|^{3/2}/8
    double lambda_n_alpha = 0.0; ///< 2 n theta_alpha^4
    std::optional<double> M_alpha; ///< 3 C_alpha / 8 once the crease energy is known

    /// Copy with M_alpha filled from a crease energy C_alpha.
    DerivedConstants with_crease_energy(double crease) const;
};

DerivedConstants derive_constants(double alpha, int n);

double theta_alpha(double alpha);
double m_alpha(double alpha);
double mu_alpha(double alpha);

/// Throws InvalidArgument unless alpha is finite and nonnegative.
void require_alpha(double alpha);

/// W_alpha(theta) = cos 2theta - alpha cos theta - m_alpha, theta in J.
double effective_potential(double alpha, double theta);

/// Excess energy of a single bond (a, b):
/// cos(a+b) - alpha/2 (cos a + cos b) - m_alpha.
///
/// Evaluated through the exact split
///   W_alpha((a+b)/2) + 2 alpha cos((a+b)/2) sin^2((a-b)/4),
/// in which both pieces are nonnegative on J x J. The split keeps full
/// relative accuracy near the wells and near alpha = 4, where the direct
/// form loses everything to cancellation.
double bond_energy(double a, double b, double alpha);

/// Partial derivative of sum_i bond_energy(t_i, t_{i+1}) with respect to the
/// middle angle, given the left neighbour, the site and the right neighbour.
inline double site_gradient(double left, double self, double right, double alpha);

/// Periodic chain of oriented angles, each in J, indices taken mod n.
class AngleChain {
public:
    AngleChain() = default;
    explicit AngleChain(std::vector<double> thetas);

    static AngleChain constant(std::size_t n, double theta);

    std::size_t size() const noexcept { return thetas_.size(); }
    double operator[](std::size_t i) const noexcept { return thetas_[i]; }
    double cyclic(std::ptrdiff_t i) const noexcept;
    std::span<const double> values() const noexcept { return thetas_; }

private:
    std::vector<double> thetas_;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
Vec2 rotate(Vec2 v, double angle);

/// Planar unit spins with twisted-periodic indexing u^{i+n} = R(twist) u^i.
///
/// twist = 0 is the plain cyclic chain. A chain rebuilt from angles that do
/// not sum to a multiple of 2 pi carries the residual rotation here, so every
/// consecutive pair (and hence the energy) still matches the angle chain.
class SpinChain {
public:
    SpinChain() = default;
    explicit SpinChain(std::vector<Vec2> spins, double twist = 0.0);

    std::size_t size() const noexcept { return spins_.size(); }
    Vec2 operator[](std::size_t i) const noexcept { return spins_[i]; }
    /// Spin at any integer index, applying the twist once per wrap.
    Vec2 at(std::ptrdiff_t i) const;
    double twist() const noexcept { return twist_; }
    /// True if the chain closes on the circle (|twist| <= tol).
    bool closes(double tol = 1e-9) const noexcept;
    std::span<const Vec2> spins() const noexcept { return spins_; }

private:
    std::vector<Vec2> spins_;
    double twist_ = 0.0;
};

struct OrientedAngle {
    int chi = -1;      ///< sign of the determinant, sign(0) = -1
    double theta = 0.0; ///< chi * arccos((v,w)), in [-pi, pi)
};

OrientedAngle oriented_angle(Vec2 v, Vec2 w);

double energy_angles(const AngleChain& chain, double alpha);
/// Gradient of energy_angles with respect to each angle.
std::vector<double> energy_gradient(const AngleChain& chain, double alpha);
/// Same, on a raw periodic angle vector; writes into grad (same size).
double energy_and_gradient(std::span<const double> thetas, double alpha, std::span<double> grad);

double energy_spins(const SpinChain& chain, double alpha);

/// Rebuild spins by rotating u0 successively by each angle.
SpinChain spins_from_angles(const AngleChain& chain, Vec2 u0 = {1.0, 0.0});
AngleChain angles_from_spins(const SpinChain& chain);

/// Sum of angles reduced into [-pi, pi); zero iff the spins close.
double closure_defect(const AngleChain& chain);

/// sum_i W_alpha((theta^i + theta^{i+1})/2), a lower bound for energy_angles.
double potential_lower_bound(const AngleChain& chain, double alpha);

/// energy_angles / mu_alpha. Refuses alpha >= 4.
double scaled_energy(const AngleChain& chain, double alpha);

// ---------------------------------------------------------------------------

inline double site_gradient(double left, double self, double right, double alpha)
{
    return alpha * std::sin(self) - std::sin(left + self) - std::sin(self + right);
}

} // namespace fafchain

