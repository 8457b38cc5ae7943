#pragma once

// Closed-form references used by tests and acceptance checks: exact free
// Gaussian evolution, stationary square-barrier transmission, and group
// velocities. These are continuum formulas; comparisons against the
// lattice simulation must say whether they use the continuum dispersion
// k^2/2 or the lattice dispersion E(k) = 1 - cos k.

#include <cstddef>

#include "qtunnel/types.hpp"

namespace qtunnel::analytic {

struct FreeGaussianParams {
    double x0;     ///< initial center
    double sigma0; ///< initial std of the position density
    double k0;     ///< wave number

    FreeGaussianParams(double x0_, double sigma0_, double k0_)
        : x0(x0_), sigma0(sigma0_), k0(k0_) {
        if (!(sigma0 > 0.0))
            throw std::invalid_argument("FreeGaussianParams: sigma0 must be > 0");
    }
};

/// Density std at time t: sigma(t)^2 = sigma0^2 + (t/(2 sigma0))^2.
double free_gaussian_width(const FreeGaussianParams& p, double t);

/// |psi(x,t)|^2 of the exact free solution (hbar = m = 1): a normalized
/// Gaussian centered at x0 + k0 t with the width above.
double free_gaussian_density(const FreeGaussianParams& p, double x, double t);

/// Textbook square-barrier transmission probability for a plane wave of
/// energy E against a barrier of height V0 and width d. Continuous across
/// E = V0 where it takes the limit value 1/(1 + E d^2 / 2).
double plane_wave_transmission(double E, double V0, double d);

/// Continuum group velocity, just k0 in natural units.
double group_velocity(double k0);

/// Lattice group velocity sin(k0) implied by E(k) = 1 - cos k; use this
/// for tight trajectory checks against the simulation.
double lattice_group_velocity(double k0);

/// Lattice kinetic energy of the 3-point stencil.
double lattice_dispersion(double k);

/// Momentum density of the initial Gaussian packet: a normalized Gaussian
/// in k centered at k0 with std 1/(2 sigma).
double gaussian_momentum_density(double sigma, double k0, double k);

/// Momentum-filter quadrature: integral of |psi0_tilde(k)|^2 T(E(k)) dk
/// with the lattice dispersion, i.e. the transmitted norm a stationary
/// filter predicts for the packet. Simpson rule over k0 +- 8 sigma_k.
double transmission_quadrature(double sigma, double k0, double V0, double d);

/// Same quadrature weighted by k: predicted mean wave number of the
/// transmitted part (normalized by the transmitted norm).
double transmitted_mean_k_quadrature(double sigma, double k0, double V0, double d);

} // namespace qtunnel::analytic
