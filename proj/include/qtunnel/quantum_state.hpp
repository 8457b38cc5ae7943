#pragma once

// Lattice, wave function, Gaussian initial condition and square-barrier
// potential. Units: hbar = 1, particle mass = 1, lattice spacing = 1 site,
// so energies are in hbar^2/(m site^2) and wave numbers in 1/site.

#include <cstddef>
#include <span>

#include "qtunnel/kernels.hpp"
#include "qtunnel/types.hpp"

namespace qtunnel {

/// 1D lattice with unit spacing and hard-wall boundaries. The walls sit
/// just outside the stored range: psi(-1) = psi(n_sites) = 0, which the
/// propagator encodes by dropping the couplings beyond the end sites.
struct Grid {
    std::size_t n_sites;

    static constexpr double spacing = 1.0;

    explicit Grid(std::size_t n) : n_sites(n) {
        if (n < 3) throw std::invalid_argument("Grid: n_sites must be >= 3");
    }

    Region whole() const { return Region{0, n_sites}; }
};

/// Complex amplitude per site. Plain value type; always paired with the
/// Grid it was built on.
struct WaveFunction {
    cvec amplitudes;

    std::size_t size() const { return amplitudes.size(); }
};

/// Square barrier of width_d sites starting at start_site. The height is
/// given as the dimensionless ratio h = V0 / E0 where E0 = k0^2/2 is the
/// incident kinetic energy, so the barrier is bound to a k0 at sampling
/// time.
struct SquareBarrier {
    std::size_t start_site;
    std::size_t width_d;
    double height_ratio_h;

    SquareBarrier(std::size_t start, std::size_t d, double h)
        : start_site(start), width_d(d), height_ratio_h(h) {
        if (h < 0.0) throw std::invalid_argument("SquareBarrier: height_ratio_h must be >= 0");
    }

    /// V0 = h * k0^2 / 2.
    double v0(double k0) const { return height_ratio_h * 0.5 * k0 * k0; }

    /// Sites occupied by the barrier, [start, start + d).
    Region support() const { return Region{start_site, start_site + width_d}; }

    /// Sites strictly right of the last barrier site.
    Region transmitted_region(const Grid& grid) const {
        return Region{start_site + width_d, grid.n_sites};
    }

    /// Sites strictly left of the first barrier site.
    Region reflected_region(const Grid&) const { return Region{0, start_site}; }
};

/// Normalized Gaussian wave packet: psi_j ~ exp(-(x_j-x0)^2/(4 sigma^2))
/// exp(i k0 x_j). sigma is the standard deviation of the position density
/// |psi|^2, not of psi itself (the two conventions differ by sqrt(2)).
/// Rejects packets whose tails would touch the hard walls: both boundary
/// amplitudes must come out below 1e-8 in magnitude.
WaveFunction gaussian_packet(const Grid& grid, double x0, double sigma, double k0);

/// Potential energy per site for a barrier bound to incident wave number
/// k0: V_j = h k0^2/2 on [start, start+d), 0 elsewhere.
dvec sample_potential(const SquareBarrier& barrier, const Grid& grid, double k0);

/// Total probability sum_j |psi_j|^2 * spacing.
double norm(const WaveFunction& psi, kernels::Exec exec = kernels::Exec::parallel);

/// Per-site probability density |psi_j|^2.
dvec density(const WaveFunction& psi, kernels::Exec exec = kernels::Exec::parallel);

} // namespace qtunnel
