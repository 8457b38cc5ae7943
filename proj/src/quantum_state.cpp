#include "qtunnel/quantum_state.hpp"

#include <cmath>

namespace qtunnel {

namespace {
constexpr double kBoundaryAmplitudeLimit = 1e-8;
}

WaveFunction gaussian_packet(const Grid& grid, double x0, double sigma, double k0) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be > 0");
    if (!std::isfinite(k0)) throw std::invalid_argument("gaussian_packet: k0 must be finite");

    const double left = x0;
    const double right = static_cast<double>(grid.n_sites - 1) - x0;
    if (left < 8.0 * sigma || right < 8.0 * sigma) {
        throw std::invalid_argument(
            "gaussian_packet: x0 must be at least 8*sigma from each boundary");
    }

    WaveFunction psi;
    psi.amplitudes.resize(grid.n_sites);
    double sumsq = 0.0;
    for (std::size_t j = 0; j < grid.n_sites; ++j) {
        const double x = static_cast<double>(j);
        const double dx = x - x0;
        const double envelope = std::exp(-dx * dx / (4.0 * sigma * sigma));
        psi.amplitudes[j] = envelope * std::polar(1.0, k0 * x);
        sumsq += envelope * envelope;
    }
    const double inv = 1.0 / std::sqrt(sumsq * Grid::spacing);
    for (cplx& a : psi.amplitudes) a *= inv;

    // The 8-sigma precondition alone leaves boundary amplitudes slightly
    // above 1e-8; check the actual values.
    if (std::abs(psi.amplitudes.front()) >= kBoundaryAmplitudeLimit ||
        std::abs(psi.amplitudes.back()) >= kBoundaryAmplitudeLimit) {
        throw std::invalid_argument(
            "gaussian_packet: x0 too close to a boundary, wall amplitude would exceed 1e-8");
    }
    return psi;
}

dvec sample_potential(const SquareBarrier& barrier, const Grid& grid, double k0) {
    if (barrier.start_site + barrier.width_d >= grid.n_sites - 1) {
        throw std::invalid_argument("sample_potential: barrier extends past the grid");
    }
    dvec pot(grid.n_sites, 0.0);
    const double v0 = barrier.v0(k0);
    for (std::size_t j = barrier.start_site; j < barrier.start_site + barrier.width_d; ++j) {
        pot[j] = v0;
    }
    return pot;
}

double norm(const WaveFunction& psi, kernels::Exec exec) {
    dvec dens(psi.size());
    kernels::density(exec, psi.amplitudes, dens);
    return kernels::sum(exec, dens, Region{0, dens.size()}) * Grid::spacing;
}

dvec density(const WaveFunction& psi, kernels::Exec exec) {
    dvec dens(psi.size());
    kernels::density(exec, psi.amplitudes, dens);
    return dens;
}

} // namespace qtunnel
