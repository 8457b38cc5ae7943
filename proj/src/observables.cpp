#include "qtunnel/observables.hpp"

#include <cmath>
#include <limits>

namespace qtunnel {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

double max_position(std::span<const double> dens, Region region, kernels::Exec exec) {
    if (region.empty() || region.end > dens.size()) {
        throw std::invalid_argument("max_position: region empty or outside the grid");
    }
    const kernels::ArgmaxResult peak = kernels::argmax(exec, dens, region);
    if (!(peak.value > 0.0)) {
        throw NoPacketError("max_position: no strictly positive density in region");
    }
    const std::size_t j = peak.index;
    if (j == region.begin || j + 1 == region.end) {
        return static_cast<double>(j); // edge: no neighbors for the fit
    }
    const double ym = dens[j - 1];
    const double y0 = dens[j];
    const double yp = dens[j + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return static_cast<double>(j); // flat top
    const double delta = 0.5 * (ym - yp) / denom;
    return static_cast<double>(j) + delta;
}

double region_norm(const WaveFunction& psi, Region region, kernels::Exec exec) {
    if (region.end > psi.size()) {
        throw std::invalid_argument("region_norm: region outside the grid");
    }
    if (region.empty()) return 0.0;
    dvec dens(psi.size());
    kernels::density(exec, psi.amplitudes, dens);
    return kernels::sum(exec, dens, region) * Grid::spacing;
}

double shift_vs_free(const WaveFunction& psi_tunneled, const WaveFunction& psi_free,
                     const SquareBarrier& barrier, const Grid& grid, kernels::Exec exec) {
    if (psi_tunneled.size() != grid.n_sites || psi_free.size() != grid.n_sites) {
        throw std::invalid_argument("shift_vs_free: wave functions not on the given grid");
    }
    const Region trans = barrier.transmitted_region(grid);
    if (region_norm(psi_tunneled, trans, exec) <= kTransmissionFloor) {
        throw NoPacketError("shift_vs_free: nothing transmitted");
    }
    const dvec dens_tun = density(psi_tunneled, exec);
    const dvec dens_free = density(psi_free, exec);
    return max_position(dens_tun, trans, exec) - max_position(dens_free, grid.whole(), exec);
}

double envelope_check(std::span<const double> dens_tunneled, std::span<const double> dens_free,
                      const SquareBarrier& barrier, const Grid& grid) {
    if (dens_tunneled.size() != grid.n_sites || dens_free.size() != grid.n_sites) {
        throw std::invalid_argument("envelope_check: density arrays not on the given grid");
    }
    const Region trans = barrier.transmitted_region(grid);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = trans.begin; j < trans.end; ++j) {
        const double excess = dens_tunneled[j] - dens_free[j];
        if (excess > worst) worst = excess;
    }
    return worst;
}

MomentumDistribution momentum_distribution(const WaveFunction& psi, Region region,
                                           kernels::Exec exec) {
    if (region.end > psi.size() || region.size() < 16) {
        throw std::invalid_argument("momentum_distribution: region too small (need >= 16 sites)");
    }
    const std::size_t n = psi.size();
    MomentumDistribution out;
    out.k.resize(n);
    out.weight.resize(n);
    kernels::dft_power(exec, psi.amplitudes, region, out.weight);

    // Fold bins m > n/2 to negative momenta so k lies in (-pi, pi].
    for (std::size_t m = 0; m < n; ++m) {
        double k = 2.0 * kPi * static_cast<double>(m) / static_cast<double>(n);
        if (k > kPi) k -= 2.0 * kPi;
        out.k[m] = k;
    }

    double wsum = 0.0;
    double ksum = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (out.k[m] > 0.0) {
            wsum += out.weight[m];
            ksum += out.k[m] * out.weight[m];
        }
    }
    out.mean_positive_k = wsum > 0.0 ? ksum / wsum : 0.0;
    return out;
}

} // namespace qtunnel
