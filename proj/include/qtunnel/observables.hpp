#pragma once

// The paper's measured quantities: sub-grid maximum positions,
// transmitted/reflected norms, the shift of the transmitted maximum
// against the free reference, the envelope bound, and momentum-space
// diagnostics of the transmitted part.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qtunnel/kernels.hpp"
#include "qtunnel/quantum_state.hpp"
#include "qtunnel/types.hpp"

namespace qtunnel {

/// Transmitted norm below which a run counts as "nothing transmitted".
inline constexpr double kTransmissionFloor = 1e-12;

/// Observables of one paired (barrier, free) simulation over time. All
/// arrays share one length; samples where the transmitted maximum is not
/// yet well defined (norm below kTransmissionFloor, or the region argmax
/// still sitting on the region edge while the packet enters) carry NaN in
/// max_transmitted and shift.
struct RunRecord {
    dvec times;
    dvec max_free;
    dvec max_transmitted;
    dvec shift;
    dvec transmitted_norm;
    dvec reflected_norm;
    /// max over sampled times and sites beyond the barrier of
    /// (tunneled density - free density); <= 0 confirms the envelope bound.
    double envelope_violation = 0.0;
    std::vector<std::string> flags;

    std::size_t samples() const { return times.size(); }
};

/// Position of the density maximum within a region, refined by fitting a
/// parabola through the grid argmax and its two neighbors (vertex
/// returned). At the region edges the grid argmax is returned unrefined.
/// Ties break to the smallest site index. Throws NoPacketError when no
/// strictly positive density is present.
double max_position(std::span<const double> dens, Region region,
                    kernels::Exec exec = kernels::Exec::parallel);

/// Probability contained in a region: sum of |psi_j|^2 * spacing.
double region_norm(const WaveFunction& psi, Region region,
                   kernels::Exec exec = kernels::Exec::parallel);

/// Shift of the transmitted maximum against the free maximum at the same
/// time: max_position over the transmitted region of the tunneled run
/// minus max_position over the whole grid of the free run. Positive means
/// the transmitted maximum leads.
double shift_vs_free(const WaveFunction& psi_tunneled, const WaveFunction& psi_free,
                     const SquareBarrier& barrier, const Grid& grid,
                     kernels::Exec exec = kernels::Exec::parallel);

/// Max pointwise excess of tunneled over free density beyond the barrier
/// end. Negative or ~0 confirms that the transmitted part stays inside
/// the free packet's envelope.
double envelope_check(std::span<const double> dens_tunneled, std::span<const double> dens_free,
                      const SquareBarrier& barrier, const Grid& grid);

struct MomentumDistribution {
    dvec k;       ///< lattice momenta 2 pi m / N folded to (-pi, pi]
    dvec weight;  ///< |psi_tilde(k)|^2
    double mean_positive_k = 0.0; ///< weighted mean over k > 0
};

/// Discrete Fourier power spectrum of psi restricted to a region (zero
/// elsewhere). Region length must be >= 16.
MomentumDistribution momentum_distribution(const WaveFunction& psi, Region region,
                                           kernels::Exec exec = kernels::Exec::parallel);

} // namespace qtunnel
