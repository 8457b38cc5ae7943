#pragma once

// Data-parallel inner loops of the simulator. Every kernel exists twice:
// kernels::serial holds the plain reference implementation, kernels::omp
// the OpenMP variant. Both produce bit-identical output: pointwise loops
// write independent elements, and reductions accumulate fixed-size block
// partials that are always combined in block order, so the result does
// not depend on the number of threads. Unit tests compare the two
// namespaces element-for-element; bench/kernel_bench.cpp times them.

#include <cstddef>
#include <span>

#include "qtunnel/types.hpp"

namespace qtunnel::kernels {

/// Block length used by all deterministic reductions.
inline constexpr std::size_t kReduceBlock = 1024;

/// Phase recurrences in the DFT are re-anchored with an exact polar()
/// every this many samples to keep rounding drift ~1e-14.
inline constexpr std::size_t kDftAnchor = 256;

struct Moments {
    double m0 = 0.0; ///< sum of weights
    double m1 = 0.0; ///< sum of site * weight
    double m2 = 0.0; ///< sum of site^2 * weight
};

struct ArgmaxResult {
    std::size_t index = 0;
    double value = 0.0;
};

#define QTUNNEL_DECLARE_KERNELS                                                          \
    /* out_j = |psi_j|^2 */                                                              \
    void density(std::span<const cplx> psi, std::span<double> out);                     \
    /* out = (-psi_{j-1} + 2 psi_j - psi_{j+1})/2 + V_j psi_j, hard walls */            \
    void apply_hamiltonian(std::span<const cplx> psi, std::span<const double> pot,      \
                           std::span<cplx> out);                                        \
    /* out_j = a_j - b_j */                                                             \
    void sub(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);    \
    /* blocked sum of x over [r.begin, r.end) */                                        \
    double sum(std::span<const double> x, Region r);                                    \
    /* blocked <a|b> = sum conj(a_j) b_j */                                             \
    cplx dot(std::span<const cplx> a, std::span<const cplx> b);                         \
    /* blocked site moments of a weight array over a region */                         \
    Moments moments(std::span<const double> w, Region r);                               \
    /* first index attaining the maximum over [r.begin, r.end) */                       \
    ArgmaxResult argmax(std::span<const double> x, Region r);                           \
    /* power spectrum |DFT(psi restricted to r, zero elsewhere)|^2, n bins */           \
    void dft_power(std::span<const cplx> psi, Region r, std::span<double> out);

namespace serial {
QTUNNEL_DECLARE_KERNELS
}

namespace omp {
QTUNNEL_DECLARE_KERNELS
}

#undef QTUNNEL_DECLARE_KERNELS

/// Which implementation the simulator modules run. Parallel is the
/// default; sweeps that are already parallel across runs still work
/// because nested OpenMP regions execute serially.
enum class Exec { serial, parallel };

void density(Exec e, std::span<const cplx> psi, std::span<double> out);
void apply_hamiltonian(Exec e, std::span<const cplx> psi, std::span<const double> pot,
                       std::span<cplx> out);
void sub(Exec e, std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
double sum(Exec e, std::span<const double> x, Region r);
cplx dot(Exec e, std::span<const cplx> a, std::span<const cplx> b);
Moments moments(Exec e, std::span<const double> w, Region r);
ArgmaxResult argmax(Exec e, std::span<const double> x, Region r);
void dft_power(Exec e, std::span<const cplx> psi, Region r, std::span<double> out);

} // namespace qtunnel::kernels
