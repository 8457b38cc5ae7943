#pragma once

// Norm-conserving Crank-Nicolson propagator for H = -1/2 d^2/dx^2 + V(x)
// on the 3-point stencil with hard walls. One step solves
//   (1 + i dt H / 2) psi' = (1 - i dt H / 2) psi
// which is computed as psi' = chi - psi with A chi = 2 psi, A = 1 + i dt H/2.
// The tridiagonal factorization of A is done once at build time; the
// per-step solve is a forward/backward sweep with stored multipliers.

#include <cstddef>
#include <functional>

#include "qtunnel/kernels.hpp"
#include "qtunnel/quantum_state.hpp"
#include "qtunnel/types.hpp"

namespace qtunnel {

/// Precomputed Crank-Nicolson operator state for one (grid, potential, dt)
/// triple. Immutable after construction; safe to share across threads.
class Stepper {
  public:
    Stepper(const Grid& grid, std::span<const double> potential, double dt,
            kernels::Exec exec = kernels::Exec::parallel);

    std::size_t n_sites() const { return diag_.size(); }
    double dt() const { return dt_; }
    kernels::Exec exec() const { return exec_; }

    /// Diagonal of A = 1 + i dt H / 2 (exposed for tests).
    const cvec& diag() const { return diag_; }
    /// Constant off-diagonal element of A, -i dt / 4.
    cplx offdiag() const { return offdiag_; }

    /// One Crank-Nicolson step. Writes the advanced wave function into
    /// psi; scratch must have n_sites elements.
    void step_inplace(WaveFunction& psi, cvec& scratch) const;

  private:
    double dt_;
    cplx offdiag_;
    cvec diag_;      // a_j
    cvec lower_;     // Thomas multiplier w_j = c / denom_{j-1}, lower_[0] unused
    cvec inv_denom_; // 1 / denom_j
    kernels::Exec exec_;
};

/// Convenience wrapper around Stepper's constructor.
Stepper build_stepper(const Grid& grid, std::span<const double> potential, double dt,
                      kernels::Exec exec = kernels::Exec::parallel);

/// One step on a copy.
WaveFunction step(const Stepper& stepper, const WaveFunction& psi);

/// Called every `stride` steps and after the final step with
/// (step_index, psi). step_index counts completed steps.
using Observer = std::function<void(std::size_t, const WaveFunction&)>;

/// Density limit at the wall sites above which a run is invalid.
inline constexpr double kBoundaryDensityLimit = 1e-8;

/// Applies step n_steps times. Throws BoundaryContaminationError as soon
/// as either wall site's density exceeds kBoundaryDensityLimit, and
/// PhysicsError on non-finite amplitudes (defensive; unreachable for
/// valid inputs).
WaveFunction evolve(const Stepper& stepper, WaveFunction psi, std::size_t n_steps,
                    const Observer& observer = nullptr, std::size_t stride = 100);

/// <psi|H|psi> for the stepper's Hamiltonian; real part of the blocked
/// inner product (the imaginary part is roundoff).
double energy_expectation(const Grid& grid, std::span<const double> potential,
                          const WaveFunction& psi,
                          kernels::Exec exec = kernels::Exec::parallel);

} // namespace qtunnel
