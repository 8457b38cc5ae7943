#include "qtunnel/propagator.hpp"

#include <cmath>

namespace qtunnel {

Stepper::Stepper(const Grid& grid, std::span<const double> potential, double dt,
                 kernels::Exec exec)
    : dt_(dt), exec_(exec) {
    if (potential.size() != grid.n_sites) {
        throw std::invalid_argument("Stepper: potential length must equal n_sites");
    }
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be > 0");

    const std::size_t n = grid.n_sites;
    offdiag_ = cplx{0.0, -0.25 * dt}; // (i dt / 2) * (-1/2)
    diag_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(potential[j])) {
            throw std::invalid_argument("Stepper: potential must be finite");
        }
        // stencil diagonal of H is 1 + V_j
        diag_[j] = cplx{1.0, 0.5 * dt * (1.0 + potential[j])};
    }

    // Diagonal dominance guarantees the pivot-free sweep below is stable;
    // it holds for any dt < 2 since |a_j| >= 1.
    for (std::size_t j = 0; j < n; ++j) {
        if (!(std::abs(diag_[j]) > 2.0 * std::abs(offdiag_))) {
            throw std::invalid_argument("Stepper: tridiagonal system not diagonally dominant");
        }
    }

    // Thomas factorization of A (constant off-diagonal c = offdiag_):
    //   denom_0 = a_0,  w_j = c / denom_{j-1},  denom_j = a_j - c w_j
    lower_.resize(n);
    inv_denom_.resize(n);
    cplx denom = diag_[0];
    inv_denom_[0] = 1.0 / denom;
    for (std::size_t j = 1; j < n; ++j) {
        lower_[j] = offdiag_ * inv_denom_[j - 1];
        denom = diag_[j] - offdiag_ * lower_[j];
        inv_denom_[j] = 1.0 / denom;
    }
}

Stepper build_stepper(const Grid& grid, std::span<const double> potential, double dt,
                      kernels::Exec exec) {
    return Stepper(grid, potential, dt, exec);
}

void Stepper::step_inplace(WaveFunction& psi, cvec& scratch) const {
    const std::size_t n = diag_.size();
    if (psi.size() != n || scratch.size() != n) {
        throw std::invalid_argument("step: wave function not on the stepper's grid");
    }
    cvec& chi = scratch;

    // Forward sweep on rhs = 2 psi, fused with the elimination.
    chi[0] = 2.0 * psi.amplitudes[0];
    for (std::size_t j = 1; j < n; ++j) {
        chi[j] = 2.0 * psi.amplitudes[j] - lower_[j] * chi[j - 1];
    }
    // Back substitution.
    chi[n - 1] *= inv_denom_[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
        chi[j] = (chi[j] - offdiag_ * chi[j + 1]) * inv_denom_[j];
    }

    // psi' = chi - psi
    kernels::sub(exec_, chi, psi.amplitudes, psi.amplitudes);

    // Any non-finite value produced anywhere in the sweeps poisons chi[0]
    // (back substitution runs down to index 0), so an O(1) check suffices.
    const cplx probe = psi.amplitudes[0];
    if (!std::isfinite(probe.real()) || !std::isfinite(probe.imag())) {
        throw PhysicsError("step: non-finite amplitudes (numerical blow-up)");
    }
}

WaveFunction step(const Stepper& stepper, const WaveFunction& psi) {
    WaveFunction out = psi;
    cvec scratch(stepper.n_sites());
    stepper.step_inplace(out, scratch);
    return out;
}

WaveFunction evolve(const Stepper& stepper, WaveFunction psi, std::size_t n_steps,
                    const Observer& observer, std::size_t stride) {
    if (stride == 0) stride = 1;
    cvec scratch(stepper.n_sites());
    const std::size_t n = stepper.n_sites();
    for (std::size_t s = 1; s <= n_steps; ++s) {
        stepper.step_inplace(psi, scratch);
        if (std::norm(psi.amplitudes[0]) > kBoundaryDensityLimit ||
            std::norm(psi.amplitudes[n - 1]) > kBoundaryDensityLimit) {
            throw BoundaryContaminationError(
                "evolve: boundary density exceeded 1e-8 at step " + std::to_string(s));
        }
        if (observer && (s % stride == 0 || s == n_steps)) observer(s, psi);
    }
    return psi;
}

double energy_expectation(const Grid& grid, std::span<const double> potential,
                          const WaveFunction& psi, kernels::Exec exec) {
    cvec hpsi(grid.n_sites);
    kernels::apply_hamiltonian(exec, psi.amplitudes, potential, hpsi);
    return kernels::dot(exec, psi.amplitudes, hpsi).real() * Grid::spacing;
}

} // namespace qtunnel
