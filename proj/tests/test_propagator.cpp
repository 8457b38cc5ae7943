#include <doctest.h>

#include <cmath>

#include "qtunnel/analytic_oracles.hpp"
#include "qtunnel/kernels.hpp"
#include "qtunnel/observables.hpp"
#include "qtunnel/propagator.hpp"
#include "qtunnel/quantum_state.hpp"

using namespace qtunnel;
namespace an = qtunnel::analytic;

namespace {

struct WidthAndMax {
    double mean;
    double stddev;
    std::size_t argmax;
};

WidthAndMax measure(const WaveFunction& psi) {
    const dvec dens = density(psi);
    const auto m = kernels::serial::moments(dens, Region{0, dens.size()});
    const auto peak = kernels::serial::argmax(dens, Region{0, dens.size()});
    const double mean = m.m1 / m.m0;
    return {mean, std::sqrt(m.m2 / m.m0 - mean * mean), peak.index};
}

} // namespace

TEST_CASE("build_stepper: free diagonal is translation invariant") {
    const Grid grid(1024);
    const dvec pot(grid.n_sites, 0.0);
    const Stepper s(grid, pot, 0.05);
    for (std::size_t j = 1; j < grid.n_sites; ++j) CHECK(s.diag()[j] == s.diag()[0]);
    CHECK(s.offdiag() == cplx{0.0, -0.0125});
}

TEST_CASE("build_stepper: barrier changes the diagonal on exactly its support") {
    const Grid grid(8192);
    const SquareBarrier barrier(6000, 20, 2.0);
    const dvec pot = sample_potential(barrier, grid, 0.5);
    const dvec free_pot(grid.n_sites, 0.0);
    const Stepper with(grid, pot, 0.05);
    const Stepper without(grid, free_pot, 0.05);
    std::size_t differing = 0;
    for (std::size_t j = 0; j < grid.n_sites; ++j) {
        if (with.diag()[j] != without.diag()[j]) ++differing;
    }
    CHECK(differing == 20);
}

TEST_CASE("build_stepper: identical inputs give bit-identical factors") {
    const Grid grid(2048);
    dvec pot(grid.n_sites, 0.0);
    for (std::size_t j = 900; j < 930; ++j) pot[j] = 0.31;
    const Stepper a(grid, pot, 0.05);
    const Stepper b(grid, pot, 0.05);
    for (std::size_t j = 0; j < grid.n_sites; ++j) CHECK(a.diag()[j] == b.diag()[j]);
}

TEST_CASE("build_stepper rejects bad inputs") {
    const Grid grid(256);
    dvec pot(grid.n_sites, 0.0);
    CHECK_THROWS_AS(Stepper(grid, dvec(100, 0.0), 0.05), std::invalid_argument);
    CHECK_THROWS_AS(Stepper(grid, pot, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Stepper(grid, pot, -1.0), std::invalid_argument);
    pot[7] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Stepper(grid, pot, 0.05), std::invalid_argument);
}

TEST_CASE("step: zero stays zero, one step conserves the norm") {
    const Grid grid(1024);
    const dvec pot(grid.n_sites, 0.0);
    const Stepper s(grid, pot, 0.05);

    WaveFunction zero;
    zero.amplitudes.assign(grid.n_sites, cplx{0.0, 0.0});
    const WaveFunction still = step(s, zero);
    for (const cplx& a : still.amplitudes) CHECK(a == cplx{0.0, 0.0});

    const WaveFunction psi = gaussian_packet(grid, 300.0, 10.0, 0.5);
    const WaveFunction next = step(s, psi);
    CHECK(std::abs(::qtunnel::norm(next) - ::qtunnel::norm(psi)) < 1e-12);
}

TEST_CASE("free packet follows the lattice trajectory and spreading") {
    // The 3-point stencil has dispersion E(k) = 1 - cos k, so the packet
    // mean moves at sin(k0) (times the packet average of the phase
    // factor, exp(-1/(8 sigma0^2))) and the density spreads with the
    // factor cos(k0) relative to the continuum law. For k0 <= 0.1 the
    // continuum width formula is accurate to better than 1%.
    const Grid grid(1024);
    const dvec pot(grid.n_sites, 0.0);
    const Stepper s(grid, pot, 0.05);
    const double sigma0 = 10.0, t = 400.0;
    const std::size_t n_steps = 8000;

    SUBCASE("k0 = 0.1: matches the continuum closed form within spec tolerances") {
        const double k0 = 0.1, x0 = 300.0;
        WaveFunction psi = gaussian_packet(grid, x0, sigma0, k0);
        psi = evolve(s, std::move(psi), n_steps);
        const WidthAndMax got = measure(psi);

        const double expected_max = x0 + an::lattice_group_velocity(k0) * t;
        const dvec dens = density(psi);
        const double refined = max_position(dens, Region{0, dens.size()});
        CHECK(std::abs(refined - expected_max) < 0.5);

        const an::FreeGaussianParams p{x0, sigma0, k0};
        const double w = an::free_gaussian_width(p, t);
        CHECK(got.stddev == doctest::Approx(w).epsilon(0.01));
    }

    SUBCASE("k0 = 0.5: matches the lattice-corrected trajectory and width") {
        const double k0 = 0.5, x0 = 300.0;
        WaveFunction psi = gaussian_packet(grid, x0, sigma0, k0);
        psi = evolve(s, std::move(psi), n_steps);
        const WidthAndMax got = measure(psi);

        const double v = an::lattice_group_velocity(k0) *
                         std::exp(-1.0 / (8.0 * sigma0 * sigma0));
        const dvec dens = density(psi);
        const double refined = max_position(dens, Region{0, dens.size()});
        CHECK(std::abs(refined - (x0 + v * t)) < 0.5);

        const double spread = std::cos(k0) * t / (2.0 * sigma0);
        const double w = std::sqrt(sigma0 * sigma0 + spread * spread);
        CHECK(got.stddev == doctest::Approx(w).epsilon(0.01));
    }
}

TEST_CASE("evolve: n_steps = 0 is the identity, steps compose") {
    const Grid grid(1024);
    dvec pot(grid.n_sites, 0.0);
    for (std::size_t j = 500; j < 510; ++j) pot[j] = 0.25;
    const Stepper s(grid, pot, 0.05);
    const WaveFunction psi0 = gaussian_packet(grid, 300.0, 10.0, 0.5);

    const WaveFunction same = evolve(s, psi0, 0);
    for (std::size_t j = 0; j < grid.n_sites; ++j) {
        CHECK(same.amplitudes[j] == psi0.amplitudes[j]);
    }

    const WaveFunction ab = evolve(s, evolve(s, psi0, 300), 200);
    const WaveFunction once = evolve(s, psi0, 500);
    for (std::size_t j = 0; j < grid.n_sites; ++j) {
        CHECK(std::abs(ab.amplitudes[j] - once.amplitudes[j]) <= 1e-12);
    }
}

TEST_CASE("unitarity over 10^4 steps") {
    const Grid grid(1024);
    dvec pot(grid.n_sites, 0.0);
    for (std::size_t j = 600; j < 620; ++j) pot[j] = 0.25;
    const Stepper s(grid, pot, 0.05);
    WaveFunction psi = gaussian_packet(grid, 300.0, 10.0, 0.0); // k0=0: stays put
    const double n0 = ::qtunnel::norm(psi);
    psi = evolve(s, std::move(psi), 10000);
    CHECK(std::abs(::qtunnel::norm(psi) - n0) < 1e-10);
}

TEST_CASE("time reversal: conjugate-evolve-conjugate recovers the density") {
    const Grid grid(1024);
    dvec pot(grid.n_sites, 0.0);
    for (std::size_t j = 500; j < 515; ++j) pot[j] = 0.3;
    const Stepper s(grid, pot, 0.05);

    const WaveFunction psi0 = gaussian_packet(grid, 300.0, 10.0, 0.5);
    WaveFunction fwd = evolve(s, psi0, 1000);
    for (cplx& a : fwd.amplitudes) a = std::conj(a);
    WaveFunction back = evolve(s, std::move(fwd), 1000);
    for (cplx& a : back.amplitudes) a = std::conj(a);

    const dvec d0 = density(psi0);
    const dvec d1 = density(back);
    for (std::size_t j = 0; j < grid.n_sites; ++j) CHECK(std::abs(d1[j] - d0[j]) < 1e-8);
}

TEST_CASE("energy expectation is conserved") {
    const Grid grid(1024);
    dvec pot(grid.n_sites, 0.0);
    for (std::size_t j = 500; j < 520; ++j) pot[j] = 0.25;
    const Stepper s(grid, pot, 0.05);

    WaveFunction psi = gaussian_packet(grid, 300.0, 10.0, 0.5);
    const double e0 = energy_expectation(grid, pot, psi);
    psi = evolve(s, std::move(psi), 2000);
    const double e1 = energy_expectation(grid, pot, psi);
    CHECK(std::abs(e1 - e0) / std::abs(e0) < 1e-8);
}

TEST_CASE("evolve aborts on boundary contamination") {
    const Grid grid(256);
    const dvec pot(grid.n_sites, 0.0);
    const Stepper s(grid, pot, 0.05);
    // legal packet, but the walls are only ~86 sites away: it will hit
    WaveFunction psi = gaussian_packet(grid, 128.0, 10.0, 0.5);
    CHECK_THROWS_AS(evolve(s, std::move(psi), 40000), BoundaryContaminationError);
}

TEST_CASE("long free run keeps the norm to 1e-10") {
    // 36000 steps of dt = 0.05 in a grid wide enough to stay clear of
    // the walls (the k0 = 0 packet only spreads, by 90 sites at t=1800).
    const Grid grid(4096);
    const dvec pot(grid.n_sites, 0.0);
    const Stepper s(grid, pot, 0.05);
    WaveFunction psi = gaussian_packet(grid, 2048.0, 10.0, 0.0);
    psi = evolve(s, std::move(psi), 36000);
    CHECK(std::abs(::qtunnel::norm(psi) - 1.0) < 1e-10);
}
