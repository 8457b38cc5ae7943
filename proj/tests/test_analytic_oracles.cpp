#include <doctest.h>

#include <cmath>
#include <complex>

#include "qtunnel/analytic_oracles.hpp"

using namespace qtunnel;
namespace an = qtunnel::analytic;

namespace {

// Independent route for the square-barrier transmission: 2x2 complex
// transfer matrix of the piecewise-constant potential, valid on both
// sides of E = V0 (kappa becomes imaginary above the barrier).
double transfer_matrix_transmission(double E, double V0, double d) {
    using C = std::complex<double>;
    const C k = std::sqrt(C{2.0 * E, 0.0});
    const C q = std::sqrt(C{2.0 * (E - V0), 0.0}); // imaginary inside a tall barrier
    const C i{0.0, 1.0};
    const C cos_qd = std::cos(q * d);
    const C sin_qd = std::sin(q * d);
    // 1/t = [cos(qd) - (i/2)(q/k + k/q) sin(qd)] e^{ikd}
    const C inv_t = (cos_qd - 0.5 * i * (q / k + k / q) * sin_qd) * std::exp(i * k * d);
    return 1.0 / std::norm(inv_t);
}

} // namespace

TEST_CASE("plane_wave_transmission matches the transfer-matrix route") {
    for (double E : {0.02, 0.1, 0.125, 0.2, 0.3, 0.6}) {
        for (double V0 : {0.05, 0.1875, 0.25, 0.5}) {
            for (double d : {1.0, 5.0, 10.0, 20.0}) {
                if (E == V0) continue; // exact threshold handled separately
                const double got = an::plane_wave_transmission(E, V0, d);
                const double want = transfer_matrix_transmission(E, V0, d);
                CHECK(got / want == doctest::Approx(1.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("deep tunneling value: E=0.125, V0=0.25, d=20 gives 1/(1+sinh^2(10))") {
    // kappa = sqrt(2(V0-E)) = 0.5, kappa d = 10, prefactor V0^2/(4E(V0-E)) = 1
    const double expected = 1.0 / (1.0 + std::pow(std::sinh(10.0), 2)); // ~8.2445e-9
    const double got = an::plane_wave_transmission(0.125, 0.25, 20.0);
    CHECK(got / expected == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(got / transfer_matrix_transmission(0.125, 0.25, 20.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(got < 1e-8);
    CHECK(got > 1e-9);
}

TEST_CASE("transmission trivial cases and resonance") {
    CHECK(an::plane_wave_transmission(0.3, 0.0, 15.0) == 1.0);
    CHECK(an::plane_wave_transmission(0.3, 0.9, 0.0) == 1.0);

    // E > V0 with sqrt(2(E-V0)) d = pi -> resonance T = 1
    const double V0 = 0.1;
    const double d = 12.0;
    const double q = M_PI / d;
    const double E = V0 + 0.5 * q * q;
    CHECK(an::plane_wave_transmission(E, V0, d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transmission is continuous across E = V0") {
    const double V0 = 0.25, d = 20.0;
    const double at = an::plane_wave_transmission(V0, V0, d);
    CHECK(at == doctest::Approx(1.0 / (1.0 + 0.5 * V0 * d * d)).epsilon(1e-15));
    const double below = an::plane_wave_transmission(V0 - 1e-9, V0, d);
    const double above = an::plane_wave_transmission(V0 + 1e-9, V0, d);
    CHECK(std::abs(below - at) < 1e-9);
    CHECK(std::abs(above - at) < 1e-9);
}

TEST_CASE("transmission is monotone in E below the barrier and bounded by [0,1]") {
    const double V0 = 0.25, d = 12.0;
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
        const double E = V0 * double(i) / 201.0;
        const double T = an::plane_wave_transmission(E, V0, d);
        CHECK(T >= 0.0);
        CHECK(T <= 1.0);
        CHECK(T > prev);
        prev = T;
    }
    CHECK(an::plane_wave_transmission(5.0, 0.25, 12.0) <= 1.0);
    CHECK_THROWS_AS(an::plane_wave_transmission(0.0, 0.25, 12.0), std::invalid_argument);
    CHECK_THROWS_AS(an::plane_wave_transmission(-1.0, 0.25, 12.0), std::invalid_argument);
}

TEST_CASE("free gaussian density: t = 0, spreading, k0 = 0") {
    const an::FreeGaussianParams p{100.0, 10.0, 0.5};

    CHECK(an::free_gaussian_width(p, 0.0) == 10.0);
    CHECK(an::free_gaussian_density(p, 100.0, 0.0) ==
          doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * 10.0)).epsilon(1e-14));

    // sigma0 = 10, t = 400: center x0 + 400 k0, width^2 = 100 + (400/20)^2 = 500
    const double w = an::free_gaussian_width(p, 400.0);
    CHECK(w * w == doctest::Approx(500.0).epsilon(1e-14));
    const double peak_x = 100.0 + 0.5 * 400.0;
    CHECK(an::free_gaussian_density(p, peak_x, 400.0) >
          an::free_gaussian_density(p, peak_x + 1.0, 400.0));
    CHECK(an::free_gaussian_density(p, peak_x, 400.0) >
          an::free_gaussian_density(p, peak_x - 1.0, 400.0));

    const an::FreeGaussianParams still{100.0, 10.0, 0.0};
    for (double t : {0.0, 50.0, 400.0}) {
        CHECK(an::free_gaussian_density(still, 100.0 + 3.0, t) ==
              doctest::Approx(an::free_gaussian_density(still, 100.0 - 3.0, t)).epsilon(1e-14));
    }

    CHECK_THROWS_AS(an::FreeGaussianParams(0.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("free gaussian density integrates to 1") {
    const an::FreeGaussianParams p{2000.0, 10.0, 0.3};
    for (double t : {0.0, 200.0, 1500.0}) {
        double total = 0.0;
        for (int j = 0; j < 8192; ++j) {
            total += an::free_gaussian_density(p, double(j), t);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("group velocity: continuum k0, lattice sin(k0)") {
    CHECK(an::group_velocity(0.0) == 0.0);
    CHECK(an::lattice_group_velocity(0.0) == 0.0);
    CHECK(an::group_velocity(0.5) == 0.5);
    CHECK(an::lattice_group_velocity(0.5) == doctest::Approx(0.4794).epsilon(1e-4));

    // oracle: d/dk of the lattice dispersion by central differences
    const double eps = 1e-6;
    for (double k : {0.1, 0.3, 0.5}) {
        const double deriv =
            (an::lattice_dispersion(k + eps) - an::lattice_dispersion(k - eps)) / (2.0 * eps);
        CHECK(an::lattice_group_velocity(k) == doctest::Approx(deriv).epsilon(1e-8));
    }

    // continuum and lattice agree within 5% up to k0 = 0.5
    for (int i = 1; i <= 50; ++i) {
        const double k = 0.01 * double(i);
        const double rel = (an::group_velocity(k) - an::lattice_group_velocity(k)) /
                           an::group_velocity(k);
        CHECK(rel >= 0.0);
        CHECK(rel < 0.05);
    }
}

TEST_CASE("momentum quadrature: no barrier passes everything, mean k rises with a barrier") {
    // V0 = 0 or d = 0: the filter is unity, so the quadrature must
    // integrate the momentum density to 1.
    CHECK(an::transmission_quadrature(10.0, 0.5, 0.0, 20.0) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(an::transmission_quadrature(10.0, 0.5, 0.3, 0.0) == doctest::Approx(1.0).epsilon(1e-8));

    // tunneling filter prefers high k
    const double V0 = 2.0 * 0.5 * 0.5 * 0.5; // h = 2 at k0 = 0.5
    const double mean_k = an::transmitted_mean_k_quadrature(10.0, 0.5, V0, 10.0);
    CHECK(mean_k > 0.5);

    // and the transmitted fraction drops with the height
    const double t1 = an::transmission_quadrature(10.0, 0.5, 0.5 * 0.125, 10.0);
    const double t2 = an::transmission_quadrature(10.0, 0.5, 2.0 * 0.125, 10.0);
    const double t3 = an::transmission_quadrature(10.0, 0.5, 4.0 * 0.125, 10.0);
    CHECK(t1 > t2);
    CHECK(t2 > t3);
}
