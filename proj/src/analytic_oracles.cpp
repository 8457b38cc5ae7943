#include "qtunnel/analytic_oracles.hpp"

#include <cmath>

namespace qtunnel::analytic {

namespace {
constexpr double kSqrtTwoPi = 2.5066282746310005024157652848110;
}

double free_gaussian_width(const FreeGaussianParams& p, double t) {
    const double spread = t / (2.0 * p.sigma0);
    return std::sqrt(p.sigma0 * p.sigma0 + spread * spread);
}

double free_gaussian_density(const FreeGaussianParams& p, double x, double t) {
    if (t < 0.0) throw std::invalid_argument("free_gaussian_density: t must be >= 0");
    const double sigma_t = free_gaussian_width(p, t);
    const double center = p.x0 + p.k0 * t;
    const double u = (x - center) / sigma_t;
    return std::exp(-0.5 * u * u) / (kSqrtTwoPi * sigma_t);
}

double plane_wave_transmission(double E, double V0, double d) {
    if (!(E > 0.0)) throw std::invalid_argument("plane_wave_transmission: E must be > 0");
    if (V0 < 0.0) throw std::invalid_argument("plane_wave_transmission: V0 must be >= 0");
    if (d < 0.0) throw std::invalid_argument("plane_wave_transmission: d must be >= 0");
    if (V0 == 0.0 || d == 0.0) return 1.0;

    if (E == V0) return 1.0 / (1.0 + 0.5 * E * d * d);

    if (E < V0) {
        const double kappa = std::sqrt(2.0 * (V0 - E));
        const double s = std::sinh(kappa * d);
        return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (V0 - E)));
    }
    const double q = std::sqrt(2.0 * (E - V0));
    const double s = std::sin(q * d);
    return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (E - V0)));
}

double group_velocity(double k0) { return k0; }

double lattice_group_velocity(double k0) { return std::sin(k0); }

double lattice_dispersion(double k) { return 1.0 - std::cos(k); }

double gaussian_momentum_density(double sigma, double k0, double k) {
    // Fourier pair of exp(-x^2/(4 sigma^2)): k-density has std 1/(2 sigma).
    const double sk = 1.0 / (2.0 * sigma);
    const double u = (k - k0) / sk;
    return std::exp(-0.5 * u * u) / (kSqrtTwoPi * sk);
}

namespace {

// Simpson integration of f(k) * rho(k) over k0 +- 8 sigma_k. The barrier
// transmission varies fast on the tunneling side, so use a fine fixed
// grid; 1e-4 absolute spacing is far below every feature width.
template <typename F>
double momentum_quadrature(double sigma, double k0, F&& f) {
    const double sk = 1.0 / (2.0 * sigma);
    double lo = k0 - 8.0 * sk;
    const double hi = k0 + 8.0 * sk;
    if (lo < 1e-12) lo = 1e-12; // transmission needs E > 0
    const double span = hi - lo;
    std::size_t n = static_cast<std::size_t>(span / 1e-4);
    if (n < 512) n = 512;
    if (n % 2 == 1) ++n;
    const double hstep = span / static_cast<double>(n);

    auto integrand = [&](double k) { return gaussian_momentum_density(sigma, k0, k) * f(k); };

    double acc = integrand(lo) + integrand(hi);
    for (std::size_t i = 1; i < n; ++i) {
        const double k = lo + hstep * static_cast<double>(i);
        acc += integrand(k) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * hstep / 3.0;
}

} // namespace

double transmission_quadrature(double sigma, double k0, double V0, double d) {
    return momentum_quadrature(sigma, k0, [&](double k) {
        return plane_wave_transmission(lattice_dispersion(k), V0, d);
    });
}

double transmitted_mean_k_quadrature(double sigma, double k0, double V0, double d) {
    const double weight = transmission_quadrature(sigma, k0, V0, d);
    const double weighted_k = momentum_quadrature(sigma, k0, [&](double k) {
        return k * plane_wave_transmission(lattice_dispersion(k), V0, d);
    });
    return weighted_k / weight;
}

} // namespace qtunnel::analytic
