// The OpenMP kernels must reproduce the serial reference bit-for-bit:
// pointwise loops write independent elements and reductions combine
// fixed-size block partials in block order, so thread count cannot change
// the result.

#include <doctest.h>

#include <random>

#include "qtunnel/kernels.hpp"

using namespace qtunnel;
namespace ks = qtunnel::kernels::serial;
namespace ko = qtunnel::kernels::omp;

namespace {

cvec random_cvec(std::size_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    cvec v(n);
    for (cplx& z : v) z = cplx{dist(rng), dist(rng)};
    return v;
}

dvec random_dvec(std::size_t n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    dvec v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// sizes around the reduction block boundary plus small odd ones
const std::size_t kSizes[] = {1, 2, 17, 1023, 1024, 1025, 4096, 12288 + 7};

} // namespace

TEST_CASE("density: omp matches serial bitwise") {
    for (std::size_t n : kSizes) {
        const cvec psi = random_cvec(n, 11);
        dvec a(n), b(n);
        ks::density(psi, a);
        ko::density(psi, b);
        for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);
    }
}

TEST_CASE("apply_hamiltonian: omp matches serial bitwise, walls included") {
    for (std::size_t n : kSizes) {
        const cvec psi = random_cvec(n, 22);
        const dvec pot = random_dvec(n, 23);
        cvec a(n), b(n);
        ks::apply_hamiltonian(psi, pot, a);
        ko::apply_hamiltonian(psi, pot, b);
        for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);
    }
}

TEST_CASE("sub: omp matches serial bitwise") {
    const std::size_t n = 4099;
    const cvec x = random_cvec(n, 31);
    const cvec y = random_cvec(n, 32);
    cvec a(n), b(n);
    ks::sub(x, y, a);
    ko::sub(x, y, b);
    for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("sum/moments/dot/argmax: omp matches serial bitwise") {
    for (std::size_t n : kSizes) {
        const dvec w = random_dvec(n, 41);
        const cvec x = random_cvec(n, 42);
        const cvec y = random_cvec(n, 43);
        const Region whole{0, n};
        CHECK(ks::sum(w, whole) == ko::sum(w, whole));
        CHECK(ks::dot(x, y) == ko::dot(x, y));
        const auto ma = ks::moments(w, whole);
        const auto mb = ko::moments(w, whole);
        CHECK(ma.m0 == mb.m0);
        CHECK(ma.m1 == mb.m1);
        CHECK(ma.m2 == mb.m2);
        const auto aa = ks::argmax(w, whole);
        const auto ab = ko::argmax(w, whole);
        CHECK(aa.index == ab.index);
        CHECK(aa.value == ab.value);

        // sub-regions crossing block boundaries
        if (n > 40) {
            const Region part{n / 3, n - 5};
            CHECK(ks::sum(w, part) == ko::sum(w, part));
            CHECK(ks::argmax(w, part).index == ko::argmax(w, part).index);
        }
    }
}

TEST_CASE("dft_power: omp matches serial bitwise") {
    const std::size_t n = 384;
    const cvec psi = random_cvec(n, 51);
    dvec a(n), b(n);
    ks::dft_power(psi, Region{0, n}, a);
    ko::dft_power(psi, Region{0, n}, b);
    for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);

    // restricted region
    ks::dft_power(psi, Region{10, 300}, a);
    ko::dft_power(psi, Region{10, 300}, b);
    for (std::size_t j = 0; j < n; ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("dft_power agrees with a direct transform") {
    const std::size_t n = 64;
    const cvec psi = random_cvec(n, 61);
    dvec got(n);
    ks::dft_power(psi, Region{0, n}, got);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            acc += psi[j] * std::polar(1.0, -two_pi * double(m) * double(j) / double(n));
        }
        CHECK(got[m] == doctest::Approx(std::norm(acc)).epsilon(1e-10));
    }
}

TEST_CASE("sum over an empty region is zero") {
    const dvec w = random_dvec(64, 71);
    CHECK(ks::sum(w, Region{10, 10}) == 0.0);
    CHECK(ko::sum(w, Region{12, 10}) == 0.0);
}

TEST_CASE("argmax tie-break: first maximal index wins") {
    dvec w(3000, 0.0);
    w[700] = 2.0;
    w[2100] = 2.0;
    CHECK(ks::argmax(w, Region{0, w.size()}).index == 700);
    CHECK(ko::argmax(w, Region{0, w.size()}).index == 700);
}
