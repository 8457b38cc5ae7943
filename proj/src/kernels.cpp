#include "qtunnel/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace qtunnel::kernels {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::size_t block_count(std::size_t n) {
    return (n + kReduceBlock - 1) / kReduceBlock;
}

inline double block_sum(std::span<const double> x, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += x[j];
    return s;
}

inline cplx block_dot(std::span<const cplx> a, std::span<const cplx> b, std::size_t lo,
                      std::size_t hi) {
    cplx s{0.0, 0.0};
    for (std::size_t j = lo; j < hi; ++j) s += std::conj(a[j]) * b[j];
    return s;
}

inline Moments block_moments(std::span<const double> w, std::size_t lo, std::size_t hi) {
    Moments m;
    for (std::size_t j = lo; j < hi; ++j) {
        const double x = static_cast<double>(j);
        m.m0 += w[j];
        m.m1 += x * w[j];
        m.m2 += x * x * w[j];
    }
    return m;
}

inline ArgmaxResult block_argmax(std::span<const double> x, std::size_t lo, std::size_t hi) {
    ArgmaxResult r{lo, x[lo]};
    for (std::size_t j = lo + 1; j < hi; ++j) {
        if (x[j] > r.value) {
            r.value = x[j];
            r.index = j;
        }
    }
    return r;
}

// One output bin of the region-restricted DFT. The per-bin summation
// order is fixed, so serial and parallel variants agree bitwise.
inline double dft_bin(std::span<const cplx> psi, Region r, std::size_t n, std::size_t m) {
    const double theta = -kTwoPi * static_cast<double>(m) / static_cast<double>(n);
    cplx acc{0.0, 0.0};
    cplx phase{1.0, 0.0};
    const cplx w = std::polar(1.0, theta);
    for (std::size_t j = r.begin; j < r.end; ++j) {
        const std::size_t k = j - r.begin;
        if (k % kDftAnchor == 0) {
            phase = std::polar(1.0, theta * static_cast<double>(j));
        }
        acc += psi[j] * phase;
        phase *= w;
    }
    return std::norm(acc);
}

} // namespace

// ---------------------------------------------------------------- serial

namespace serial {

void density(std::span<const cplx> psi, std::span<double> out) {
    for (std::size_t j = 0; j < psi.size(); ++j) out[j] = std::norm(psi[j]);
}

void apply_hamiltonian(std::span<const cplx> psi, std::span<const double> pot,
                       std::span<cplx> out) {
    const std::size_t n = psi.size();
    for (std::size_t j = 0; j < n; ++j) {
        const cplx left = j > 0 ? psi[j - 1] : cplx{0.0, 0.0};
        const cplx right = j + 1 < n ? psi[j + 1] : cplx{0.0, 0.0};
        out[j] = 0.5 * (-left + 2.0 * psi[j] - right) + pot[j] * psi[j];
    }
}

void sub(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
}

double sum(std::span<const double> x, Region r) {
    if (r.empty()) return 0.0;
    const std::size_t nb = block_count(r.size());
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + b * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        total += block_sum(x, lo, hi);
    }
    return total;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    const std::size_t nb = block_count(a.size());
    cplx total{0.0, 0.0};
    for (std::size_t blk = 0; blk < nb; ++blk) {
        const std::size_t lo = blk * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, a.size());
        total += block_dot(a, b, lo, hi);
    }
    return total;
}

Moments moments(std::span<const double> w, Region r) {
    Moments total;
    if (r.empty()) return total;
    const std::size_t nb = block_count(r.size());
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + b * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        const Moments m = block_moments(w, lo, hi);
        total.m0 += m.m0;
        total.m1 += m.m1;
        total.m2 += m.m2;
    }
    return total;
}

ArgmaxResult argmax(std::span<const double> x, Region r) {
    ArgmaxResult best{r.begin, x[r.begin]};
    const std::size_t nb = block_count(r.size());
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + b * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        const ArgmaxResult cand = block_argmax(x, lo, hi);
        if (cand.value > best.value) best = cand;
    }
    return best;
}

void dft_power(std::span<const cplx> psi, Region r, std::span<double> out) {
    const std::size_t n = out.size();
    for (std::size_t m = 0; m < n; ++m) out[m] = dft_bin(psi, r, n, m);
}

} // namespace serial

// ------------------------------------------------------------------ omp

namespace omp {

void density(std::span<const cplx> psi, std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) out[j] = std::norm(psi[j]);
}

void apply_hamiltonian(std::span<const cplx> psi, std::span<const double> pot,
                       std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(psi.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        const cplx left = j > 0 ? psi[j - 1] : cplx{0.0, 0.0};
        const cplx right = j + 1 < n ? psi[j + 1] : cplx{0.0, 0.0};
        out[j] = 0.5 * (-left + 2.0 * psi[j] - right) + pot[j] * psi[j];
    }
}

void sub(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) out[j] = a[j] - b[j];
}

double sum(std::span<const double> x, Region r) {
    if (r.empty()) return 0.0;
    const std::int64_t nb = static_cast<std::int64_t>(block_count(r.size()));
    std::vector<double> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        partial[static_cast<std::size_t>(b)] = block_sum(x, lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    const std::int64_t nb = static_cast<std::int64_t>(block_count(a.size()));
    std::vector<cplx> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (std::int64_t blk = 0; blk < nb; ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, a.size());
        partial[static_cast<std::size_t>(blk)] = block_dot(a, b, lo, hi);
    }
    cplx total{0.0, 0.0};
    for (const cplx& p : partial) total += p;
    return total;
}

Moments moments(std::span<const double> w, Region r) {
    Moments total;
    if (r.empty()) return total;
    const std::int64_t nb = static_cast<std::int64_t>(block_count(r.size()));
    std::vector<Moments> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        partial[static_cast<std::size_t>(b)] = block_moments(w, lo, hi);
    }
    for (const Moments& m : partial) {
        total.m0 += m.m0;
        total.m1 += m.m1;
        total.m2 += m.m2;
    }
    return total;
}

ArgmaxResult argmax(std::span<const double> x, Region r) {
    const std::int64_t nb = static_cast<std::int64_t>(block_count(r.size()));
    std::vector<ArgmaxResult> partial(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nb; ++b) {
        const std::size_t lo = r.begin + static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, r.end);
        partial[static_cast<std::size_t>(b)] = block_argmax(x, lo, hi);
    }
    ArgmaxResult best = partial[0];
    for (const ArgmaxResult& cand : partial) {
        if (cand.value > best.value) best = cand;
    }
    return best;
}

void dft_power(std::span<const cplx> psi, Region r, std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < n; ++m) {
        out[m] = dft_bin(psi, r, static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    }
}

} // namespace omp

// ------------------------------------------------------------- dispatch

void density(Exec e, std::span<const cplx> psi, std::span<double> out) {
    e == Exec::serial ? serial::density(psi, out) : omp::density(psi, out);
}

void apply_hamiltonian(Exec e, std::span<const cplx> psi, std::span<const double> pot,
                       std::span<cplx> out) {
    e == Exec::serial ? serial::apply_hamiltonian(psi, pot, out)
                      : omp::apply_hamiltonian(psi, pot, out);
}

void sub(Exec e, std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    e == Exec::serial ? serial::sub(a, b, out) : omp::sub(a, b, out);
}

double sum(Exec e, std::span<const double> x, Region r) {
    return e == Exec::serial ? serial::sum(x, r) : omp::sum(x, r);
}

cplx dot(Exec e, std::span<const cplx> a, std::span<const cplx> b) {
    return e == Exec::serial ? serial::dot(a, b) : omp::dot(a, b);
}

Moments moments(Exec e, std::span<const double> w, Region r) {
    return e == Exec::serial ? serial::moments(w, r) : omp::moments(w, r);
}

ArgmaxResult argmax(Exec e, std::span<const double> x, Region r) {
    return e == Exec::serial ? serial::argmax(x, r) : omp::argmax(x, r);
}

void dft_power(Exec e, std::span<const cplx> psi, Region r, std::span<double> out) {
    e == Exec::serial ? serial::dft_power(psi, r, out) : omp::dft_power(psi, r, out);
}

} // namespace qtunnel::kernels
