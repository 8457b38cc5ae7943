#include "qtunnel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

#include "qtunnel/analytic_oracles.hpp"
#include "qtunnel/propagator.hpp"

namespace qtunnel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t checksum(const WaveFunction& psi) {
    return fnv1a(psi.amplitudes.data(), psi.amplitudes.size() * sizeof(cplx));
}

// Transmitted maximum is only meaningful once the packet is genuinely in
// the region: requires norm above the floor and an interior argmax.
double transmitted_max_or_nan(std::span<const double> dens, Region trans, double trans_norm,
                              kernels::Exec exec) {
    if (trans.empty() || trans_norm <= kTransmissionFloor) return kNaN;
    const kernels::ArgmaxResult peak = kernels::argmax(exec, dens, trans);
    if (!(peak.value > 0.0)) return kNaN;
    if (peak.index == trans.begin || peak.index + 1 == trans.end) return kNaN;
    return max_position(dens, trans, exec);
}

} // namespace

std::size_t resolve_steps(const ExperimentConfig& cfg, std::size_t d_max, double sigma_max) {
    if (cfg.steps > 0) return cfg.steps;
    double t = cfg.snapshot_time;
    if (t <= 0.0) {
        const double v = analytic::lattice_group_velocity(cfg.k0);
        if (!(v > 0.0)) {
            throw std::invalid_argument(
                "steps: the automatic snapshot rule needs k0 > 0; give --steps or "
                "--snapshot-time explicitly");
        }
        const double travel = static_cast<double>(cfg.barrier_start + d_max) - cfg.x0 +
                              cfg.clear_sigmas * sigma_max;
        t = travel / v;
    }
    if (!(t > 0.0)) throw std::invalid_argument("snapshot-time: must be > 0");
    return static_cast<std::size_t>(std::ceil(t / cfg.dt));
}

void validate_config(const ExperimentConfig& cfg, std::size_t d_max, double sigma_max,
                     std::size_t steps) {
    if (cfg.n_sites < 3) throw std::invalid_argument("grid-size: must be >= 3");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt: must be > 0");
    if (!(sigma_max > 0.0)) throw std::invalid_argument("sigma: must be > 0");
    if (cfg.k0 < 0.0) throw std::invalid_argument("k0: must be >= 0");
    if (cfg.stride == 0) throw std::invalid_argument("stride: must be >= 1");
    if (cfg.barrier_start + d_max >= cfg.n_sites - 1) {
        throw std::invalid_argument("barrier-start/d: barrier extends past the grid");
    }
    if (cfg.x0 < 8.0 * sigma_max ||
        static_cast<double>(cfg.n_sites - 1) - cfg.x0 < 8.0 * sigma_max) {
        throw std::invalid_argument("x0: packet closer than 8 sigma to a wall");
    }

    // Boundary-safety rule: at snapshot time the free maximum must stay
    // 8 sigma(t) clear of the right wall (continuum width, which
    // overestimates the lattice spreading).
    const double t_snap = static_cast<double>(steps) * cfg.dt;
    const analytic::FreeGaussianParams p{cfg.x0, sigma_max, cfg.k0};
    const double reach = cfg.x0 + analytic::lattice_group_velocity(cfg.k0) * t_snap +
                         8.0 * analytic::free_gaussian_width(p, t_snap);
    if (reach >= static_cast<double>(cfg.n_sites - 1)) {
        throw std::invalid_argument(
            "steps/snapshot-time: free packet would reach within 8 sigma of the right wall");
    }
}

PairOutcome run_pair(const ExperimentConfig& cfg, double sigma, std::size_t width_d,
                     double height_h, std::size_t steps) {
    const Grid grid(cfg.n_sites);
    const SquareBarrier barrier(cfg.barrier_start, width_d, height_h);
    const kernels::Exec exec = kernels::Exec::parallel;

    const WaveFunction psi0 = gaussian_packet(grid, cfg.x0, sigma, cfg.k0);
    WaveFunction psi_tun = psi0;
    WaveFunction psi_free = psi0;
    if (checksum(psi_tun) != checksum(psi_free)) {
        throw std::logic_error("run_pair: paired runs must share the initial packet");
    }

    const dvec pot = sample_potential(barrier, grid, cfg.k0);
    const dvec pot_free(grid.n_sites, 0.0);
    const Stepper stepper_tun(grid, pot, cfg.dt, exec);
    const Stepper stepper_free(grid, pot_free, cfg.dt, exec);

    const Region trans = barrier.transmitted_region(grid);
    const Region refl = barrier.reflected_region(grid);

    PairOutcome out;
    out.record.envelope_violation = -std::numeric_limits<double>::infinity();

    cvec scratch(grid.n_sites);
    dvec dens_tun(grid.n_sites), dens_free(grid.n_sites);
    const std::size_t n = grid.n_sites;

    auto boundary_ok = [n](const WaveFunction& psi) {
        return std::norm(psi.amplitudes[0]) <= kBoundaryDensityLimit &&
               std::norm(psi.amplitudes[n - 1]) <= kBoundaryDensityLimit;
    };

    for (std::size_t s = 1; s <= steps; ++s) {
        stepper_tun.step_inplace(psi_tun, scratch);
        stepper_free.step_inplace(psi_free, scratch);
        if (!boundary_ok(psi_tun) || !boundary_ok(psi_free)) {
            throw BoundaryContaminationError(
                "run_pair: boundary density exceeded 1e-8 at step " + std::to_string(s));
        }
        if (s % cfg.stride != 0 && s != steps) continue;

        kernels::density(exec, psi_tun.amplitudes, dens_tun);
        kernels::density(exec, psi_free.amplitudes, dens_free);
        const double t = static_cast<double>(s) * cfg.dt;
        const double tnorm = kernels::sum(exec, dens_tun, trans) * Grid::spacing;
        const double rnorm = kernels::sum(exec, dens_tun, refl) * Grid::spacing;
        const double mfree = max_position(dens_free, grid.whole(), exec);
        const double mtrans = transmitted_max_or_nan(dens_tun, trans, tnorm, exec);

        out.record.times.push_back(t);
        out.record.max_free.push_back(mfree);
        out.record.max_transmitted.push_back(mtrans);
        out.record.shift.push_back(mtrans - mfree); // NaN propagates
        out.record.transmitted_norm.push_back(tnorm);
        out.record.reflected_norm.push_back(rnorm);

        const double excess = envelope_check(dens_tun, dens_free, barrier, grid);
        if (excess > out.record.envelope_violation) out.record.envelope_violation = excess;
    }

    out.snapshot_time = static_cast<double>(steps) * cfg.dt;
    out.dens_tunneled = dens_tun;
    out.dens_free = dens_free;
    out.psi_tunneled = std::move(psi_tun);
    out.psi_free = std::move(psi_free);

    if (!out.record.times.empty()) {
        out.max_free = out.record.max_free.back();
        out.max_transmitted = out.record.max_transmitted.back();
        out.shift = out.record.shift.back();
        out.transmitted_norm = out.record.transmitted_norm.back();
    }
    if (!trans.empty()) {
        const kernels::ArgmaxResult peak = kernels::argmax(exec, out.dens_tunneled, trans);
        out.peak_transmitted_density = peak.value;
    }
    if (out.transmitted_norm < kTransmissionFloor) {
        out.flags.push_back("no_transmission");
        out.record.flags.push_back("no_transmission");
        out.mean_transmitted_k = kNaN;
    } else if (trans.size() >= 16) {
        out.mean_transmitted_k =
            momentum_distribution(out.psi_tunneled, trans, exec).mean_positive_k;
    } else {
        out.mean_transmitted_k = kNaN;
    }
    return out;
}

PairOutcome run_pair(const ExperimentConfig& cfg) {
    const std::size_t steps = resolve_steps(cfg, cfg.width_d, cfg.sigma);
    validate_config(cfg, cfg.width_d, cfg.sigma, steps);
    return run_pair(cfg, cfg.sigma, cfg.width_d, cfg.height_h, steps);
}

namespace {

SweepRow row_from_outcome(double sigma, std::size_t d, double h, const PairOutcome& o) {
    SweepRow row;
    row.sigma = sigma;
    row.width_d = d;
    row.height_h = h;
    row.snapshot_time = o.snapshot_time;
    row.max_free = o.max_free;
    row.max_transmitted = o.max_transmitted;
    row.shift = o.shift;
    row.transmitted_norm = o.transmitted_norm;
    row.peak_transmitted_density = o.peak_transmitted_density;
    row.mean_transmitted_k = o.mean_transmitted_k;
    row.envelope_violation = o.record.envelope_violation;
    row.flags = o.flags;
    return row;
}

SweepRow failed_row(double sigma, std::size_t d, double h, double t_snap,
                    const std::string& flag) {
    SweepRow row;
    row.sigma = sigma;
    row.width_d = d;
    row.height_h = h;
    row.snapshot_time = t_snap;
    row.max_free = kNaN;
    row.max_transmitted = kNaN;
    row.shift = kNaN;
    row.transmitted_norm = kNaN;
    row.peak_transmitted_density = kNaN;
    row.mean_transmitted_k = kNaN;
    row.envelope_violation = kNaN;
    row.flags.push_back(flag);
    return row;
}

void sort_rows(SweepTable& table) {
    std::sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        if (a.width_d != b.width_d) return a.width_d < b.width_d;
        return a.height_h < b.height_h;
    });
}

struct SweepPoint {
    double sigma;
    std::size_t width_d;
    double height_h;
};

// Shared driver: one run_pair per point at a common snapshot time, rows
// collected into fixed slots so concurrent execution cannot reorder them.
// Per-point failures become flagged rows; partial results are retained.
template <typename PerPoint>
SweepTable run_sweep(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points,
                     std::size_t steps, PerPoint&& per_point) {
    SweepTable table;
    table.rows.resize(points.size());
    const double t_snap = static_cast<double>(steps) * cfg.dt;
    const std::int64_t np = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < np; ++i) {
        const SweepPoint& pt = points[static_cast<std::size_t>(i)];
        try {
            PairOutcome o = run_pair(cfg, pt.sigma, pt.width_d, pt.height_h, steps);
            table.rows[static_cast<std::size_t>(i)] =
                row_from_outcome(pt.sigma, pt.width_d, pt.height_h, o);
            per_point(static_cast<std::size_t>(i), o);
        } catch (const BoundaryContaminationError&) {
            table.rows[static_cast<std::size_t>(i)] =
                failed_row(pt.sigma, pt.width_d, pt.height_h, t_snap, "boundary_contamination");
        } catch (const std::exception& e) {
            table.rows[static_cast<std::size_t>(i)] =
                failed_row(pt.sigma, pt.width_d, pt.height_h, t_snap,
                           std::string("error:") + e.what());
        }
    }
    sort_rows(table);
    return table;
}

} // namespace

SnapshotResult snapshot_experiment(const ExperimentConfig& cfg) {
    if (cfg.d_list.empty()) throw std::invalid_argument("d-list: must not be empty");
    const std::size_t d_max = *std::max_element(cfg.d_list.begin(), cfg.d_list.end());
    const std::size_t steps = resolve_steps(cfg, d_max, cfg.sigma);
    validate_config(cfg, d_max, cfg.sigma, steps);

    std::vector<SweepPoint> points;
    for (std::size_t d : cfg.d_list) points.push_back({cfg.sigma, d, cfg.height_h});

    SnapshotResult result;
    std::vector<dvec> dens(points.size());
    dvec free_dens;
    result.table = run_sweep(cfg, points, steps, [&](std::size_t i, const PairOutcome& o) {
        dens[i] = o.dens_tunneled;
        if (i == 0) free_dens = o.dens_free; // identical across points
    });

    result.densities.emplace_back("free", std::move(free_dens));
    for (std::size_t i = 0; i < points.size(); ++i) {
        result.densities.emplace_back("d" + std::to_string(points[i].width_d),
                                      std::move(dens[i]));
    }
    return result;
}

SweepTable height_sweep(const ExperimentConfig& cfg) {
    if (cfg.h_list.empty()) throw std::invalid_argument("h-list: must not be empty");
    const std::size_t steps = resolve_steps(cfg, cfg.width_d, cfg.sigma);
    validate_config(cfg, cfg.width_d, cfg.sigma, steps);

    std::vector<SweepPoint> points;
    for (double h : cfg.h_list) points.push_back({cfg.sigma, cfg.width_d, h});
    return run_sweep(cfg, points, steps, [](std::size_t, const PairOutcome&) {});
}

SweepTable width_scan(const ExperimentConfig& cfg) {
    if (cfg.d_list.empty()) throw std::invalid_argument("d-list: must not be empty");
    if (cfg.sigma_list.empty()) throw std::invalid_argument("sigma-list: must not be empty");
    const std::size_t d_max = *std::max_element(cfg.d_list.begin(), cfg.d_list.end());
    const double sigma_max = *std::max_element(cfg.sigma_list.begin(), cfg.sigma_list.end());
    const std::size_t steps = resolve_steps(cfg, d_max, sigma_max);
    validate_config(cfg, d_max, sigma_max, steps);

    std::vector<SweepPoint> points;
    for (double s : cfg.sigma_list) {
        for (std::size_t d : cfg.d_list) points.push_back({s, d, cfg.height_h});
    }
    return run_sweep(cfg, points, steps, [](std::size_t, const PairOutcome&) {});
}

} // namespace qtunnel
