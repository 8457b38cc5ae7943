#pragma once

// The paper's three experiments as reproducible parameter sweeps: paired
// (barrier, free) runs per sweep point, a common snapshot time per sweep,
// and summary tables ready for serialization. Sweep points are
// independent and run concurrently; row order is fixed by sorting, so
// outputs do not depend on scheduling.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtunnel/observables.hpp"
#include "qtunnel/quantum_state.hpp"
#include "qtunnel/types.hpp"

namespace qtunnel {

struct ExperimentConfig {
    std::size_t n_sites = 12288;
    double x0 = 5700.0;
    double sigma = 10.0;
    double k0 = 0.5;
    double dt = 0.05;
    std::size_t barrier_start = 6000;

    // single-point parameters (single-run; snapshot uses height_h,
    // height-sweep uses width_d)
    std::size_t width_d = 20;
    double height_h = 2.0;

    // sweep axes
    std::vector<std::size_t> d_list = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
    std::vector<double> h_list = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    std::vector<double> sigma_list = {5.0, 10.0, 15.0, 20.0};

    // snapshot control: explicit steps win over explicit snapshot_time,
    // which wins over the auto rule (slowest transmitted packet clears
    // the widest barrier by clear_sigmas initial widths).
    std::size_t steps = 0;
    double snapshot_time = 0.0;
    double clear_sigmas = 5.0;
    std::size_t stride = 100;

    std::string out_dir;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Number of steps realizing the sweep's common snapshot time. d_max and
/// sigma_max are the widest barrier and widest packet in the sweep.
std::size_t resolve_steps(const ExperimentConfig& cfg, std::size_t d_max, double sigma_max);

/// Validates grid/barrier/packet geometry and the boundary-safety rule
/// (free max stays 8 sigma(t) clear of the right wall at snapshot time).
/// Throws std::invalid_argument naming the offending field.
void validate_config(const ExperimentConfig& cfg, std::size_t d_max, double sigma_max,
                     std::size_t steps);

/// One paired simulation result.
struct PairOutcome {
    RunRecord record;
    dvec dens_tunneled; ///< final-snapshot density, barrier run
    dvec dens_free;     ///< final-snapshot density, free run
    WaveFunction psi_tunneled;
    WaveFunction psi_free;
    double snapshot_time = 0.0;
    double max_free = 0.0;
    double max_transmitted = 0.0; ///< NaN while undefined
    double shift = 0.0;           ///< NaN while undefined
    double transmitted_norm = 0.0;
    double peak_transmitted_density = 0.0;
    /// Weighted mean positive wave number of the transmitted part at the
    /// final snapshot; NaN when nothing was transmitted.
    double mean_transmitted_k = 0.0;
    std::vector<std::string> flags;

    double envelope_violation() const { return record.envelope_violation; }
};

/// Runs the barrier and the free simulation in lockstep from one shared
/// initial packet (asserted by checksum), sampling observables every
/// cfg.stride steps. Nothing-transmitted outcomes are flagged, not
/// thrown; boundary contamination propagates as an exception.
PairOutcome run_pair(const ExperimentConfig& cfg, double sigma, std::size_t width_d,
                     double height_h, std::size_t steps);

/// run_pair at the config's own point with the auto snapshot rule.
PairOutcome run_pair(const ExperimentConfig& cfg);

struct SweepRow {
    double sigma = 0.0;
    std::size_t width_d = 0;
    double height_h = 0.0;
    double snapshot_time = 0.0;
    double max_free = 0.0;
    double max_transmitted = 0.0;
    double shift = 0.0;
    double transmitted_norm = 0.0;
    double peak_transmitted_density = 0.0;
    double mean_transmitted_k = 0.0;
    double envelope_violation = 0.0;
    std::vector<std::string> flags;
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

/// Fig. 1: fixed height, one run per barrier width at a common snapshot
/// time. Returns the summary table and the labeled final densities
/// ("free" plus one "d<width>" column per run).
struct SnapshotResult {
    SweepTable table;
    std::vector<std::pair<std::string, dvec>> densities;
};
SnapshotResult snapshot_experiment(const ExperimentConfig& cfg);

/// Fig. 2: fixed width (cfg.width_d), one run per barrier height.
SweepTable height_sweep(const ExperimentConfig& cfg);

/// Fig. 3: cross product of sigma_list and d_list.
SweepTable width_scan(const ExperimentConfig& cfg);

} // namespace qtunnel
