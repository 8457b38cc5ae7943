// qtunnel: propagates Gaussian wave packets against square barriers with
// a norm-conserving Crank-Nicolson integrator and measures the shift of
// the transmitted maximum against a free reference packet.
//
// Subcommands: single-run, snapshot, height-sweep, width-scan.
// Exit codes: 0 success, 1 usage/configuration error, 2 physics error
// (e.g. probability reaching the hard walls).

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "qtunnel/cli_io.hpp"
#include "qtunnel/experiments.hpp"

namespace {

using namespace qtunnel;

std::size_t sweep_steps(const io::CliInvocation& inv) {
    const ExperimentConfig& cfg = inv.cfg;
    if (inv.subcommand == "single-run") return resolve_steps(cfg, cfg.width_d, cfg.sigma);
    if (inv.subcommand == "height-sweep") return resolve_steps(cfg, cfg.width_d, cfg.sigma);
    const std::size_t d_max =
        cfg.d_list.empty() ? 0 : *std::max_element(cfg.d_list.begin(), cfg.d_list.end());
    if (inv.subcommand == "width-scan") {
        const double sigma_max =
            cfg.sigma_list.empty()
                ? cfg.sigma
                : *std::max_element(cfg.sigma_list.begin(), cfg.sigma_list.end());
        return resolve_steps(cfg, d_max, sigma_max);
    }
    return resolve_steps(cfg, d_max, cfg.sigma);
}

int run(const io::CliInvocation& inv) {
    const ExperimentConfig& cfg = inv.cfg;
    const std::string dir = cfg.out_dir;
    std::filesystem::create_directories(dir);

    std::vector<std::string> files;
    io::write_config_echo(dir + "/config.json", cfg);
    files.push_back("config.json");

    if (inv.subcommand == "single-run") {
        const PairOutcome o = run_pair(cfg);
        io::write_density_csv(dir + "/densities.csv",
                              {{"free", o.dens_free}, {"tunneled", o.dens_tunneled}});
        io::write_timeseries_csv(dir + "/record.csv", o.record);
        files.push_back("densities.csv");
        files.push_back("record.csv");
        std::cout << "single-run: d=" << cfg.width_d << " h=" << cfg.height_h
                  << " t=" << io::format_double(o.snapshot_time)
                  << " shift=" << io::format_double(o.shift)
                  << " transmitted_norm=" << io::format_double(o.transmitted_norm) << "\n";
    } else if (inv.subcommand == "snapshot") {
        const SnapshotResult r = snapshot_experiment(cfg);
        io::write_density_csv(dir + "/densities.csv", r.densities);
        io::write_summary_csv(dir + "/summary.csv", r.table);
        files.push_back("densities.csv");
        files.push_back("summary.csv");
        std::cout << "snapshot: " << r.table.rows.size() << " widths -> " << dir << "\n";
    } else if (inv.subcommand == "height-sweep") {
        const SweepTable t = height_sweep(cfg);
        io::write_summary_csv(dir + "/summary.csv", t);
        files.push_back("summary.csv");
        std::cout << "height-sweep: " << t.rows.size() << " heights -> " << dir << "\n";
    } else if (inv.subcommand == "width-scan") {
        const SweepTable t = width_scan(cfg);
        io::write_summary_csv(dir + "/summary.csv", t);
        files.push_back("summary.csv");
        std::cout << "width-scan: " << t.rows.size() << " rows -> " << dir << "\n";
    }

    io::write_run_manifest(dir + "/manifest.json", inv.subcommand, cfg, sweep_steps(inv), files);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const qtunnel::io::ParseOutcome parsed = qtunnel::io::parse_invocation(args);
    if (!parsed.invocation) {
        (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message << "\n";
        return parsed.exit_code;
    }
    try {
        return run(*parsed.invocation);
    } catch (const qtunnel::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
